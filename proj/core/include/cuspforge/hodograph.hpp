#pragma once

#include <string>
#include <vector>

#include "cuspforge/cusp_generator.hpp"
#include "cuspforge/grid.hpp"

namespace cuspforge {

enum class HodographKind { classical, conformal };

std::string to_string(HodographKind kind);

struct HodographPair {
    HodographKind kind = HodographKind::conformal;
    // T on the physical grid: (x', y') = (U, u) or (x, u).
    ScalarField x_prime;
    ScalarField y_prime;
    // On the hodograph grid: v, the physical abscissa of each node, and for
    // the classical kind w = v - y'.
    ScalarField v;
    ScalarField x_of;
    ScalarField w;
    // eta(x) = U(x, f(x)) read off the conjugate along the free boundary.
    EtaMap eta;
    double loop_residual = 0;
    int fallback_nodes = 0;
    int attempted = 0;
    int solved = 0;
    int diverged = 0;
    int degenerate = 0;  // solved nodes with Jacobian below 0.1
};

// Pulls (x', y', v = y) back onto a regular hodograph grid of the same
// geometry as u by a Newton solve of T(q) = target per node. Throws
// NotInvertible when more than 1% of the nodes diverge or have a Jacobian
// below 0.1.
HodographPair conformal_forward(const ScalarField& u, const FreeBoundaryCurve& f);
HodographPair classical_forward(const ScalarField& u, const FreeBoundaryCurve& f);

struct ComplementarityReport {
    double positive_part = 0;  // max |F_d(grad w)| on {w > active_tol} of the line
    double sign_violation = 0; // max(0, F_d(grad w)) on {w <= active_tol}
    double pullback = 0;       // max |w(x', 0) - f(x')|
    int positive_nodes = 0;
    int active_nodes = 0;
};

// Line conditions of the classical hodograph for F = (x'^2 + x_d^2)/(1 + x_d),
// over axis nodes with inner <= |x'| <= outer.
ComplementarityReport classical_complementarity(const HodographPair& pair,
                                                const FreeBoundaryCurve& f, double inner = 0.0,
                                                double outer = 1e300, double active_tol = -1.0);

struct IdentityLine {
    std::string name;
    double max_residual = 0;
    Point node{};
    int samples = 0;
};

struct IdentityReport {
    std::vector<IdentityLine> lines;
    double max_residual() const;
    const IdentityLine& line(const std::string& name) const;
};

std::string format_report(const IdentityReport& report);

struct IdentityOptions {
    double inner = 0.0;  // hodograph radii / |x'| band used for sampling
    double outer = 1e300;
    int points = 50;
};

// f' dv/dy' = dv/dx' and eta' dv/dy' = 1 along eta, |grad u||grad v| = 1 on
// hodograph nodes, and eta = U(x, f(x)) against the integral of |grad u| ds.
IdentityReport check_identities(const HodographPair& pair, const EtaMap& eta,
                                const FreeBoundaryCurve& f,
                                const IdentityOptions& options = {});

}  // namespace cuspforge
