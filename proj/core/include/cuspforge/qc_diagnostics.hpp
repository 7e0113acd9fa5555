#pragma once

#include <string>
#include <vector>

#include "cuspforge/cusp_generator.hpp"
#include "cuspforge/fit.hpp"
#include "cuspforge/grid.hpp"
#include "cuspforge/nonlinearity.hpp"

namespace cuspforge {

// Q = dU/dx - i F2(grad U) with masked gradient stencils. F must be
// normalized (Hessian Id at 0).
ComplexField compute_Q(const ScalarField& U, const Nonlinearity& F);

struct BeltramiField {
    ComplexField mu;
    ScalarField m_norm;  // ||Id - Hess F(grad U)||_2
    ScalarField bound;   // m_norm / (2 - m_norm)
    Mask degenerate;     // |grad A| <= 1e-12, mu set to 0
    double stencil_tol = 0;
    int violations = 0;  // nodes with |mu| > bound + stencil_tol
    int nodes = 0;       // nodes where mu was evaluated
    double sup_mu = 0;
    double sup_bound = 0;
    double delta = 0;    // sup m_norm
};

// mu = dzbar Q / dz Q with the divergence equation of U substituted, so that
// with a = Uxx, b = Uxy and M = Id - Hess F(grad U)
//   2 dzbar Q = (m11 a + m12 b) + i (m12 a + m22 b)
//   2 dz Q    = (2a - (m11 a + m12 b)) - i (2b - (m12 a + m22 b)).
// stencil_tol < 0 selects 50 h^2 (1 + sup |second differences|).
// Throws NormTooLarge if m_norm >= 2 anywhere.
BeltramiField beltrami(const ScalarField& U, const Nonlinearity& F, double stencil_tol = -1.0);

// Ratio of the Wirtinger stencils of Q itself, without using the equation.
ComplexField beltrami_stencil_ratio(const ScalarField& U, const Nonlinearity& F);

struct ConjugatePair {
    ComplexField P;                // U + iV
    double axis_product = 0;       // max |U V| on the axis
    double contact_residual = 0;   // max |U| on the contact half of the axis
};

// V is the line integral of -F2 dx + F1 dy along the segment from the origin.
// contact_left: U = 0 on x <= 0 and U >= 0 on x >= 0 (mirrored otherwise),
// checked on the axis with tolerance tol (default 10 h^2); a failure throws
// ContactSplitViolation.
ConjugatePair conjugate_pair_P(const ScalarField& U, const Nonlinearity& F, bool contact_left,
                               double tol = -1.0);

// field^2 on the upper half, conj(field(conj z)^2) below, on the grid
// mirrored through y = 0. Throws AxisMismatch when |Im field^2| > tol on the axis.
ComplexField reflect_even_square(const ComplexField& field, double tol = 1e-3);

enum class BranchCondition { thin, one_phase };

std::string to_string(BranchCondition c);

struct BranchSet {
    std::vector<double> points;
    BranchCondition condition = BranchCondition::thin;
    double detection_tol = 0;
    int degenerate_runs = 0;  // hit intervals too long to be isolated points
};

// Axis nodes where U = 0, grad U = 0 (thin) or u = 0, |grad u| = 1
// (one_phase) hold within tol; adjacent hits are clustered and clusters
// closer than 2h merged. A run of hits longer than max(8, n/4) axis nodes
// (n finite ones) is re-cut at ten times its smallest defect; if it is still
// that long it is a whole interval, e.g. u = y, and is counted in
// degenerate_runs, otherwise its best node is the point.
BranchSet branch_points(const ScalarField& field, BranchCondition condition, double tol = 0.1);

// Power law fit of the free boundary over window.lo <= |x| <= window.hi, x < 0.
PowerFit fit_cusp_exponent(const FreeBoundaryCurve& curve, FitWindow window = {});

}  // namespace cuspforge
