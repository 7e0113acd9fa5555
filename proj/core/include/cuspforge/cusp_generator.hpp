#pragma once

#include <vector>

#include "cuspforge/analytic_maps.hpp"
#include "cuspforge/grid.hpp"

namespace cuspforge {

struct FreeBoundaryCurve {
    std::vector<double> xs;  // physical abscissae, strictly increasing
    std::vector<double> fs;
    std::vector<unsigned char> contact;  // f == 0 exactly where set
    std::vector<double> xprime;          // hodograph abscissa of each sample
    double cusp_exponent_estimate = 0;
    double cusp_coefficient_estimate = 0;
    double fit_r_squared = 0;
};

// Linear interpolation of f at x; 0 to the right of the samples, NaN to the left.
double interpolate(const FreeBoundaryCurve& curve, double x);

struct EtaMap {
    std::vector<double> xs;  // <= 0, increasing to 0
    std::vector<double> etas;
    double derivative_at_zero = 1.0;
};

double interpolate(const EtaMap& eta, double x);

// v and its harmonic conjugate V, both evaluated from the radial integral of
// Q = (1 + iP)/(P + i), on the upper rectangle [-r, r] x [0, r].
struct HodographPotentials {
    ScalarField v;
    ScalarField V;
};

Grid hodograph_grid(double r, int grid_res);

HodographPotentials build_potentials(const AnalyticMap& p_map, double r, int grid_res);
ScalarField build_v(const CuspSpec& spec, double r, int grid_res);

// Q(z) for the given P-map.
cplx q_of(const AnalyticMap& p_map, cplx z);

// d/dy v(0,0) by a one-sided probe of the radial integral at step 1e-9.
double origin_slope(const AnalyticMap& p_map);

EtaMap solve_eta(const AnalyticMap& p_map, double x_lo, double step);
EtaMap solve_eta(const CuspSpec& spec, double x_lo, double step);

struct FitWindow {
    double lo = 1e-3;
    double hi = 1e-2;
};

// f on the left branch from the eta samples, plus zero samples on the contact
// side up to the hodograph abscissa contact_xprime.
FreeBoundaryCurve free_boundary_f(const AnalyticMap& p_map, const EtaMap& eta,
                                  double contact_xprime = 0.0, int contact_samples = 0,
                                  FitWindow window = {});
FreeBoundaryCurve free_boundary_f(const CuspSpec& spec, const EtaMap& eta,
                                  FitWindow window = {});

// Physical abscissa V(x', 0) of a hodograph axis point.
double axis_abscissa(const AnalyticMap& p_map, double xprime);

struct InversionStats {
    double retained_radius = 0;  // r shrunk so that |grad v| >= 0.25
    int attempted = 0;
    int solved = 0;
    int outside = 0;
    int diverged = 0;
};

struct InversionResult {
    ScalarField u;        // NaN outside the positivity region
    ScalarField preimage_x;  // hodograph coordinates of each physical node
    ScalarField preimage_y;
    InversionStats stats;
};

// Inverts S = (V, v) node by node on a physical grid with the same geometry
// as the hodograph grid. Throws NewtonDivergence when more than 1% of the
// attempted nodes fail to converge.
InversionResult invert_hodograph(const ScalarField& v, const ScalarField& V);

struct OnePhaseSolution {
    CuspSpec spec{1};
    double r = 0;
    int grid_res = 0;
    ScalarField v;
    ScalarField V;
    ScalarField u;
    FreeBoundaryCurve boundary;
    EtaMap eta;
    InversionStats inversion;
    double conjugate_loop_residual = 0;  // grid conjugate of v against V
    double conjugate_max_deviation = 0;
    double origin_slope = 0;
};

struct GenerateOptions {
    FitWindow window{};
    double eta_step_fraction = 1e-3;
};

OnePhaseSolution generate_onephase(const CuspSpec& spec, double r, int grid_res,
                                   const GenerateOptions& options = {});
// Same pipeline for an arbitrary P-map (used by the two-phase hooks).
OnePhaseSolution generate_from_map(const AnalyticMap& p_map, const CuspSpec& tag, double r,
                                   int grid_res, const GenerateOptions& options = {});

struct OnePhaseReport {
    double free_arc_max_deviation = 0;  // max ||grad u| - 1| on the free arc
    double contact_min_gradient = 0;    // min |grad u| on the contact set
    double reciprocity_max = 0;         // max ||grad u|(S p) |grad v|(p) - 1|
    double identity_f_prime = 0;        // max |f' dv/dy' - dv/dx'| along eta
    double identity_eta_prime = 0;      // max |eta' dv/dy' - 1|
    double arc_length = 0;              // max |eta' - sqrt(1 + f'^2)|
    bool boundary_positive = false;     // f > 0 for x < 0 and f = 0 for x >= 0
    int free_arc_samples = 0;
    int contact_samples = 0;
    int reciprocity_samples = 0;
    double band_inner = 0;  // checks use hodograph radii in [band_inner, band_outer]
    double band_outer = 0;
};

// Numerical checks of the boundary conditions and hodograph identities,
// sampled away from the branch point on the band r_eff/8 <= |x'| <= 3 r_eff/4.
OnePhaseReport check_onephase(const OnePhaseSolution& solution, int reciprocity_points = 200,
                              int identity_points = 50);

}  // namespace cuspforge
