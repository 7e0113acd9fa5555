#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cuspforge/cusp_generator.hpp"
#include "cuspforge/fit.hpp"
#include "cuspforge/grid.hpp"

namespace cuspforge {

// Real traces of M and D on the negative hodograph axis.
struct AxisTraces {
    std::function<double(double)> M;
    std::function<double(double)> D;
    std::string source;
    // Kinks of piecewise traces; quadrature intervals are split there.
    std::vector<double> breakpoints;
};

struct TwoPhaseBundle {
    std::string kind;
    double r = 0;
    int grid_res = 0;
    double retained_radius = 0;
    // u_plus on the upper physical grid, u_minus <= 0 on its mirror image.
    ScalarField u_plus, u_minus;
    FreeBoundaryCurve f_plus, f_minus;
    EtaMap eta_plus, eta_minus;
    // Filled by pair_transforms: v_plus and the conjugate U_plus on upper
    // grids, v_minus and U_minus on lower ones.
    ScalarField v_plus, v_minus;
    ScalarField U_plus, U_minus;
    ComplexField Q_plus, Q_minus, P_plus, P_minus;
    bool transformed = false;
    std::optional<AxisTraces> closed_form;
};

// u- (x, y) = -u+ (x, -y), f- = -f+, M = 0 and D = P+ in closed form.
TwoPhaseBundle build_symmetric(const CuspSpec& spec, double r, int grid_res);
// u+ = y, u- = y on the mirror: no branch point.
TwoPhaseBundle build_flat(double r, int grid_res);
// Minus phase is the reflected plus phase translated left by shift (rounded
// to whole cells, default r/4): it sits in contact on (-shift, 0) while the
// plus phase has already separated.
TwoPhaseBundle build_shifted(const CuspSpec& spec, double r, int grid_res, double shift = -1.0);
// Symmetric bundle with only the f_minus samples scaled by factor.
TwoPhaseBundle build_perturbed(const CuspSpec& spec, double r, int grid_res, double factor = 1.1);

// Closed-form traces for the symmetric D plus a user M given by real power
// series coefficients m[1] t + m[2] t^2 + ... (m[0] must be 0).
AxisTraces hook_traces(const CuspSpec& spec, const std::vector<double>& m);

std::vector<double> mirror_values(const ScalarField& field);

struct PairReport {
    double band_inner = 0, band_outer = 0;
    double plus_modulus = 0;   // max ||Q+| - 1| on the separated axis band
    double minus_modulus = 0;  // same for Q-
    double gradient_gap = 0;   // max ||grad v+| - |grad v-|| on the axis band
    double coincidence_mismatch = 0;  // max |eta+' dv+/dy' - eta-' dv-/dy'|
    double coincidence_excess = 0;    // max(0, eta' dv/dy' - 1)
    double eta_gap = 0;               // max |eta+ - eta-| on the eta mesh
    int separated_nodes = 0;
    int coincidence_nodes = 0;
    bool modulus_ok(double tol = 1e-3) const {
        return plus_modulus <= tol && minus_modulus <= tol;
    }
};

// Conformal hodographs of u+ and of the reflection -u-(x, -y); v-, U- are
// mirrored back. Q = dv/dx' - i dv/dy', P = -i (Q + i)/(Q - i).
PairReport pair_transforms(TwoPhaseBundle& bundle);

struct MDFields {
    ComplexField M, D, P_prime;  // on the upper hodograph grid
    double reconstruction_plus = 0;   // max |P+ - (M + D)|
    double reconstruction_minus = 0;  // max |P-(z) - conj(M(zbar)) + conj(D(zbar))|
    double im_M_axis = 0;
    double re_D_contact = 0;
    double im_D_separated = 0;
    std::vector<unsigned char> separated;  // axis nodes with v+ > v-
    double band_inner = 0, band_outer = 0;
};

// Throws AxisMismatch when an axis condition fails by more than tol on the band.
MDFields md_decompose(const TwoPhaseBundle& bundle, double tol = 5e-2);

// Strict local minima of |D| along the axis with |D| <= tol. Minima whose
// neighbours are all below floor are rounding noise and skipped.
std::vector<double> d_zeros(const MDFields& md, double tol = 0.1, double floor = 1e-8);

// Linear interpolation of Re M, Re D along the axis row.
AxisTraces grid_traces(const MDFields& md);

struct ExpansionReport {
    std::vector<double> xs;  // negative mesh
    std::vector<double> Phi, Psi, phi, psi;
    double Phi_order = 0, Psi_order = 0, psi_order = 0;
    double Psi_coefficient = 0, psi_coefficient = 0;
    double phi_linear_coefficient = 0;
    bool Phi_zero = false, psi_zero = false;  // identically zero, order NaN
    double composition_plus = 0;   // max |f+(phi + psi) - (Phi + Psi)|
    double composition_minus = 0;  // max |f-(phi - psi) - (Phi - Psi)|
    int composition_samples = 0;
};

// Adaptive quadrature (relative tolerance 1e-10) of the four integrands on a
// geometric mesh in [x_lo, -1e-5]; orders fitted over the window. With curves
// the composition against f+ and f- is measured too. Throws FitFailure when
// Psi cannot be fitted.
ExpansionReport expansion_integrals(const AxisTraces& traces, double x_lo,
                                    const FreeBoundaryCurve* f_plus = nullptr,
                                    const FreeBoundaryCurve* f_minus = nullptr,
                                    FitWindow window = {}, int samples = 200);

// Same on the grid traces of md. The window defaults to 4h <= |x'| <= 32h:
// below a few cells the linear trace of D ~ |x'|^{1/2} biases the fit.
ExpansionReport expansion_integrals(const MDFields& md, double x_lo,
                                    const FreeBoundaryCurve* f_plus = nullptr,
                                    const FreeBoundaryCurve* f_minus = nullptr,
                                    std::optional<FitWindow> window = std::nullopt,
                                    int samples = 200);

struct SymmetryReport {
    double eta_gap = 0;   // max |eta+ - eta-| from arc length on x < 0
    double f_sum = 0;     // max |f+ + f-|
    double grad_gap = 0;  // max |grad v+ (eta+) - R grad v- (eta-)|, R flips d/dx'
    bool applicable = false;
    bool conclusion_holds = false;
    double tol = 0;
    double conclusion_tol = 0;
};

SymmetryReport symmetry_lemma_check(const TwoPhaseBundle& bundle, double tol = 1e-6,
                                    double conclusion_tol = 1e-3);

std::string format_report(const PairReport& r);
std::string format_report(const MDFields& md);
std::string format_report(const ExpansionReport& e);
std::string format_report(const SymmetryReport& s);

}  // namespace cuspforge
