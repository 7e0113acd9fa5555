#include "cuspforge/cusp_generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cuspforge/error.hpp"
#include "cuspforge/field_ops.hpp"
#include "cuspforge/fit.hpp"
#include "cuspforge/parallel.hpp"
#include "cuspforge/quadrature.hpp"

namespace cuspforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const cplx I1(0.0, 1.0);

// G(z) = integral of Q from 0 to z along the ray, with t = s^2 so that the
// half-integer power in P becomes a polynomial in s.
cplx radial_integral(const AnalyticMap& p_map, cplx z) {
    if (z == cplx(0.0, 0.0)) return 0.0;
    QuadratureOptions opt;
    opt.abs_tol = 1e-12;
    auto comp = [&](bool imag_part) {
        return integrate(
            [&](double s) {
                const cplx q = q_of(p_map, s * s * z);
                return 2.0 * s * (imag_part ? q.imag() : q.real());
            },
            0.0, 1.0, opt);
    };
    return z * cplx(comp(false), comp(true));
}

}  // namespace

double interpolate(const FreeBoundaryCurve& c, double x) {
    if (c.xs.empty() || x < c.xs.front()) return kNaN;
    if (x >= c.xs.back()) return x == c.xs.back() ? c.fs.back() : 0.0;
    const auto it = std::upper_bound(c.xs.begin(), c.xs.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - c.xs.begin());
    const double t = (x - c.xs[k - 1]) / (c.xs[k] - c.xs[k - 1]);
    return (1 - t) * c.fs[k - 1] + t * c.fs[k];
}

double interpolate(const EtaMap& e, double x) {
    if (e.xs.empty() || x < e.xs.front() || x > e.xs.back()) return kNaN;
    if (x == e.xs.back()) return e.etas.back();
    const auto it = std::upper_bound(e.xs.begin(), e.xs.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - e.xs.begin());
    const double t = (x - e.xs[k - 1]) / (e.xs[k] - e.xs[k - 1]);
    return (1 - t) * e.etas[k - 1] + t * e.etas[k];
}

cplx q_of(const AnalyticMap& p_map, cplx z) {
    const cplx p = eval(p_map, z);
    if (std::abs(p + I1) < kPoleGuard) throw PoleError("P = -i is a pole of the P-to-Q map");
    return (1.0 + I1 * p) / (p + I1);
}

Grid hodograph_grid(double r, int grid_res) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("radius must lie in (0, 1)");
    if (grid_res < 65 || grid_res % 2 == 0)
        throw InvalidArgument("grid_res must be odd and at least 65");
    const double h = 2.0 * r / (grid_res - 1);
    const int ny = (grid_res - 1) / 2 + 1;
    return Grid::with_spacing(-r, 0.0, h, grid_res, ny, HalfPlane::upper);
}

HodographPotentials build_potentials(const AnalyticMap& p_map, double r, int grid_res) {
    const Grid g = hodograph_grid(r, grid_res);
    HodographPotentials out{ScalarField(g), ScalarField(g)};
    parallel_for(g.size(), [&](std::size_t k) {
        const int i = static_cast<int>(k % g.nx()), j = static_cast<int>(k / g.nx());
        const cplx G = radial_integral(p_map, cplx(g.x(i), g.y(j)));
        out.v.values[k] = G.real();
        out.V.values[k] = -G.imag();
    });
    return out;
}

ScalarField build_v(const CuspSpec& spec, double r, int grid_res) {
    return build_potentials(spec.p_map(), r, grid_res).v;
}

double origin_slope(const AnalyticMap& p_map) {
    const double d = 1e-9;
    const double v1 = radial_integral(p_map, cplx(0.0, d)).real();
    const double v2 = radial_integral(p_map, cplx(0.0, 2 * d)).real();
    return (4.0 * v1 - v2) / (2.0 * d);
}

double axis_abscissa(const AnalyticMap& p_map, double xprime) {
    return -radial_integral(p_map, cplx(xprime, 0.0)).imag();
}

EtaMap solve_eta(const AnalyticMap& p_map, double x_lo, double step) {
    if (!(x_lo < 0.0)) throw InvalidArgument("solve_eta needs x_lo < 0");
    if (!(step > 0.0) || step > 1e-3 * std::abs(x_lo) * (1 + 1e-12))
        throw InvalidArgument("solve_eta needs 0 < step <= 1e-3 |x_lo|");
    // eta' = 1/dv/dy' on the axis, which is (1 + P^2)/(1 - P^2) for real P.
    auto rhs = [&](double eta) {
        const cplx p = eval(p_map, cplx(eta, 0.0));
        if (std::norm(p) >= 1.0 - 1e-6)
            throw SingularityError("|P(eta)|^2 reached 1 at eta = " + std::to_string(eta));
        const cplx q = (1.0 + I1 * p) / (p + I1);
        return -1.0 / q.imag();
    };
    auto rk4 = [&](double eta, double dx) {
        const double k1 = rhs(eta);
        const double k2 = rhs(eta + 0.5 * dx * k1);
        const double k3 = rhs(eta + 0.5 * dx * k2);
        const double k4 = rhs(eta + dx * k3);
        return eta + dx / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    };
    // Advance by dx < 0, halving on any step that fails to decrease eta.
    auto advance = [&](auto&& self, double eta, double dx, int depth) -> double {
        const double next = rk4(eta, dx);
        if (std::isfinite(next) && next < eta) return next;
        if (depth >= 30) throw SingularityError("eta lost monotonicity");
        const double mid = self(self, eta, 0.5 * dx, depth + 1);
        return self(self, mid, 0.5 * dx, depth + 1);
    };

    const long nsteps = static_cast<long>(std::ceil(std::abs(x_lo) / step - 1e-9));
    const double dx = x_lo / static_cast<double>(nsteps);
    EtaMap out;
    out.xs.resize(nsteps + 1);
    out.etas.resize(nsteps + 1);
    out.xs[nsteps] = 0.0;
    out.etas[nsteps] = 0.0;
    double eta = 0.0;
    for (long m = 1; m <= nsteps; ++m) {
        eta = advance(advance, eta, dx, 0);
        out.xs[nsteps - m] = m == nsteps ? x_lo : dx * static_cast<double>(m);
        out.etas[nsteps - m] = eta;
    }
    out.derivative_at_zero = rhs(0.0);
    return out;
}

EtaMap solve_eta(const CuspSpec& spec, double x_lo, double step) {
    return solve_eta(spec.p_map(), x_lo, step);
}

FreeBoundaryCurve free_boundary_f(const AnalyticMap& p_map, const EtaMap& eta,
                                  double contact_xprime, int contact_samples, FitWindow window) {
    const std::size_t n = eta.xs.size();
    if (n < 2 || eta.xs.back() != 0.0) throw InvalidArgument("eta map must end at x = 0");
    // dv/dx' on the axis from the closed-form Q-trace.
    auto dvdx = [&](double s) { return q_of(p_map, cplx(s, 0.0)).real(); };
    FreeBoundaryCurve c;
    c.xs = eta.xs;
    c.xprime = eta.etas;
    c.fs.assign(n, 0.0);
    c.contact.assign(n, 0);
    c.contact[n - 1] = 1;
    QuadratureOptions opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = 1e-12;
    for (std::size_t k = n - 1; k-- > 0;) {
        opt.endpoint_singular = k == n - 2;
        c.fs[k] = c.fs[k + 1] - integrate(dvdx, eta.etas[k], eta.etas[k + 1], opt);
    }
    for (int m = 1; m <= contact_samples; ++m) {
        const double xp = contact_xprime * m / contact_samples;
        c.xs.push_back(axis_abscissa(p_map, xp));
        c.xprime.push_back(xp);
        c.fs.push_back(0.0);
        c.contact.push_back(1);
    }
    const PowerFit fit = fit_power_law(eta.xs, std::span<const double>(c.fs.data(), n), window.lo,
                                       window.hi);
    c.cusp_exponent_estimate = fit.exponent;
    c.cusp_coefficient_estimate = fit.coefficient;
    c.fit_r_squared = fit.r_squared;
    return c;
}

FreeBoundaryCurve free_boundary_f(const CuspSpec& spec, const EtaMap& eta, FitWindow window) {
    return free_boundary_f(spec.p_map(), eta, 0.0, 0, window);
}

OnePhaseSolution generate_from_map(const AnalyticMap& p_map, const CuspSpec& tag, double r,
                                   int grid_res, const GenerateOptions& options) {
    OnePhaseSolution s;
    s.spec = tag;
    s.r = r;
    s.grid_res = grid_res;
    auto pot = build_potentials(p_map, r, grid_res);
    s.v = std::move(pot.v);
    s.V = std::move(pot.V);
    s.origin_slope = origin_slope(p_map);

    // Cross-check of V against the grid conjugate of v; the loop residual is
    // large near the branch point, so it is recorded rather than enforced.
    const auto conj =
        harmonic_conjugate(s.v, {0.0, 0.0}, {}, std::numeric_limits<double>::infinity());
    s.conjugate_loop_residual = conj.loop_residual;
    s.conjugate_max_deviation = max_abs_diff(conj.U, s.V);

    InversionResult inv = invert_hodograph(s.v, s.V);
    s.u = std::move(inv.u);
    s.inversion = inv.stats;

    const double reff = s.inversion.retained_radius;
    const double x_lo = axis_abscissa(p_map, -reff);
    s.eta = solve_eta(p_map, x_lo, options.eta_step_fraction * std::abs(x_lo));
    const int contact_samples =
        static_cast<int>(std::ceil(reff / s.v.grid.h()));
    s.boundary = free_boundary_f(p_map, s.eta, reff, contact_samples, options.window);
    return s;
}

OnePhaseSolution generate_onephase(const CuspSpec& spec, double r, int grid_res,
                                   const GenerateOptions& options) {
    return generate_from_map(spec.p_map(), spec, r, grid_res, options);
}

}  // namespace cuspforge
