#include <cmath>

#include "cuspforge/cusp_generator.hpp"
#include "cuspforge/error.hpp"
#include "cuspforge/field_ops.hpp"
#include "doctest.h"

using namespace cuspforge;

namespace {

const AnalyticMap kZeroP = Series{0.0, {0.0}};

const OnePhaseSolution& n1_solution() {
    static const OnePhaseSolution s = generate_onephase(CuspSpec(1), 0.5, 257);
    return s;
}

// Composite Simpson rule, used as an oracle independent of the library's
// adaptive quadrature.
template <class Fn>
double simpson(Fn&& f, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int k = 1; k < intervals; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

// For n = 1 and real eta < 0: P = -sqrt|eta|, so eta' = (1 + P^2)/(1 - P^2).
double eta_rhs(double eta) { return (1 - eta) / (1 + eta); }

double rk4_eta(double x, int steps) {
    const double dx = x / steps;
    double e = 0;
    for (int k = 0; k < steps; ++k) {
        const double k1 = eta_rhs(e), k2 = eta_rhs(e + dx / 2 * k1), k3 = eta_rhs(e + dx / 2 * k2),
                     k4 = eta_rhs(e + dx * k3);
        e += dx / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return e;
}

// Halve the step until two successive answers agree to 1e-12.
double eta_oracle(double x) {
    int steps = 16;
    double prev = rk4_eta(x, steps);
    for (;;) {
        steps *= 2;
        const double next = rk4_eta(x, steps);
        if (std::abs(next - prev) <= 1e-12) return next;
        prev = next;
    }
}

// f(x) for n = 1 by Simpson quadrature of 2 Re P/(1 + P^2) (sign flipped,
// substituting sigma = tau^2) up to s = |eta(x)|.
double f_oracle(double x, int intervals) {
    const double s = -eta_oracle(x);
    return simpson([](double t) { return 4 * t * t / (1 + t * t); }, 0.0, std::sqrt(s), intervals);
}

}  // namespace

TEST_CASE("zero P gives the half-plane solution") {
    const HodographPotentials pot = build_potentials(kZeroP, 0.5, 65);
    const Grid& g = pot.v.grid;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            CHECK(std::abs(pot.v.at(i, j) - g.y(j)) <= 1e-15);
            CHECK(std::abs(pot.V.at(i, j) - g.x(i)) <= 1e-15);
        }
    const EtaMap eta = solve_eta(kZeroP, -0.1, 1e-4);
    for (std::size_t k = 0; k < eta.xs.size(); ++k) CHECK(std::abs(eta.etas[k] - eta.xs[k]) <= 1e-14);
}

TEST_CASE("v on the imaginary axis against an independent quadrature") {
    const double r = 0.5, y = r / 2;
    // P(i t y) = i (t y)^(1/2) e^(i pi/4) on the imaginary axis; t = s^2.
    const cplx rot = std::polar(std::sqrt(y), M_PI / 4) * cplx(0, 1);
    const double oracle = simpson(
        [&](double s) {
            const cplx P = s * rot;
            const cplx Q = (1.0 + cplx(0, 1) * P) / (P + cplx(0, 1));
            return -y * 2 * s * Q.imag();
        },
        0, 1, 20000);
    const ScalarField v = build_v(CuspSpec(1), r, 257);
    const auto [i, j] = v.grid.nearest({0.0, y});
    REQUIRE(v.grid.x(i) == 0.0);
    REQUIRE(v.grid.y(j) == doctest::Approx(y).epsilon(1e-15));
    CHECK(std::abs(v.at(i, j) - oracle) <= 1e-11);
    // Frozen from the oracle above.
    CHECK(oracle == doctest::Approx(0.14223206777900796).epsilon(1e-12));
}

TEST_CASE("v is discretely harmonic at grid_res 257") {
    // The second derivatives blow up like |z|^(-1/2) at the branch point, so
    // the disk of radius r/5 around it is masked out.
    const ScalarField& v = n1_solution().v;
    Mask m = full_mask(v.grid);
    for (int j = 0; j < v.grid.ny(); ++j)
        for (int i = 0; i < v.grid.nx(); ++i)
            if (std::hypot(v.grid.x(i), v.grid.y(j)) < 0.1) m[v.grid.index(i, j)] = 0;
    CHECK(laplacian_residual(v, m) <= 1e-3);
}

TEST_CASE("origin slope is 1 for the cusp family") {
    // The probe sits at 1e-9, and v(0, y)/y - 1 ~ sqrt(y) for n = 1.
    for (int n : {1, 2}) CHECK(origin_slope(CuspSpec(n).p_map()) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("eta against a step-halving RK4 oracle") {
    const EtaMap eta = solve_eta(CuspSpec(1), -0.1, 1e-4);
    CHECK(eta.xs.front() == -0.1);
    CHECK(eta.xs.back() == 0.0);
    CHECK(std::abs(eta.etas.front() - eta_oracle(-0.1)) <= 1e-9);
    // Closed form for n = 1: x = s - 2 log(1 + s) with s = -eta.
    const double s = -eta.etas.front();
    CHECK(std::abs(s - 2 * std::log1p(s) + 0.1) <= 1e-12);
    CHECK(eta.derivative_at_zero == doctest::Approx(1.0));
    CHECK_THROWS_AS(solve_eta(CuspSpec(1), 0.1, 1e-4), InvalidArgument);
    CHECK_THROWS_AS(solve_eta(CuspSpec(1), -0.1, 1e-2), InvalidArgument);
}

TEST_CASE("free boundary coefficient near the cusp") {
    const EtaMap eta = solve_eta(CuspSpec(1), -1e-3, 1e-6);
    const FreeBoundaryCurve c = free_boundary_f(CuspSpec(1), eta, FitWindow{1e-5, 1e-4});
    const double x = -1e-4;
    const double lib = interpolate(c, x) / std::pow(1e-4, 1.5);
    const double coarse = f_oracle(x, 2000) / std::pow(1e-4, 1.5);
    const double fine = f_oracle(x, 20000) / std::pow(1e-4, 1.5);
    CHECK(std::abs(coarse - fine) <= 1e-9 * fine);
    CHECK(std::abs(lib - fine) <= 1e-6 * fine);
    // The limit of f/|x|^(3/2) is 4/3 (frozen from the oracle's closed form
    // 4 (sqrt s - atan sqrt s) with s ~ |x|).
    CHECK(std::abs(fine - 4.0 / 3.0) <= 2e-2);
    CHECK(c.cusp_exponent_estimate == doctest::Approx(1.5).epsilon(1e-3));
}

TEST_CASE("generated n = 1 solution") {
    const OnePhaseSolution& s = n1_solution();
    const FreeBoundaryCurve& b = s.boundary;
    CHECK(b.cusp_exponent_estimate >= 1.47);
    CHECK(b.cusp_exponent_estimate <= 1.53);
    for (std::size_t k = 0; k < b.xs.size(); ++k) {
        if (b.xs[k] < 0) CHECK(b.fs[k] > 0);
        if (b.xs[k] >= 0) CHECK(b.fs[k] == 0.0);
    }
    CHECK(interpolate(b, 0.05) == 0.0);
    CHECK(std::isnan(interpolate(b, -10.0)));
    CHECK(s.inversion.retained_radius > 0);
    CHECK(s.inversion.solved == s.inversion.attempted - s.inversion.outside);

    const OnePhaseReport rep = check_onephase(s);
    CHECK(rep.boundary_positive);
    CHECK(rep.free_arc_max_deviation <= 5e-3);
    CHECK(rep.contact_min_gradient >= 1 - 5e-3);
    CHECK(rep.reciprocity_max <= 1e-2);
    CHECK(rep.identity_f_prime <= 1e-2);
    CHECK(rep.identity_eta_prime <= 1e-2);
    CHECK(rep.arc_length <= 1e-2);
    CHECK(rep.free_arc_samples > 0);
    CHECK(rep.contact_samples > 0);
}

TEST_CASE("identity hodograph inverts to u = y") {
    const Grid g = hodograph_grid(0.5, 65);
    const auto v = ScalarField::sample(g, [](double, double y) { return y; });
    const auto V = ScalarField::sample(g, [](double x, double) { return x; });
    const InversionResult inv = invert_hodograph(v, V);
    double worst = 0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (std::isfinite(inv.u.at(i, j))) worst = std::max(worst, std::abs(inv.u.at(i, j) - g.y(j)));
    CHECK(worst <= 1e-12);
    CHECK(inv.stats.solved > 0);
}

TEST_CASE("generator preconditions") {
    CHECK_THROWS_AS(hodograph_grid(1.0, 257), InvalidArgument);
    CHECK_THROWS_AS(hodograph_grid(0.5, 10), InvalidArgument);
    CHECK_THROWS_AS(hodograph_grid(0.5, 256), InvalidArgument);
}
