#include <cmath>
#include <random>

#include "cuspforge/error.hpp"
#include "cuspforge/nonlinearity.hpp"
#include "cuspforge/thin_obstacle.hpp"
#include "doctest.h"

using namespace cuspforge;

namespace {

Grid box(double h) {
    const int n = static_cast<int>(std::lround(1 / h));
    return Grid::with_spacing(-1, 0, h, 2 * n + 1, n + 1, HalfPlane::upper);
}

Grid unit_box(double h) {
    const int n = static_cast<int>(std::lround(1 / h));
    return Grid::with_spacing(0, 0, h, n + 1, n + 1, HalfPlane::upper);
}

double max_error(const ScalarField& v, double (*exact)(double, double)) {
    double worst = 0;
    for (int j = 0; j < v.grid.ny(); ++j)
        for (int i = 0; i < v.grid.nx(); ++i)
            worst = std::max(worst, std::abs(v.at(i, j) - exact(v.grid.x(i), v.grid.y(j))));
    return worst;
}

}  // namespace

TEST_CASE("nonlinearity values and normalization") {
    const Nonlinearity q = Nonlinearity::quadratic(), rb = Nonlinearity::rational_bernoulli();
    CHECK(q.F({3, 4}) == doctest::Approx(12.5));
    CHECK(rb.F({0, 1}) == doctest::Approx(0.5));
    CHECK(rb.normalization() == doctest::Approx(0.5));
    const Mat2 h0 = rb.normalized().hess({0, 0});
    CHECK(h0[0] == doctest::Approx(1.0));
    CHECK(h0[3] == doctest::Approx(1.0));
    CHECK(std::abs(h0[1]) <= 1e-15);
    CHECK_THROWS_AS(rb.F({0, -1}), DenominatorDegenerate);
    CHECK(Nonlinearity::from_name("rational_bernoulli").tag() == NonlinearityTag::rational_bernoulli);
    CHECK_THROWS_AS(Nonlinearity::from_name("cubic"), InvalidArgument);
    CHECK(rb.scaled(3).normalization() == doctest::Approx(0.5 / 3));
}

TEST_CASE("rational nonlinearity derivatives match finite differences") {
    const Nonlinearity rb = Nonlinearity::rational_bernoulli();
    const double e = 1e-6;
    for (Vec2 p : {Vec2{0.3, -0.2}, Vec2{-0.5, 0.7}, Vec2{0.1, 0.05}}) {
        const Vec2 g = rb.grad(p);
        CHECK(g[0] == doctest::Approx((rb.F({p[0] + e, p[1]}) - rb.F({p[0] - e, p[1]})) / (2 * e)).epsilon(1e-8));
        CHECK(g[1] == doctest::Approx((rb.F({p[0], p[1] + e}) - rb.F({p[0], p[1] - e})) / (2 * e)).epsilon(1e-8));
        const Mat2 H = rb.hess(p);
        CHECK(H[1] == doctest::Approx(H[2]));
        CHECK(H[3] == doctest::Approx((rb.grad({p[0], p[1] + e})[1] - rb.grad({p[0], p[1] - e})[1]) / (2 * e)).epsilon(1e-7));
    }
}

TEST_CASE("energy of simple fields") {
    const Grid g = unit_box(1.0 / 16);
    const auto y = ScalarField::sample(g, [](double, double y) { return y; });
    const auto p0 = make_problem(g, Nonlinearity::quadratic(), [](double, double) { return 0.0; });
    CHECK(energy(p0, ScalarField(g, 0.0)) == 0.0);
    CHECK(energy(p0, y) == doctest::Approx(0.5).epsilon(1e-14));
    const auto pr = make_problem(g, Nonlinearity::rational_bernoulli(), [](double, double) { return 0.0; });
    CHECK(energy(pr, y) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("energy gradient matches finite differences of the energy") {
    const Grid g = unit_box(1.0 / 8);
    const auto p = make_problem(g, Nonlinearity::rational_bernoulli(), [](double, double) { return 0.0; });
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0, 0.05);
    ScalarField v(g);
    for (auto& x : v.values) x = u(rng);
    const auto grad = energy_gradient(p, v);
    const double e = 1e-6;
    for (std::size_t k : {std::size_t(10), std::size_t(40), std::size_t(77)}) {
        ScalarField a = v, b = v;
        a.values[k] += e;
        b.values[k] -= e;
        CHECK(grad[k] == doctest::Approx((energy(p, a) - energy(p, b)) / (2 * e)).epsilon(1e-6));
    }
}

TEST_CASE("unconstrained minimizer v = y is recovered") {
    const Grid g = box(1.0 / 16);
    // Fixed on the bottom row too, so the constraint never binds.
    const auto p = make_problem(g, Nonlinearity::quadratic(), [](double, double y) { return y; }, true);
    SolveOptions o;
    o.tol = 1e-10;
    const SolveResult r = solve(p, initial_guess(p), o);
    CHECK(r.converged);
    CHECK(r.projected_gradient <= 1e-10);
    CHECK(max_error(r.v, [](double, double y) { return y; }) <= 1e-8);
    CHECK(r.kkt.max_interior_euler_lagrange_residual <= 1e-8);
    CHECK(r.feasibility_violations == 0);
}

TEST_CASE("flat data with the rational nonlinearity") {
    const Grid g = box(1.0 / 16);
    const auto p = make_problem(g, Nonlinearity::rational_bernoulli(), [](double, double) { return 1.0; });
    const SolveResult r = solve(p, initial_guess(p), 1e-10, 20000);
    CHECK(r.converged);
    CHECK(r.kkt.max_interior_euler_lagrange_residual <= 1e-8);
    CHECK(r.kkt.max_positive_part_flux <= 1e-8);
    CHECK(r.feasibility_violations == 0);
}

TEST_CASE("Signorini reference boundary conditions") {
    for (double r : {0.1, 0.5, 1.0}) {
        CHECK(std::abs(signorini32(-r, 0.0)) <= 1e-15);
        // d/dy at theta = 0 vanishes: r^(3/2) cos(3 theta/2) is even in theta.
        const double e = 1e-6;
        CHECK(std::abs((signorini32(r, e) - signorini32(r, 0)) / e) <= 1e-4);
    }
    CHECK(signorini32(0, 0) == 0.0);
}

TEST_CASE("KKT report of the exact Signorini field") {
    const Grid g = box(1.0 / 128);
    const auto p = make_problem(g, Nonlinearity::quadratic(), signorini32);
    const ScalarField v = ScalarField::sample(g, signorini32);
    const KKTReport k = kkt_report(p, v);
    CHECK(k.max_positive_part_flux <= 5e-3);
    CHECK(k.max_flux_sign_violation <= 5e-3);
    CHECK(k.positive_nodes > 0);
    CHECK(k.active_nodes > 0);
}

TEST_CASE("KKT negative control: v = y is all active with unit flux") {
    const Grid g = box(1.0 / 16);
    const auto p = make_problem(g, Nonlinearity::quadratic(), [](double, double y) { return y; });
    const KKTReport k = kkt_report(p, ScalarField::sample(g, [](double, double y) { return y; }));
    CHECK(k.positive_nodes == 0);
    CHECK(k.active_nodes == g.nx() - 2);
    CHECK(k.max_flux_sign_violation == doctest::Approx(1.0));
}

TEST_CASE("zero data gives zero residuals") {
    const Grid g = box(1.0 / 16);
    const auto p = make_problem(g, Nonlinearity::quadratic(), [](double, double) { return 0.0; });
    const KKTReport k = kkt_report(p, ScalarField(g, 0.0));
    CHECK(k.max_interior_euler_lagrange_residual == 0.0);
    CHECK(k.max_positive_part_flux == 0.0);
    CHECK(k.max_flux_sign_violation == 0.0);
    const SolveResult r = solve(p, ScalarField(g, 0.0), 1e-10, 10);
    CHECK(r.converged);
    CHECK(r.iterations == 0);
}

TEST_CASE("Signorini solve on coarse grids") {
    double prev = 1;
    for (double h : {1.0 / 16, 1.0 / 32}) {
        const auto p = make_problem(box(h), Nonlinearity::quadratic(), signorini32);
        SolveOptions o;
        o.tol = 1e-9;
        o.levels = 3;
        const SolveResult r = solve(p, initial_guess(p), o);
        CHECK(r.converged);
        CHECK(r.energy_monotone);
        CHECK(r.feasibility_violations == 0);
        CHECK(r.kkt.min_constraint_value >= 0.0);
        for (std::size_t k = 1; k < r.energies.size(); ++k)
            CHECK(r.energies[k] <= r.energies[k - 1] * (1 + 1e-12) + 1e-15);
        const double err = max_error(r.v, signorini32);
        CHECK(err < prev);
        prev = err;
        // Minimality: the discrete solution beats the sampled reference.
        const ScalarField ref = ScalarField::sample(p.grid, signorini32);
        CHECK(energy(p, r.v) <= energy(p, ref) + 1e-14);
        CHECK(variational_inequality_gap(p, r.v, ref) <= 1e-6);
    }
    CHECK(prev <= 2e-2);
}

TEST_CASE("solver preconditions") {
    const Grid g = box(1.0 / 8);
    const auto p = make_problem(g, Nonlinearity::quadratic(), signorini32);
    ScalarField v0 = initial_guess(p);
    v0.at(3, 0) = -0.1;
    CHECK_THROWS_AS(solve(p, v0, 1e-8, 100), Infeasible);
    ScalarField v1 = initial_guess(p);
    v1.at(0, 3) += 1;
    CHECK_THROWS_AS(solve(p, v1, 1e-8, 100), Infeasible);
    SolveOptions o;
    o.min_step = 1e3;
    CHECK_THROWS_AS(solve(p, initial_guess(p), o), LineSearchStall);
    CHECK_THROWS_AS(make_problem(Grid::with_spacing(0, 0, 0.5, 2, 2, HalfPlane::upper),
                                 Nonlinearity::quadratic(), signorini32),
                    GridTooSmall);
}
