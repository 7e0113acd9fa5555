#include <cmath>
#include <random>

#include "cuspforge/analytic_maps.hpp"
#include "cuspforge/error.hpp"
#include "doctest.h"

using namespace cuspforge;

namespace {

const cplx I1(0, 1);

bool close(cplx a, cplx b, double tol = 1e-14) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("rationals stay in lowest terms") {
    const Rational r(6, -4);
    CHECK(r.num() == -3);
    CHECK(r.den() == 2);
    CHECK(to_string(Rational(5, 2)) == "5/2");
    CHECK(Rational(4, 2) == Rational(2));
    CHECK_THROWS_AS(Rational(1, 0), InvalidArgument);
}

TEST_CASE("power_iz values on the real axis") {
    const AnalyticMap half = PowerIZ{Rational(1, 2)};
    CHECK(close(eval(half, -1.0), -1.0));
    const std::vector<double> xs{1.0, 4.0};
    const auto tr = trace_real_axis(half, xs);
    CHECK(close(tr[0], I1));
    CHECK(close(tr[1], 2.0 * I1));
    CHECK_THROWS_AS(eval(half, cplx(0.3, -1e-3)), DomainError);
}

TEST_CASE("power_iz is i rho^k e^(i k theta) with theta in [0, pi]") {
    const AnalyticMap m = PowerIZ{Rational(5, 2)};
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1), v(0, 1);
    for (int k = 0; k < 50; ++k) {
        const cplx z(u(rng), v(rng));
        const double rho = std::abs(z), th = std::arg(z);
        const cplx ref = I1 * std::pow(rho, 2.5) * std::exp(I1 * (2.5 * th));
        CHECK(close(eval(m, z), ref, 1e-13));
    }
}

TEST_CASE("moebius maps") {
    const AnalyticMap pq = MoebiusPQ{MoebiusDirection::p_to_q};
    const AnalyticMap qp = MoebiusPQ{MoebiusDirection::q_to_p};
    CHECK(close(eval(pq, 0.0), -I1));
    CHECK(close(eval(pq, 1.0), 1.0));
    CHECK(std::abs(eval(pq, 1.0)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(eval(pq, -I1), PoleError);
    CHECK_THROWS_AS(eval(qp, I1 + cplx(1e-10, 0)), PoleError);
    // The two directions are inverse to each other.
    for (cplx p : {cplx(0.3, 0.2), cplx(-2, 0.5), cplx(0.1, -0.4)})
        CHECK(close(eval(qp, eval(pq, p)), p, 1e-13));
}

TEST_CASE("Q-trace for the first cusp spec") {
    const CuspSpec spec(1);
    const AnalyticMap q = compose(MoebiusPQ{MoebiusDirection::p_to_q}, spec.p_map());
    const cplx left = eval(q, -1.0);
    CHECK(close(left, -1.0, 1e-14));
    CHECK(std::abs(left) == doctest::Approx(1.0));
    const cplx right = eval(q, 1.0);
    CHECK(std::abs(right) <= 1e-15);
    // |Q| = 1 on x < 0 and |Q| < 1, Re Q = 0 on x > 0.
    for (double x : {-0.9, -0.3, -0.01}) CHECK(std::abs(eval(q, x)) == doctest::Approx(1.0));
    for (double x : {0.01, 0.3, 0.9}) {
        CHECK(std::abs(eval(q, x)) < 1.0);
        CHECK(std::abs(eval(q, x).real()) <= 1e-15);
    }
}

TEST_CASE("cusp spec constants") {
    for (int n : {1, 2, 3}) {
        const CuspSpec s(n);
        CHECK(s.k_cusp() == 4 * n - 1);
        CHECK(s.k_power() == Rational(4 * n - 3, 2));
        CHECK(s.boundary_exponent() == doctest::Approx(s.k_cusp() / 2.0));
    }
    CHECK_THROWS_AS(CuspSpec(0), InvalidArgument);
}

TEST_CASE("series evaluation") {
    const AnalyticMap s = Series{cplx(0.5, 0), {1.0, cplx(0, 2), -3.0}};
    const cplx z(0.2, 0.7), w = z - 0.5;
    CHECK(close(eval(s, z), 1.0 + cplx(0, 2) * w - 3.0 * w * w, 1e-14));
}

TEST_CASE("serialize and parse round trip") {
    const AnalyticMap m = compose(MoebiusPQ{MoebiusDirection::p_to_q},
                                  compose(Series{cplx(0.25, 0), {0.1, cplx(0.3, -0.2)}},
                                          PowerIZ{Rational(7, 2)}));
    const std::string text = serialize(m);
    const AnalyticMap back = parse_map(text);
    CHECK(serialize(back) == text);
    for (cplx z : {cplx(-0.4, 0.1), cplx(0.3, 0.6), cplx(0.0, 0.2)}) CHECK(eval(back, z) == eval(m, z));
    CHECK(serialize(parse_map("power_iz k=1/2")) == "power_iz k=1/2");
    CHECK_THROWS_AS(parse_map("power_iz k=-1/2"), ParseError);
    CHECK_THROWS_AS(parse_map("banana"), ParseError);
}
