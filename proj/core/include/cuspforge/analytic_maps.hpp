#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cuspforge/grid.hpp"

namespace cuspforge {

// Exact rational number kept in lowest terms with a positive denominator.
class Rational {
public:
    Rational(long num = 0, long den = 1);
    long num() const { return num_; }
    long den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    friend bool operator==(const Rational&, const Rational&) = default;

private:
    long num_, den_;
};

std::string to_string(const Rational& r);

class AnalyticMap;

// (iz)^k on the closed upper half-plane, with arg z taken in [0, pi].
struct PowerIZ {
    Rational k;
};

enum class MoebiusDirection { p_to_q, q_to_p };

// p_to_q: Q = (1 + iP)/(P + i);  q_to_p: P = -i(Q + i)/(Q - i).
struct MoebiusPQ {
    MoebiusDirection direction = MoebiusDirection::p_to_q;
};

struct Compose {
    std::shared_ptr<const AnalyticMap> outer;
    std::shared_ptr<const AnalyticMap> inner;
};

// sum_m coeffs[m] (z - center)^m
struct Series {
    cplx center;
    std::vector<cplx> coeffs;
};

class AnalyticMap {
public:
    using Node = std::variant<PowerIZ, MoebiusPQ, Compose, Series>;

    AnalyticMap(PowerIZ p) : node_(std::move(p)) {}
    AnalyticMap(MoebiusPQ m) : node_(m) {}
    AnalyticMap(Series s) : node_(std::move(s)) {}
    AnalyticMap(Compose c);

    const Node& node() const { return node_; }

private:
    Node node_;
};

AnalyticMap compose(const AnalyticMap& outer, const AnalyticMap& inner);

inline constexpr double kPoleGuard = 1e-8;

// Throws DomainError for PowerIZ below the real axis and PoleError within
// kPoleGuard of a Moebius pole.
cplx eval(const AnalyticMap& map, cplx z);
std::vector<cplx> trace_real_axis(const AnalyticMap& map, std::span<const double> xs);

std::string serialize(const AnalyticMap& map);
AnalyticMap parse_map(const std::string& text);

// Cusp family indexed by n >= 1: P(z) = (iz)^(2n - 3/2), cusp index 4n - 1.
struct CuspSpec {
    int n = 1;

    explicit CuspSpec(int n_);
    Rational k_power() const { return Rational(4L * n - 3, 2); }
    int k_cusp() const { return 4 * n - 1; }
    // Leading exponent 2n - 1/2 of the free boundary.
    double boundary_exponent() const { return 2.0 * n - 0.5; }
    AnalyticMap p_map() const { return PowerIZ{k_power()}; }
};

}  // namespace cuspforge
