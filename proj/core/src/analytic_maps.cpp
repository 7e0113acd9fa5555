#include "cuspforge/analytic_maps.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "cuspforge/error.hpp"
#include "cuspforge/field_io.hpp"

namespace cuspforge {

Rational::Rational(long num, long den) {
    if (den == 0) throw InvalidArgument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long g = std::gcd(num, den);
    num_ = g ? num / g : 0;
    den_ = g ? den / g : 1;
}

std::string to_string(const Rational& r) {
    return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

AnalyticMap::AnalyticMap(Compose c) : node_(std::move(c)) {
    const auto& cc = std::get<Compose>(node_);
    if (!cc.outer || !cc.inner) throw InvalidArgument("compose needs two maps");
}

AnalyticMap compose(const AnalyticMap& outer, const AnalyticMap& inner) {
    return Compose{std::make_shared<const AnalyticMap>(outer),
                   std::make_shared<const AnalyticMap>(inner)};
}

CuspSpec::CuspSpec(int n_) : n(n_) {
    if (n < 1) throw InvalidArgument("cusp family index n must be >= 1");
}

namespace {

const cplx I(0.0, 1.0);

cplx eval_power(const PowerIZ& p, cplx z) {
    if (z.imag() < 0.0) throw DomainError("power_iz evaluated below the real axis");
    const double rho = std::abs(z);
    if (rho == 0.0) return 0.0;
    // Signed zero would put arg at -pi on the negative axis.
    const double theta = std::atan2(std::abs(z.imag()), z.real());
    const double k = p.k.value();
    const double mag = std::exp(k * std::log(rho));
    return mag * cplx(-std::sin(k * theta), std::cos(k * theta));
}

cplx eval_moebius(const MoebiusPQ& m, cplx w) {
    if (m.direction == MoebiusDirection::p_to_q) {
        if (std::abs(w + I) < kPoleGuard) throw PoleError("P = -i is a pole of the P-to-Q map");
        return (1.0 + I * w) / (w + I);
    }
    if (std::abs(w - I) < kPoleGuard) throw PoleError("Q = i is a pole of the Q-to-P map");
    return -I * (w + I) / (w - I);
}

cplx eval_series(const Series& s, cplx z) {
    cplx acc = 0.0;
    const cplx d = z - s.center;
    for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it) acc = acc * d + *it;
    return acc;
}

// Minimal recursive-descent reader for the map text format.
class Reader {
public:
    explicit Reader(const std::string& s) : s_(s) {}

    AnalyticMap map() {
        skip();
        const std::string word = ident();
        if (word == "power_iz") {
            expect_word("k");
            expect('=');
            const long p = integer();
            long q = 1;
            skip();
            if (peek() == '/') {
                ++pos_;
                q = integer();
            }
            const Rational k(p, q);
            if (k.num() <= 0) throw ParseError("power_iz needs a positive exponent");
            return PowerIZ{k};
        }
        if (word == "moebius") {
            const std::string dir = ident();
            if (dir == "p_to_q") return MoebiusPQ{MoebiusDirection::p_to_q};
            if (dir == "q_to_p") return MoebiusPQ{MoebiusDirection::q_to_p};
            throw ParseError("unknown moebius direction '" + dir + "'");
        }
        if (word == "compose") {
            expect('(');
            AnalyticMap outer = map();
            expect(';');
            AnalyticMap inner = map();
            expect(')');
            return compose(outer, inner);
        }
        if (word == "series") {
            Series s;
            expect_word("center");
            expect('=');
            const double re = real();
            expect(',');
            s.center = cplx(re, real());
            expect_word("coeffs");
            expect('=');
            expect('[');
            skip();
            if (peek() != ']') {
                for (;;) {
                    expect('(');
                    const double cr = real();
                    expect(',');
                    const double ci = real();
                    expect(')');
                    s.coeffs.emplace_back(cr, ci);
                    skip();
                    if (peek() == ',') {
                        ++pos_;
                        continue;
                    }
                    break;
                }
            }
            expect(']');
            return s;
        }
        throw ParseError("unknown map kind '" + word + "'");
    }

    void finish() {
        skip();
        if (pos_ != s_.size()) throw ParseError("trailing text in map description");
    }

private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    void expect(char c) {
        skip();
        if (peek() != c) throw ParseError(std::string("expected '") + c + "' in map description");
        ++pos_;
    }
    std::string ident() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (start == pos_) throw ParseError("expected a keyword in map description");
        return s_.substr(start, pos_ - start);
    }
    void expect_word(const std::string& w) {
        if (ident() != w) throw ParseError("expected '" + w + "' in map description");
    }
    long integer() {
        skip();
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const long v = std::strtol(begin, &end, 10);
        if (end == begin) throw ParseError("expected an integer in map description");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }
    double real() {
        skip();
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("expected a number in map description");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

cplx eval(const AnalyticMap& map, cplx z) {
    return std::visit(
        [&](const auto& node) -> cplx {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, PowerIZ>)
                return eval_power(node, z);
            else if constexpr (std::is_same_v<T, MoebiusPQ>)
                return eval_moebius(node, z);
            else if constexpr (std::is_same_v<T, Compose>)
                return eval(*node.outer, eval(*node.inner, z));
            else
                return eval_series(node, z);
        },
        map.node());
}

std::vector<cplx> trace_real_axis(const AnalyticMap& map, std::span<const double> xs) {
    std::vector<cplx> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(eval(map, cplx(x, 0.0)));
    return out;
}

std::string serialize(const AnalyticMap& map) {
    return std::visit(
        [](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, PowerIZ>) {
                return "power_iz k=" + to_string(node.k);
            } else if constexpr (std::is_same_v<T, MoebiusPQ>) {
                return node.direction == MoebiusDirection::p_to_q ? "moebius p_to_q"
                                                                  : "moebius q_to_p";
            } else if constexpr (std::is_same_v<T, Compose>) {
                return "compose(" + serialize(*node.outer) + "; " + serialize(*node.inner) + ")";
            } else {
                std::string s = "series center=" + format_real(node.center.real()) + "," +
                                format_real(node.center.imag()) + " coeffs=[";
                for (std::size_t m = 0; m < node.coeffs.size(); ++m) {
                    if (m) s += ",";
                    s += "(" + format_real(node.coeffs[m].real()) + "," +
                         format_real(node.coeffs[m].imag()) + ")";
                }
                return s + "]";
            }
        },
        map.node());
}

AnalyticMap parse_map(const std::string& text) {
    Reader r(text);
    AnalyticMap m = r.map();
    r.finish();
    return m;
}

}  // namespace cuspforge
