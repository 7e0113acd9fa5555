#include "cuspforge/hodograph.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "cuspforge/error.hpp"
#include "cuspforge/field_ops.hpp"
#include "cuspforge/sampler.hpp"

namespace cuspforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Any corner of the cell holding p is a valid node.
bool near_valid(const Grid& g, const Mask& m, Point p) {
    const int ci = static_cast<int>(std::floor((p.x - g.x_min()) / g.h()));
    const int cj = static_cast<int>(std::floor((p.y - g.y_min()) / g.h()));
    for (int b = 0; b <= 1; ++b)
        for (int a = 0; a <= 1; ++a) {
            const int i = ci + a, j = cj + b;
            if (i >= 0 && j >= 0 && i < g.nx() && j < g.ny() && m[g.index(i, j)]) return true;
        }
    return false;
}

void record(IdentityLine& line, double value, Point at) {
    if (!std::isfinite(value)) value = kInf;
    ++line.samples;
    if (value >= line.max_residual) {
        line.max_residual = value;
        line.node = at;
    }
}

}  // namespace

std::string to_string(HodographKind kind) {
    return kind == HodographKind::classical ? "classical" : "conformal";
}

HodographPair conformal_forward(const ScalarField& u, const FreeBoundaryCurve& f) {
    const Grid& g = u.grid;
    const double h = g.h();
    const Mask mask = finite_mask(u.values);
    const ConjugateResult conj = harmonic_conjugate(u, {0.0, 0.0}, mask, kInf);

    HodographPair out;
    out.kind = HodographKind::conformal;
    out.x_prime = conj.U;
    out.y_prime = u;
    out.loop_residual = conj.loop_residual;
    out.fallback_nodes = conj.fallback_nodes;
    out.v = ScalarField(g, kNaN);
    out.x_of = ScalarField(g, kNaN);

    Mask valid = mask;
    for (std::size_t k = 0; k < valid.size(); ++k) valid[k] = valid[k] && std::isfinite(conj.U.values[k]);
    const FieldSampler sU(conj.U, valid), su(u, valid);
    struct Jet {
        double t1, t2, a11, a12, a21, a22;
    };
    auto jet = [&](Point q) -> std::optional<Jet> {
        const auto a = sU(q), b = su(q);
        if (!a || !b) return std::nullopt;
        return Jet{a->value, b->value, a->dx, a->dy, b->dx, b->dy};
    };

    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), 0);
    auto radius = [&](std::size_t k) {
        return std::hypot(g.x(static_cast<int>(k % g.nx())), g.y(static_cast<int>(k / g.nx())));
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return radius(a) < radius(b); });

    for (std::size_t k : order) {
        const int i = static_cast<int>(k % g.nx()), j = static_cast<int>(k / g.nx());
        const Point t = g.node(i, j);
        Point q = t;
        double best = kInf;
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                const int a = i + di, b = j + dj;
                if ((!di && !dj) || a < 0 || b < 0 || a >= g.nx() || b >= g.ny()) continue;
                if (!std::isfinite(out.v.at(a, b))) continue;
                const Point tn = g.node(a, b);
                const double d = std::hypot(tn.x, tn.y);
                if (d >= best) continue;
                const Point qn{out.x_of.at(a, b), out.v.at(a, b)};
                const auto J = jet(qn);
                if (!J) continue;
                const double det = J->a11 * J->a22 - J->a12 * J->a21;
                if (std::abs(det) < 1e-12) continue;
                const double r1 = t.x - tn.x, r2 = t.y - tn.y;
                best = d;
                q = {qn.x + (J->a22 * r1 - J->a12 * r2) / det,
                     qn.y + (-J->a21 * r1 + J->a11 * r2) / det};
            }
        // Targets with no solved neighbour are only tried near the origin.
        if (!std::isfinite(best) && std::hypot(t.x, t.y) > 2 * h) continue;
        ++out.attempted;

        bool converged = false, left = false;
        for (int it = 0; it < 100; ++it) {
            if (!g.contains(q, 2 * h) || !near_valid(g, valid, q)) {
                left = true;
                break;
            }
            const auto J = jet(q);
            if (!J) {
                left = true;
                break;
            }
            const double r1 = J->t1 - t.x, r2 = J->t2 - t.y;
            if (std::hypot(r1, r2) <= 1e-13) {
                converged = true;
                break;
            }
            const double det = J->a11 * J->a22 - J->a12 * J->a21;
            if (std::abs(det) < 1e-12) break;
            double dx = (J->a22 * r1 - J->a12 * r2) / det;
            double dy = (-J->a21 * r1 + J->a11 * r2) / det;
            const double len = std::hypot(dx, dy);
            if (len > 4 * h) {
                dx *= 4 * h / len;
                dy *= 4 * h / len;
            }
            q.x -= dx;
            q.y -= dy;
            if (len <= 1e-14 * (1 + std::hypot(q.x, q.y))) {
                converged = true;
                break;
            }
        }
        if (left) {
            --out.attempted;
            continue;
        }
        if (!converged) {
            ++out.diverged;
            continue;
        }
        const auto J = jet(q);
        if (J && std::abs(J->a11 * J->a22 - J->a12 * J->a21) < 0.1) ++out.degenerate;
        ++out.solved;
        out.v.at(i, j) = q.y;
        out.x_of.at(i, j) = q.x;
    }
    if (out.diverged + out.degenerate > 0.01 * std::max(1, out.attempted))
        throw NotInvertible("conformal hodograph degenerates on " +
                            std::to_string(out.diverged + out.degenerate) + " of " +
                            std::to_string(out.attempted) + " nodes");

    for (std::size_t k = 0; k < f.xs.size(); ++k) {
        if (f.xs[k] > 0) break;
        const auto a = sU({f.xs[k], f.fs[k]});
        if (!a || !g.contains({f.xs[k], f.fs[k]})) continue;
        out.eta.xs.push_back(f.xs[k]);
        out.eta.etas.push_back(f.xs[k] == 0.0 ? 0.0 : a->value);
    }
    return out;
}

HodographPair classical_forward(const ScalarField& u, const FreeBoundaryCurve& f) {
    (void)f;
    const Grid& g = u.grid;
    const double h = g.h();
    const Mask mask = finite_mask(u.values);
    const FieldSampler su(u, mask);

    HodographPair out;
    out.kind = HodographKind::classical;
    out.x_prime = ScalarField::sample(g, [](double x, double) { return x; });
    out.y_prime = u;
    out.v = ScalarField(g, kNaN);
    out.x_of = out.x_prime;
    out.w = ScalarField(g, kNaN);

    for (int i = 0; i < g.nx(); ++i) {
        int jl = 0;
        while (jl < g.ny() && !mask[g.index(i, jl)]) ++jl;
        if (jl == g.ny()) continue;
        int ju = jl;
        while (ju + 1 < g.ny() && mask[g.index(i, ju + 1)]) ++ju;
        const double x = g.x(i);
        auto uu = [&](double y) {
            const auto s = su({x, y});
            return s ? s->value : kNaN;
        };
        const double lo = g.y(jl) - 2 * h, hi = g.y(ju);
        const double ulo = uu(lo), uhi = uu(hi);
        for (int j = 0; j < g.ny(); ++j) {
            const double yp = g.y(j);
            ++out.attempted;
            if (!(uhi >= yp) || !(ulo <= yp)) {
                --out.attempted;
                continue;
            }
            double root;
            if (uhi == yp) {
                root = hi;
            } else if (ulo == yp) {
                root = lo;
            } else {
                std::uintmax_t iters = 100;
                const auto br = boost::math::tools::toms748_solve(
                    [&](double y) { return uu(y) - yp; }, lo, hi, ulo - yp, uhi - yp,
                    boost::math::tools::eps_tolerance<double>(50), iters);
                if (iters >= 100) {
                    ++out.diverged;
                    continue;
                }
                root = 0.5 * (br.first + br.second);
            }
            ++out.solved;
            out.v.at(i, j) = root;
            out.w.at(i, j) = root - yp;
        }
    }
    if (out.diverged > 0.01 * std::max(1, out.attempted))
        throw NotInvertible("classical hodograph root solve failed on " +
                            std::to_string(out.diverged) + " nodes");
    return out;
}

ComplementarityReport classical_complementarity(const HodographPair& pair,
                                                const FreeBoundaryCurve& f, double inner,
                                                double outer, double active_tol) {
    if (pair.kind != HodographKind::classical)
        throw InvalidArgument("complementarity needs a classical hodograph pair");
    const Grid& g = pair.w.grid;
    if (active_tol < 0) active_tol = 10 * g.h() * g.h();
    const FieldSampler sw(pair.w);
    ComplementarityReport rep;
    for (int i = 0; i < g.nx(); ++i) {
        const double x = g.x(i);
        if (std::abs(x) < inner || std::abs(x) > outer) continue;
        const double w = pair.w.at(i, 0);
        // Columns clipped by the outer edge of the data carry no usable y-stencil.
        int depth = 0;
        while (depth < 4 && std::isfinite(pair.w.at(i, depth))) ++depth;
        if (!std::isfinite(w) || depth < 4) continue;
        const auto grad = sw(g.node(i, 0));
        if (!grad) continue;
        const double p1 = grad->dx, p2 = grad->dy;
        // dF/dx_d for F = (x'^2 + x_d^2)/(1 + x_d).
        const double fd = (p2 * p2 + 2 * p2 - p1 * p1) / ((1 + p2) * (1 + p2));
        if (w > active_tol) {
            rep.positive_part = std::max(rep.positive_part, std::abs(fd));
            ++rep.positive_nodes;
        } else {
            rep.sign_violation = std::max(rep.sign_violation, std::max(0.0, fd));
            ++rep.active_nodes;
        }
        const double fx = interpolate(f, x);
        if (std::isfinite(fx)) rep.pullback = std::max(rep.pullback, std::abs(w - fx));
    }
    return rep;
}

double IdentityReport::max_residual() const {
    double m = 0;
    for (const auto& l : lines) m = std::max(m, l.max_residual);
    return m;
}

const IdentityLine& IdentityReport::line(const std::string& name) const {
    for (const auto& l : lines)
        if (l.name == name) return l;
    throw InvalidArgument("no identity line named " + name);
}

std::string format_report(const IdentityReport& report) {
    std::string s;
    char buf[256];
    for (const auto& l : report.lines) {
        std::snprintf(buf, sizeof buf, "%s %.6e %.17g %.17g %d\n", l.name.c_str(), l.max_residual,
                      l.node.x, l.node.y, l.samples);
        s += buf;
    }
    return s;
}

IdentityReport check_identities(const HodographPair& pair, const EtaMap& eta,
                                const FreeBoundaryCurve& f, const IdentityOptions& opt) {
    if (pair.kind != HodographKind::conformal)
        throw InvalidArgument("identity check needs a conformal hodograph pair");
    const FieldSampler sv(pair.v), su(pair.y_prime);
    IdentityLine lf{"f_prime"}, le{"eta_prime"}, lr{"reciprocity"}, la{"eta_arc"},
        ls{"axis_sign"}, lc{"contact_correspondence"};
    auto in_band = [&](double a) { return a >= opt.inner && a <= opt.outer; };

    std::vector<std::size_t> picks;
    for (std::size_t k = 1; k + 1 < eta.xs.size(); ++k)
        if (in_band(std::abs(eta.etas[k]))) picks.push_back(k);
    const std::size_t stride = std::max<std::size_t>(1, picks.size() / std::max(1, opt.points));
    for (std::size_t m = 0; m < picks.size(); m += stride) {
        const std::size_t k = picks[m];
        const double x0 = eta.xs[k - 1], x1 = eta.xs[k + 1];
        const double fp = (interpolate(f, x1) - interpolate(f, x0)) / (x1 - x0);
        const double ep = (eta.etas[k + 1] - eta.etas[k - 1]) / (x1 - x0);
        const Point at{eta.etas[k], 0.0};
        const auto b = sv(at);
        if (!b) continue;
        record(lf, std::abs(fp * b->dy - b->dx), at);
        record(le, std::abs(ep * b->dy - 1.0), at);
    }

    const Grid& g = pair.v.grid;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const Point t = g.node(i, j);
            if (!in_band(std::hypot(t.x, t.y)) || !std::isfinite(pair.v.at(i, j))) continue;
            const auto b = sv(t);
            const auto a = su({pair.x_of.at(i, j), pair.v.at(i, j)});
            if (!a || !b) continue;
            record(lr, std::abs(std::hypot(a->dx, a->dy) * std::hypot(b->dx, b->dy) - 1.0), t);
        }

    // eta(x) = U(x, f(x)) against the integral of |grad u| ds from 0.
    const auto& ex = pair.eta.xs;
    double arc = 0.0;
    for (std::size_t k = ex.size(); k-- > 1;) {
        const double xa = ex[k], xb = ex[k - 1];
        auto integrand = [&](double x) {
            const double d = 1e-3 * std::abs(xb - xa);
            const double fp = (interpolate(f, x + d) - interpolate(f, x - d)) / (2 * d);
            const auto s = su({x, interpolate(f, x)});
            return s ? std::hypot(s->dx, s->dy) * std::sqrt(1 + fp * fp) : kNaN;
        };
        // Midpoint rule avoids the branch point itself.
        arc -= (xa - xb) * integrand(0.5 * (xa + xb));
        if (in_band(std::abs(pair.eta.etas[k - 1])))
            record(la, std::abs(arc - pair.eta.etas[k - 1]), {xb, interpolate(f, xb)});
    }

    double left_zero = kNaN;
    for (int i = 0; i < g.nx(); ++i) {
        const double v = pair.v.at(i, 0);
        if (!std::isfinite(v)) continue;
        record(ls, std::max(0.0, -v), g.node(i, 0));
        if (std::abs(v) <= 1e-12 && !std::isfinite(left_zero)) left_zero = g.x(i);
        if (std::abs(v) > 1e-12) left_zero = kNaN;
    }
    if (std::isfinite(left_zero)) record(lc, std::abs(left_zero), {left_zero, 0.0});

    IdentityReport rep;
    rep.lines = {lf, le, lr, la, ls, lc};
    return rep;
}

}  // namespace cuspforge
