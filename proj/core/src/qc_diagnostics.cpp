#include "cuspforge/qc_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cuspforge/error.hpp"
#include "cuspforge/field_ops.hpp"
#include "cuspforge/parallel.hpp"

namespace cuspforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_normalized(const Nonlinearity& F) {
    if (std::abs(F.normalization() - 1.0) > 1e-12)
        throw InvalidArgument("nonlinearity '" + F.name() + "' is not normalized");
}

struct Derivatives {
    ScalarField ux, uy, uxx, uxy;
};

Derivatives derivatives(const ScalarField& U) {
    const Mask m = finite_mask(U.values);
    auto [ux, uy] = gradient(U, m);
    const Mask mx = finite_mask(ux.values);
    auto [uxx, uxy] = gradient(ux, mx);
    return {std::move(ux), std::move(uy), std::move(uxx), std::move(uxy)};
}

}  // namespace

ComplexField compute_Q(const ScalarField& U, const Nonlinearity& F) {
    require_normalized(F);
    const Mask m = finite_mask(U.values);
    const auto [ux, uy] = gradient(U, m);
    ComplexField Q(U.grid, cplx(kNaN, kNaN));
    for (std::size_t k = 0; k < Q.values.size(); ++k) {
        if (!std::isfinite(ux.values[k]) || !std::isfinite(uy.values[k])) continue;
        Q.values[k] = cplx(ux.values[k], -F.grad({ux.values[k], uy.values[k]})[1]);
    }
    return Q;
}

BeltramiField beltrami(const ScalarField& U, const Nonlinearity& F, double stencil_tol) {
    require_normalized(F);
    const Grid& g = U.grid;
    if (g.nx() < 5 || g.ny() < 5) throw GridTooSmall("beltrami needs nx, ny >= 5");
    const Derivatives d = derivatives(U);

    BeltramiField out;
    out.mu = ComplexField(g, cplx(kNaN, kNaN));
    out.m_norm = ScalarField(g, kNaN);
    out.bound = ScalarField(g, kNaN);
    out.degenerate.assign(g.size(), 0);

    if (stencil_tol < 0) {
        double sup2 = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k)
            if (std::isfinite(d.uxx.values[k]) && std::isfinite(d.uxy.values[k]))
                sup2 = std::max({sup2, std::abs(d.uxx.values[k]), std::abs(d.uxy.values[k])});
        stencil_tol = 50 * g.h() * g.h() * (1 + sup2);
    }
    out.stencil_tol = stencil_tol;

    for (std::size_t k = 0; k < g.size(); ++k) {
        const double p1 = d.ux.values[k], p2 = d.uy.values[k];
        const double a = d.uxx.values[k], b = d.uxy.values[k];
        if (!std::isfinite(p1) || !std::isfinite(p2) || !std::isfinite(a) || !std::isfinite(b))
            continue;
        const Mat2 H = F.hess({p1, p2});
        const double m11 = 1 - H[0], m12 = -H[1], m22 = 1 - H[3];
        const double norm = std::sqrt(m11 * m11 + 2 * m12 * m12 + m22 * m22);
        if (norm >= 2.0)
            throw NormTooLarge("||Id - Hess F|| = " + std::to_string(norm) + " at node " +
                               std::to_string(k));
        const double bound = norm / (2 - norm);
        out.m_norm.values[k] = norm;
        out.bound.values[k] = bound;
        ++out.nodes;
        cplx mu(0.0, 0.0);
        if (std::hypot(a, b) <= 1e-12) {
            out.degenerate[k] = 1;
        } else {
            const double s1 = m11 * a + m12 * b, s2 = m12 * a + m22 * b;
            mu = cplx(s1, s2) / cplx(2 * a - s1, -(2 * b - s2));
        }
        out.mu.values[k] = mu;
        out.sup_mu = std::max(out.sup_mu, std::abs(mu));
        out.sup_bound = std::max(out.sup_bound, bound);
        out.delta = std::max(out.delta, norm);
        if (std::abs(mu) > bound + stencil_tol) ++out.violations;
    }
    return out;
}

ComplexField beltrami_stencil_ratio(const ScalarField& U, const Nonlinearity& F) {
    const ComplexField Q = compute_Q(U, F);
    const auto [dz, dzbar] = wirtinger(Q, finite_mask(Q.values));
    ComplexField mu(U.grid, cplx(kNaN, kNaN));
    for (std::size_t k = 0; k < mu.values.size(); ++k) {
        const cplx a = dz.values[k], b = dzbar.values[k];
        if (!std::isfinite(a.real()) || !std::isfinite(b.real())) continue;
        mu.values[k] = std::abs(a) == 0.0 ? cplx(0.0, 0.0) : b / a;
    }
    return mu;
}

ConjugatePair conjugate_pair_P(const ScalarField& U, const Nonlinearity& F, bool contact_left,
                               double tol) {
    const Grid& g = U.grid;
    if (std::abs(g.y_min()) > 1e-12) throw InvalidArgument("P needs an upper-half grid");
    if (!(g.x_min() <= 0 && g.x_max() >= 0)) throw InvalidArgument("grid must contain the origin");
    if (tol < 0) tol = 10 * g.h() * g.h();

    ConjugatePair out;
    // The axis has to split as {U = 0} on one side and {U >= 0} on the other.
    for (int i = 0; i < g.nx(); ++i) {
        const double x = g.x(i), u = U.at(i, 0);
        if (!std::isfinite(u)) continue;
        const bool contact_side = contact_left ? x <= 0 : x >= 0;
        if (contact_side) out.contact_residual = std::max(out.contact_residual, std::abs(u));
        if (u < -tol || (contact_side && std::abs(u) > tol))
            throw ContactSplitViolation("axis value " + std::to_string(u) + " at x = " +
                                        std::to_string(x) + " breaks the contact split");
    }

    const Mask m = finite_mask(U.values);
    const auto [ux, uy] = gradient(U, m);
    ScalarField a(g, kNaN), b(g, kNaN);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!std::isfinite(ux.values[k]) || !std::isfinite(uy.values[k])) continue;
        const Vec2 dF = F.grad({ux.values[k], uy.values[k]});
        a.values[k] = -dF[1];
        b.values[k] = dF[0];
    }

    out.P = ComplexField(g, cplx(kNaN, kNaN));
    parallel_for(static_cast<std::size_t>(g.ny()), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = 0; i < g.nx(); ++i) {
            const Point p = g.node(i, j);
            const std::size_t k = g.index(i, j);
            double V = 0.0;
            if (p.x != 0.0 || p.y != 0.0) V = line_integral(a, b, Path{{{0.0, 0.0}, p}, false});
            out.P.values[k] = cplx(U.values[k], V);
        }
    });
    for (int i = 0; i < g.nx(); ++i) {
        const cplx P = out.P.at(i, 0);
        if (std::isfinite(P.real()) && std::isfinite(P.imag()))
            out.axis_product = std::max(out.axis_product, std::abs(P.real() * P.imag()));
    }
    return out;
}

ComplexField reflect_even_square(const ComplexField& field, double tol) {
    const Grid& g = field.grid;
    if (std::abs(g.y_min()) > 1e-12) throw InvalidArgument("reflection needs an upper-half grid");
    for (int i = 0; i < g.nx(); ++i) {
        const cplx s = field.at(i, 0) * field.at(i, 0);
        if (std::abs(s.imag()) > tol)
            throw AxisMismatch("Im(field^2) = " + std::to_string(s.imag()) + " at x = " +
                               std::to_string(g.x(i)));
    }
    const int ny = 2 * g.ny() - 1;
    const Grid full = Grid::with_spacing(g.x_min(), -g.y_max(), g.h(), g.nx(), ny, HalfPlane::full);
    ComplexField out(full);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const cplx s = field.at(i, j) * field.at(i, j);
            out.at(i, g.ny() - 1 + j) = s;
            if (j > 0) out.at(i, g.ny() - 1 - j) = std::conj(s);
        }
    // The axis row takes the real part so the seam is continuous.
    for (int i = 0; i < g.nx(); ++i) {
        cplx& s = out.at(i, g.ny() - 1);
        s = cplx(s.real(), 0.0);
    }
    return out;
}

std::string to_string(BranchCondition c) {
    return c == BranchCondition::thin ? "thin" : "one_phase";
}

BranchSet branch_points(const ScalarField& field, BranchCondition condition, double tol) {
    const Grid& g = field.grid;
    BranchSet out;
    out.condition = condition;
    out.detection_tol = tol;
    const int j0 = g.nearest({0.0, 0.0}).second;
    if (std::abs(g.y(j0)) > 1e-12) return out;  // no axis row

    const Mask m = finite_mask(field.values);
    const auto [ux, uy] = gradient(field, m);
    std::vector<int> hits;
    std::vector<double> defect(g.nx(), std::numeric_limits<double>::infinity());
    int finite_nodes = 0;
    for (int i = 0; i < g.nx(); ++i) {
        const double u = field.at(i, j0), gx = ux.at(i, j0), gy = uy.at(i, j0);
        if (!std::isfinite(u) || !std::isfinite(gx) || !std::isfinite(gy)) continue;
        ++finite_nodes;
        const double grad = std::hypot(gx, gy);
        defect[i] = condition == BranchCondition::thin ? std::max(std::abs(u), grad)
                                                       : std::max(std::abs(u), std::abs(grad - 1.0));
        if (defect[i] <= tol) hits.push_back(i);
    }
    const std::size_t long_run = static_cast<std::size_t>(std::max(8, finite_nodes / 4));
    std::vector<double> centres;
    for (std::size_t s = 0; s < hits.size();) {
        std::size_t e = s;
        while (e + 1 < hits.size() && hits[e + 1] == hits[e] + 1) ++e;
        if (e - s + 1 <= long_run) {
            double sum = 0.0;
            for (std::size_t q = s; q <= e; ++q) sum += g.x(hits[q]);
            centres.push_back(sum / double(e - s + 1));
            s = e + 1;
            continue;
        }
        // A long run can still hold one point where the condition is met far
        // more tightly than elsewhere (the defect of a higher-order cusp grows
        // like a power of the distance). Cut at ten times the smallest defect
        // and keep the run only if what survives around the minimum is short.
        int best = hits[s];
        for (std::size_t q = s; q <= e; ++q)
            if (defect[hits[q]] < defect[best]) best = hits[q];
        const double cut = 10 * defect[best] + 1e-12;
        int lo = best, hi = best;
        while (lo > hits[s] && defect[lo - 1] <= cut) --lo;
        while (hi < hits[e] && defect[hi + 1] <= cut) ++hi;
        if (static_cast<std::size_t>(hi - lo + 1) > long_run)
            ++out.degenerate_runs;
        else
            centres.push_back(g.x(best));
        s = e + 1;
    }
    for (double c : centres) {
        if (!out.points.empty() && c - out.points.back() < 2 * g.h())
            out.points.back() = 0.5 * (out.points.back() + c);
        else
            out.points.push_back(c);
    }
    return out;
}

PowerFit fit_cusp_exponent(const FreeBoundaryCurve& curve, FitWindow window) {
    std::vector<double> xs, fs;
    for (std::size_t k = 0; k < curve.xs.size(); ++k)
        if (curve.xs[k] < 0 && curve.fs[k] > 0) {
            xs.push_back(curve.xs[k]);
            fs.push_back(curve.fs[k]);
        }
    return fit_power_law(xs, fs, window.lo, window.hi, 8);
}

}  // namespace cuspforge
