#include "cuspforge/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "cuspforge/error.hpp"

namespace cuspforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class T>
T nan_value() {
    if constexpr (std::is_same_v<T, double>)
        return kNaN;
    else
        return T(kNaN, kNaN);
}

// Derivative along one axis at offset k of a line of n samples, where
// get(m) returns the sample and ok(m) tells whether it may be used.
template <class T, class Get, class Ok>
T line_derivative(int k, int n, double h, Get get, Ok ok) {
    auto usable = [&](int m) { return m >= 0 && m < n && ok(m); };
    if (usable(k - 1) && usable(k + 1)) return (get(k + 1) - get(k - 1)) / (2.0 * h);
    if (usable(k + 1) && usable(k + 2))
        return (-3.0 * get(k) + 4.0 * get(k + 1) - get(k + 2)) / (2.0 * h);
    if (usable(k - 1) && usable(k - 2))
        return (3.0 * get(k) - 4.0 * get(k - 1) + get(k - 2)) / (2.0 * h);
    if (usable(k + 1)) return (get(k + 1) - get(k)) / h;
    if (usable(k - 1)) return (get(k) - get(k - 1)) / h;
    return nan_value<T>();
}

template <class T>
std::pair<Field<T>, Field<T>> gradient_impl(const Field<T>& f, const Mask& mask) {
    const Grid& g = f.grid;
    if (g.nx() < 3 || g.ny() < 3) throw GridTooSmall("gradient needs nx, ny >= 3");
    if (!mask.empty() && mask.size() != g.size())
        throw InvalidArgument("mask length does not match grid");
    auto in = [&](int i, int j) { return mask.empty() || mask[g.index(i, j)]; };
    Field<T> dx(g), dy(g);
    const double h = g.h();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            if (!in(i, j)) {
                dx.at(i, j) = dy.at(i, j) = nan_value<T>();
                continue;
            }
            dx.at(i, j) = line_derivative<T>(
                i, g.nx(), h, [&](int m) { return f.at(m, j); }, [&](int m) { return in(m, j); });
            dy.at(i, j) = line_derivative<T>(
                j, g.ny(), h, [&](int m) { return f.at(i, m); }, [&](int m) { return in(i, m); });
        }
    }
    return {std::move(dx), std::move(dy)};
}

}  // namespace

std::pair<ScalarField, ScalarField> gradient(const ScalarField& field, const Mask& mask) {
    return gradient_impl(field, mask);
}

std::pair<ComplexField, ComplexField> gradient(const ComplexField& field, const Mask& mask) {
    return gradient_impl(field, mask);
}

std::pair<ComplexField, ComplexField> wirtinger(const ComplexField& field, const Mask& mask) {
    auto [fx, fy] = gradient_impl(field, mask);
    ComplexField dz(field.grid), dzbar(field.grid);
    const cplx i1(0.0, 1.0);
    for (std::size_t k = 0; k < field.values.size(); ++k) {
        dz.values[k] = 0.5 * (fx.values[k] - i1 * fy.values[k]);
        dzbar.values[k] = 0.5 * (fx.values[k] + i1 * fy.values[k]);
    }
    return {std::move(dz), std::move(dzbar)};
}

double laplacian_residual(const ScalarField& f, const Mask& mask) {
    const Grid& g = f.grid;
    if (g.nx() < 3 || g.ny() < 3) throw GridTooSmall("laplacian needs nx, ny >= 3");
    auto in = [&](int i, int j) { return mask.empty() || mask[g.index(i, j)]; };
    const double h2 = g.h() * g.h();
    double worst = 0.0;
    for (int j = 1; j + 1 < g.ny(); ++j) {
        for (int i = 1; i + 1 < g.nx(); ++i) {
            if (!(in(i, j) && in(i - 1, j) && in(i + 1, j) && in(i, j - 1) && in(i, j + 1)))
                continue;
            const double lap = (f.at(i - 1, j) + f.at(i + 1, j) + f.at(i, j - 1) +
                                f.at(i, j + 1) - 4.0 * f.at(i, j)) /
                               h2;
            worst = std::max(worst, std::abs(lap));
        }
    }
    return worst;
}

double bilinear(const ScalarField& f, Point p) {
    const Grid& g = f.grid;
    const double sx = (p.x - g.x_min()) / g.h();
    const double sy = (p.y - g.y_min()) / g.h();
    const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, g.nx() - 2);
    const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, g.ny() - 2);
    const double tx = sx - i, ty = sy - j;
    return (1 - tx) * (1 - ty) * f.at(i, j) + tx * (1 - ty) * f.at(i + 1, j) +
           (1 - tx) * ty * f.at(i, j + 1) + tx * ty * f.at(i + 1, j + 1);
}

double line_integral(const ScalarField& a, const ScalarField& b, const Path& path) {
    if (!(a.grid == b.grid)) throw InvalidArgument("form components live on different grids");
    const Grid& g = a.grid;
    const auto& vs = path.vertices;
    for (const Point& p : vs)
        if (!g.contains(p)) throw PathOutsideDomain("path vertex outside the grid domain");
    const std::size_t nseg =
        vs.size() < 2 ? 0 : (path.closed ? vs.size() : vs.size() - 1);

    struct Piece {
        Point lo, hi;
        double value;
    };
    std::vector<Piece> pieces;
    pieces.reserve(nseg);
    for (std::size_t s = 0; s < nseg; ++s) {
        Point p = vs[s], q = vs[(s + 1) % vs.size()];
        if (p == q) throw InvalidArgument("consecutive path vertices coincide");
        // Integrate every segment in a canonical direction so that a reversed
        // path produces exactly the negated contributions.
        double sign = 1.0;
        if (std::tie(q.x, q.y) < std::tie(p.x, p.y)) {
            std::swap(p, q);
            sign = -1.0;
        }
        const double len = std::hypot(q.x - p.x, q.y - p.y);
        const int n = std::max(1, static_cast<int>(std::ceil(len / g.h() - 1e-9)));
        const double dx = (q.x - p.x) / n, dy = (q.y - p.y) / n;
        // Samples of a dx + b dy per unit step at s = -1 .. n + 1; the two
        // outer ones are NaN when they fall off the grid or the field.
        std::vector<double> f(n + 3);
        for (int m = -1; m <= n + 1; ++m) {
            const Point cur = m == 0 ? p : m == n ? q : Point{p.x + (q.x - p.x) * m / n, p.y + (q.y - p.y) * m / n};
            const bool outer = m < 0 || m > n;
            f[m + 1] = outer && !g.contains(cur) ? std::numeric_limits<double>::quiet_NaN()
                                                 : bilinear(a, cur) * dx + bilinear(b, cur) * dy;
        }
        auto at = [&](int m) { return f[m + 1]; };
        auto ok = [&](int m) { return m >= -1 && m <= n + 1 && std::isfinite(at(m)); };
        // Trapezoid plus the cubic end correction, one-sided where a neighbour
        // is missing.
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            double step = 0.5 * (at(m) + at(m + 1));
            if (ok(m - 1) && ok(m + 2))
                step -= (at(m - 1) - at(m) - at(m + 1) + at(m + 2)) / 24;
            else if (ok(m + 2))
                step -= (at(m) - 2 * at(m + 1) + at(m + 2)) / 12;
            else if (ok(m - 1))
                step -= (at(m - 1) - 2 * at(m) + at(m + 1)) / 12;
            acc += step;
        }
        pieces.push_back({p, q, sign * acc});
    }
    std::vector<std::size_t> order(pieces.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        const auto& L = pieces[l];
        const auto& R = pieces[r];
        return std::tie(L.lo.x, L.lo.y, L.hi.x, L.hi.y) < std::tie(R.lo.x, R.lo.y, R.hi.x, R.hi.y);
    });
    double total = 0.0;
    for (std::size_t k : order) total += pieces[k].value;
    return total;
}

}  // namespace cuspforge
