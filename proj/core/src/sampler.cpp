#include "cuspforge/sampler.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>

namespace cuspforge {

namespace {

// Four-point Lagrange weights and their derivatives at t for nodes o[0..3].
void lagrange4(const std::array<int, 4>& o, double t, std::array<double, 4>& w,
               std::array<double, 4>& dw) {
    for (int m = 0; m < 4; ++m) {
        double denom = 1.0, prod = 1.0, dsum = 0.0;
        for (int n = 0; n < 4; ++n) {
            if (n == m) continue;
            denom *= o[m] - o[n];
            prod *= t - o[n];
            double partial = 1.0;
            for (int l = 0; l < 4; ++l)
                if (l != m && l != n) partial *= t - o[l];
            dsum += partial;
        }
        w[m] = prod / denom;
        dw[m] = dsum / denom;
    }
}

// First node index of a 4-point stencil around cell c on a line of n nodes.
int stencil_start(int c, int n) { return std::clamp(c - 1, 0, n - 4); }

}  // namespace

FieldSampler::FieldSampler(const ScalarField& field, Mask mask)
    : field_(&field), mask_(std::move(mask)) {
    if (mask_.empty()) {
        mask_ = finite_mask(field.values);
    } else {
        for (std::size_t k = 0; k < mask_.size(); ++k)
            mask_[k] = mask_[k] && std::isfinite(field.values[k]);
    }
}

bool FieldSampler::valid(int i, int j) const {
    const Grid& g = field_->grid;
    return i >= 0 && j >= 0 && i < g.nx() && j < g.ny() && mask_[g.index(i, j)];
}

std::optional<Sample> FieldSampler::operator()(Point p) const {
    const Grid& g = field_->grid;
    const double sx = (p.x - g.x_min()) / g.h();
    const double sy = (p.y - g.y_min()) / g.h();
    const int ci = std::clamp(static_cast<int>(std::floor(sx)), 0, g.nx() - 2);
    const int cj = std::clamp(static_cast<int>(std::floor(sy)), 0, g.ny() - 2);
    if (g.nx() < 4 || g.ny() < 4) return least_squares(p, ci, cj);
    auto complete = [&](int i0, int j0) {
        for (int b = 0; b < 4; ++b)
            for (int a = 0; a < 4; ++a)
                if (!valid(i0 + a, j0 + b)) return false;
        return true;
    };
    int i0 = stencil_start(ci, g.nx());
    int j0 = stencil_start(cj, g.ny());
    if (!complete(i0, j0)) {
        // Nearest complete block within two cells (mild extrapolation)
        // before falling back to least squares.
        bool found = false;
        double best = 0.0;
        const int bi = i0, bj = j0;
        for (int dj = -2; dj <= 2; ++dj)
            for (int di = -2; di <= 2; ++di) {
                const int a = bi + di, b = bj + dj;
                if (a < 0 || b < 0 || a + 3 >= g.nx() || b + 3 >= g.ny() || !complete(a, b))
                    continue;
                const double d = std::hypot(sx - a - 1.5, sy - b - 1.5);
                if (!found || d < best) {
                    found = true;
                    best = d;
                    i0 = a;
                    j0 = b;
                }
            }
        if (!found) return least_squares(p, ci, cj);
    }

    const std::array<int, 4> o{0, 1, 2, 3};
    std::array<double, 4> wx, dwx, wy, dwy;
    lagrange4(o, sx - i0, wx, dwx);
    lagrange4(o, sy - j0, wy, dwy);
    Sample s{0, 0, 0};
    for (int b = 0; b < 4; ++b) {
        for (int a = 0; a < 4; ++a) {
            const double f = field_->at(i0 + a, j0 + b);
            s.value += wx[a] * wy[b] * f;
            s.dx += dwx[a] * wy[b] * f;
            s.dy += wx[a] * dwy[b] * f;
        }
    }
    s.dx /= g.h();
    s.dy /= g.h();
    return s;
}

std::optional<Sample> FieldSampler::least_squares(Point p, int ci, int cj) const {
    const Grid& g = field_->grid;
    struct Node {
        double s, t, f;
    };
    std::vector<Node> nodes;
    // 6x6 box first, then 8x8 when the valid nodes are too few or too
    // degenerate (e.g. three rows above a boundary) for the fit.
    for (int pad : {2, 3}) {
        nodes.clear();
        for (int j = cj - pad; j <= cj + 1 + pad; ++j)
            for (int i = ci - pad; i <= ci + 1 + pad; ++i)
                if (valid(i, j))
                    nodes.push_back(
                        {(g.x(i) - p.x) / g.h(), (g.y(j) - p.y) / g.h(), field_->at(i, j)});
        const int n = static_cast<int>(nodes.size());
        for (int terms : {10, 6, 3}) {
            if (n < terms + terms / 2) continue;
            Eigen::MatrixXd A(n, terms);
            Eigen::VectorXd rhs(n);
            for (int r = 0; r < n; ++r) {
                const double s = nodes[r].s, t = nodes[r].t;
                const double basis[10] = {1, s, t, s * s, s * t, t * t,
                                          s * s * s, s * s * t, s * t * t, t * t * t};
                for (int c = 0; c < terms; ++c) A(r, c) = basis[c];
                rhs(r) = nodes[r].f;
            }
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
            if (qr.rank() < terms) continue;
            const Eigen::VectorXd c = qr.solve(rhs);
            return Sample{c(0), c(1) / g.h(), c(2) / g.h()};
        }
    }
    return std::nullopt;
}

}  // namespace cuspforge
