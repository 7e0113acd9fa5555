#include <algorithm>
#include <cmath>
#include <limits>

#include "cuspforge/error.hpp"
#include "cuspforge/field_ops.hpp"

namespace cuspforge {

ConjugateResult harmonic_conjugate(const ScalarField& u, Point basepoint, const Mask& mask_in,
                                   double loop_tol) {
    const Grid& g = u.grid;
    const Mask mask = mask_in.empty() ? full_mask(g) : mask_in;
    if (mask.size() != g.size()) throw InvalidArgument("mask length does not match grid");
    if (!g.contains(basepoint)) throw BasepointOutsideRegion("basepoint lies outside the grid");
    const auto [i0, j0] = g.nearest(basepoint);
    if (std::hypot(g.x(i0) - basepoint.x, g.y(j0) - basepoint.y) > 1e-9 * std::max(1.0, g.h()))
        throw BasepointOutsideRegion("basepoint is not a grid node");
    if (!mask[g.index(i0, j0)]) throw BasepointOutsideRegion("basepoint is outside the mask");

    // The 1-form is du/dy dx - du/dx dy.
    const auto [ux, uy] = gradient(u, mask);
    const int nx = g.nx(), ny = g.ny();
    const double h = g.h();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    auto in = [&](int i, int j) { return mask[g.index(i, j)] != 0; };
    auto hstep = [&](int i, int j, int di) {  // integral from (i,j) to (i+di,j)
        return di * 0.5 * h * (uy.at(i, j) + uy.at(i + di, j));
    };
    auto vstep = [&](int i, int j, int dj) {  // integral from (i,j) to (i,j+dj)
        return -dj * 0.5 * h * (ux.at(i, j) + ux.at(i, j + dj));
    };

    // Horizontal-first: walk the basepoint row, then each column.
    std::vector<double> row(nx, nan);
    row[i0] = 0.0;
    for (int i = i0 + 1; i < nx && in(i, j0) && std::isfinite(row[i - 1]); ++i)
        row[i] = row[i - 1] + hstep(i - 1, j0, 1);
    for (int i = i0 - 1; i >= 0 && in(i, j0) && std::isfinite(row[i + 1]); --i)
        row[i] = row[i + 1] + hstep(i + 1, j0, -1);
    ScalarField horiz(g, nan);
    for (int i = 0; i < nx; ++i) {
        if (!std::isfinite(row[i])) continue;
        horiz.at(i, j0) = row[i];
        for (int j = j0 + 1; j < ny && in(i, j); ++j)
            horiz.at(i, j) = horiz.at(i, j - 1) + vstep(i, j - 1, 1);
        for (int j = j0 - 1; j >= 0 && in(i, j); --j)
            horiz.at(i, j) = horiz.at(i, j + 1) + vstep(i, j + 1, -1);
    }

    // Vertical-first: walk the basepoint column, then each row.
    std::vector<double> col(ny, nan);
    col[j0] = 0.0;
    for (int j = j0 + 1; j < ny && in(i0, j) && std::isfinite(col[j - 1]); ++j)
        col[j] = col[j - 1] + vstep(i0, j - 1, 1);
    for (int j = j0 - 1; j >= 0 && in(i0, j) && std::isfinite(col[j + 1]); --j)
        col[j] = col[j + 1] + vstep(i0, j + 1, -1);
    ScalarField vert(g, nan);
    for (int j = 0; j < ny; ++j) {
        if (!std::isfinite(col[j])) continue;
        vert.at(i0, j) = col[j];
        for (int i = i0 + 1; i < nx && in(i, j); ++i)
            vert.at(i, j) = vert.at(i - 1, j) + hstep(i - 1, j, 1);
        for (int i = i0 - 1; i >= 0 && in(i, j); --i)
            vert.at(i, j) = vert.at(i + 1, j) + hstep(i + 1, j, -1);
    }

    ConjugateResult out{ScalarField(g, nan), 0.0, 0};
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!mask[k]) continue;
        const double a = horiz.values[k], b = vert.values[k];
        if (std::isfinite(a)) {
            out.U.values[k] = a;
            if (std::isfinite(b)) out.loop_residual = std::max(out.loop_residual, std::abs(a - b));
        } else if (std::isfinite(b)) {
            out.U.values[k] = b;
            ++out.fallback_nodes;
        }
    }
    if (out.loop_residual > loop_tol)
        throw RegionNotSimplyConnected("loop residual " + std::to_string(out.loop_residual) +
                                       " exceeds tolerance");
    return out;
}

}  // namespace cuspforge
