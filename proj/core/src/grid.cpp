#include "cuspforge/grid.hpp"

#include <algorithm>
#include <cmath>

#include "cuspforge/error.hpp"

namespace cuspforge {

std::string to_string(HalfPlane side) {
    switch (side) {
        case HalfPlane::upper: return "upper";
        case HalfPlane::lower: return "lower";
        case HalfPlane::full: return "full";
    }
    return "full";
}

HalfPlane half_plane_from_string(const std::string& text) {
    if (text == "upper") return HalfPlane::upper;
    if (text == "lower") return HalfPlane::lower;
    if (text == "full") return HalfPlane::full;
    throw ParseError("unknown half_plane_side '" + text + "'");
}

Grid::Grid(double x_min, double x_max, double y_min, double y_max, int nx, int ny,
           HalfPlane side)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), nx_(nx), ny_(ny),
      side_(side) {
    if (nx < 2 || ny < 2) throw InvalidArgument("grid needs at least 2 nodes per axis");
    if (!(x_max > x_min) || !(y_max > y_min))
        throw InvalidArgument("grid extents must be increasing");
    const double hx = (x_max - x_min) / (nx - 1);
    const double hy = (y_max - y_min) / (ny - 1);
    if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy))
        throw InvalidArgument("grid cells must be square");
    h_ = hx;
    if (side == HalfPlane::upper && y_min != 0.0)
        throw InvalidArgument("upper half-plane grid requires y_min = 0");
    if (side == HalfPlane::lower && y_max != 0.0)
        throw InvalidArgument("lower half-plane grid requires y_max = 0");
}

Grid Grid::with_spacing(double x_min, double y_min, double h, int nx, int ny, HalfPlane side) {
    double y_max = y_min + (ny - 1) * h;
    if (side == HalfPlane::lower) y_max = 0.0;
    return Grid(x_min, x_min + (nx - 1) * h, y_min, y_max, nx, ny, side);
}

bool Grid::contains(Point p, double slack) const {
    const double s = slack * std::max(1.0, h_);
    return p.x >= x_min_ - s && p.x <= x_max_ + s && p.y >= y_min_ - s && p.y <= y_max_ + s;
}

std::pair<int, int> Grid::nearest(Point p) const {
    const int i = static_cast<int>(std::lround((p.x - x_min_) / h_));
    const int j = static_cast<int>(std::lround((p.y - y_min_) / h_));
    return {std::clamp(i, 0, nx_ - 1), std::clamp(j, 0, ny_ - 1)};
}

Mask full_mask(const Grid& g) { return Mask(g.size(), 1); }

Mask disk_mask(const Grid& g, Point c, double radius) {
    Mask m(g.size(), 0);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            m[g.index(i, j)] = std::hypot(g.x(i) - c.x, g.y(j) - c.y) <= radius;
    return m;
}

template <class T>
Mask finite_mask(const std::vector<T>& values) {
    Mask m(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        if constexpr (std::is_same_v<T, double>)
            m[k] = std::isfinite(values[k]);
        else
            m[k] = std::isfinite(values[k].real()) && std::isfinite(values[k].imag());
    }
    return m;
}
template Mask finite_mask<double>(const std::vector<double>&);
template Mask finite_mask<cplx>(const std::vector<cplx>&);

template <class T>
Field<T>::Field(const Grid& g, std::vector<T> v) : grid(g), values(std::move(v)) {
    if (values.size() != g.size()) throw InvalidArgument("field length does not match grid");
}
template struct Field<double>;
template struct Field<cplx>;

double max_abs_diff(const ScalarField& a, const ScalarField& b, const Mask& mask) {
    if (!(a.grid == b.grid)) throw InvalidArgument("fields live on different grids");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        if (!mask.empty() && !mask[k]) continue;
        const double d = a.values[k] - b.values[k];
        if (std::isfinite(d)) worst = std::max(worst, std::abs(d));
    }
    return worst;
}

}  // namespace cuspforge
