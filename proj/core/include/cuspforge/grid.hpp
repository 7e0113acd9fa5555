#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace cuspforge {

using cplx = std::complex<double>;

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

enum class HalfPlane { upper, lower, full };

std::string to_string(HalfPlane side);
HalfPlane half_plane_from_string(const std::string& text);

// Node-centred structured grid with square cells.
class Grid {
public:
    Grid() = default;
    // Throws InvalidArgument when the cells are not square or the side does
    // not match the y-range.
    Grid(double x_min, double x_max, double y_min, double y_max, int nx, int ny,
         HalfPlane side = HalfPlane::full);

    // Grid of spacing h anchored at (x_min, y_min).
    static Grid with_spacing(double x_min, double y_min, double h, int nx, int ny,
                             HalfPlane side = HalfPlane::full);

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double y_min() const { return y_min_; }
    double y_max() const { return y_max_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    HalfPlane side() const { return side_; }
    double h() const { return h_; }
    std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }

    double x(int i) const { return i == nx_ - 1 ? x_max_ : x_min_ + i * h_; }
    double y(int j) const { return j == ny_ - 1 ? y_max_ : y_min_ + j * h_; }
    Point node(int i, int j) const { return {x(i), y(j)}; }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * nx_ + i;
    }
    bool contains(Point p, double slack = 1e-12) const;

    // Index of the node nearest to p (clamped to the grid).
    std::pair<int, int> nearest(Point p) const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double x_min_ = 0, x_max_ = 0, y_min_ = 0, y_max_ = 0;
    int nx_ = 0, ny_ = 0;
    HalfPlane side_ = HalfPlane::full;
    double h_ = 0;
};

// Node predicate; 1 marks a node that belongs to the region.
using Mask = std::vector<unsigned char>;

Mask full_mask(const Grid& g);
Mask disk_mask(const Grid& g, Point centre, double radius);
// Nodes whose value is finite.
template <class T> Mask finite_mask(const std::vector<T>& values);

template <class T>
struct Field {
    Grid grid;
    std::vector<T> values;

    Field() = default;
    explicit Field(const Grid& g, T fill = T{}) : grid(g), values(g.size(), fill) {}
    Field(const Grid& g, std::vector<T> v);

    T& at(int i, int j) { return values[grid.index(i, j)]; }
    const T& at(int i, int j) const { return values[grid.index(i, j)]; }

    template <class Fn>
    static Field sample(const Grid& g, Fn&& fn) {
        Field f(g);
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) f.at(i, j) = fn(g.x(i), g.y(j));
        return f;
    }
};

using ScalarField = Field<double>;
using ComplexField = Field<cplx>;

struct Path {
    std::vector<Point> vertices;
    bool closed = false;
};

// Max of |a - b| over nodes selected by mask (all nodes if mask is empty);
// nodes where either value is non-finite are skipped.
double max_abs_diff(const ScalarField& a, const ScalarField& b, const Mask& mask = {});

}  // namespace cuspforge
