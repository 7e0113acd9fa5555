#pragma once

#include <utility>

#include "cuspforge/grid.hpp"

namespace cuspforge {

// Central differences inside, one-sided second-order stencils on the boundary.
// With a mask, stencils only read masked nodes: a node whose neighbour is
// missing falls back to the one-sided stencil (first order if only one
// neighbour is present). Nodes outside the mask get NaN.
std::pair<ScalarField, ScalarField> gradient(const ScalarField& field, const Mask& mask = {});
std::pair<ComplexField, ComplexField> gradient(const ComplexField& field, const Mask& mask = {});

// (d/dz, d/dzbar) = ((d/dx - i d/dy)/2, (d/dx + i d/dy)/2).
std::pair<ComplexField, ComplexField> wirtinger(const ComplexField& field, const Mask& mask = {});

// Max |5-point Laplacian| over interior nodes whose whole stencil is in mask.
double laplacian_residual(const ScalarField& field, const Mask& mask = {});

// Bilinear interpolation; p must lie inside the grid.
double bilinear(const ScalarField& field, Point p);

// Integral of a dx + b dy along a polyline on sub-steps no longer than the grid
// spacing: trapezoid rule with a four-point end correction, fourth order for
// smooth integrands. Reversing the path negates the result
// bit-for-bit.
double line_integral(const ScalarField& a, const ScalarField& b, const Path& path);

struct ConjugateResult {
    ScalarField U;         // NaN where no admissible path exists
    double loop_residual;  // worst disagreement between the two L-paths
    int fallback_nodes;    // nodes reached only by the vertical-first path
};

// Harmonic conjugate of u (dU/dx = du/dy, dU/dy = -du/dx) with U(basepoint) = 0,
// integrating the trapezoid rule along the grid path that runs horizontally
// from the basepoint and then vertically. Where that path leaves the mask the
// vertical-then-horizontal path is used instead. Throws
// RegionNotSimplyConnected when the two paths disagree by more than loop_tol
// and BasepointOutsideRegion when the basepoint is not a masked node.
ConjugateResult harmonic_conjugate(const ScalarField& u, Point basepoint, const Mask& mask = {},
                                   double loop_tol = 1e-6);

}  // namespace cuspforge
