#pragma once

#include <optional>

#include "cuspforge/grid.hpp"

namespace cuspforge {

struct Sample {
    double value;
    double dx;
    double dy;
};

// Evaluates a sampled field and its gradient at arbitrary points. Where the
// surrounding 4x4 block of nodes is complete this is tensor-product cubic
// Lagrange interpolation. Near the edge of the mask the nearest complete block
// within two cells is used instead, extrapolating slightly; failing that, a
// local least-squares polynomial through the available nodes.
class FieldSampler {
public:
    explicit FieldSampler(const ScalarField& field, Mask mask = {});

    // Empty when too few valid nodes surround p.
    std::optional<Sample> operator()(Point p) const;
    const Grid& grid() const { return field_->grid; }

private:
    std::optional<Sample> least_squares(Point p, int ci, int cj) const;
    bool valid(int i, int j) const;

    const ScalarField* field_;
    Mask mask_;
};

}  // namespace cuspforge
