#pragma once

#include <string>
#include <vector>

#include "cuspforge/fit.hpp"
#include "cuspforge/grid.hpp"

namespace cuspforge::cli {

struct Series2D {
    std::vector<double> xs, ys;
    std::string colour;
    std::string label;
};

std::string svg_polylines(const std::vector<Series2D>& series, const std::string& title);
// Nodes are binned down to at most 160 x 80 cells; NaN cells stay blank.
std::string svg_heatmap(const ScalarField& field, const std::string& title);
// log10|x| against log10 f with the fitted line over the window.
std::string svg_loglog_fit(const std::vector<double>& xs, const std::vector<double>& fs,
                           const PowerFit& fit, double lo, double hi,
                           const std::string& slope_text);

}  // namespace cuspforge::cli
