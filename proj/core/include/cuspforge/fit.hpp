#pragma once

#include <span>

namespace cuspforge {

struct PowerFit {
    double exponent = 0;
    double coefficient = 0;
    double r_squared = 0;
    int samples = 0;
};

// Least-squares line through (log|x|, log|f|) over samples with
// lo <= |x| <= hi and f != 0. Throws FitFailure with fewer than min_samples.
PowerFit fit_power_law(std::span<const double> xs, std::span<const double> fs, double lo,
                       double hi, int min_samples = 8);

}  // namespace cuspforge
