#pragma once

#include <functional>

namespace cuspforge {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_subdivisions = 1 << 16;
    // Use the extrapolating rule that copes with integrable endpoint
    // singularities.
    bool endpoint_singular = false;
};

// Adaptive Gauss-Kronrod quadrature of f over [a, b]. Throws QuadratureFailure
// when the tolerance is not reached within the subdivision budget.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options = {});

}  // namespace cuspforge
