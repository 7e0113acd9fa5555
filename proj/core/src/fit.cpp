#include "cuspforge/fit.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cuspforge/error.hpp"

namespace cuspforge {

PowerFit fit_power_law(std::span<const double> xs, std::span<const double> fs, double lo,
                       double hi, int min_samples) {
    if (xs.size() != fs.size()) throw InvalidArgument("fit inputs differ in length");
    std::vector<double> lx, lf;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double ax = std::abs(xs[k]), af = std::abs(fs[k]);
        if (ax < lo || ax > hi || !(af > 0.0) || !std::isfinite(af)) continue;
        lx.push_back(std::log(ax));
        lf.push_back(std::log(af));
    }
    const int n = static_cast<int>(lx.size());
    if (n < min_samples)
        throw FitFailure("only " + std::to_string(n) + " usable samples in the fit window");
    double mx = 0, mf = 0;
    for (int k = 0; k < n; ++k) {
        mx += lx[k];
        mf += lf[k];
    }
    mx /= n;
    mf /= n;
    double sxx = 0, sxf = 0, sff = 0;
    for (int k = 0; k < n; ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxf += (lx[k] - mx) * (lf[k] - mf);
        sff += (lf[k] - mf) * (lf[k] - mf);
    }
    if (sxx <= 0) throw FitFailure("fit window collapses to a single abscissa");
    PowerFit fit;
    fit.exponent = sxf / sxx;
    fit.coefficient = std::exp(mf - fit.exponent * mx);
    fit.r_squared = sff > 0 ? (sxf * sxf) / (sxx * sff) : 1.0;
    fit.samples = n;
    return fit;
}

}  // namespace cuspforge
