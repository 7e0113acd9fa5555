#include "cuspforge/nonlinearity.hpp"

#include "cuspforge/error.hpp"

namespace cuspforge {

namespace {

double denominator(double y) {
    if (!(y > -1.0 + 1e-6))
        throw DenominatorDegenerate("1 + y is not bounded away from 0 (y = " + std::to_string(y) +
                                    ")");
    return 1.0 + y;
}

}  // namespace

std::string to_string(NonlinearityTag tag) {
    switch (tag) {
        case NonlinearityTag::quadratic: return "quadratic";
        case NonlinearityTag::rational_bernoulli: return "rational_bernoulli";
        case NonlinearityTag::custom: return "custom";
    }
    return "custom";
}

Nonlinearity Nonlinearity::quadratic() { return Nonlinearity{}; }

Nonlinearity Nonlinearity::rational_bernoulli() {
    Nonlinearity n;
    n.tag_ = NonlinearityTag::rational_bernoulli;
    n.name_ = "rational_bernoulli";
    n.s_ = 0.5;
    return n;
}

Nonlinearity Nonlinearity::custom(std::string name, std::function<double(Vec2)> f,
                                  std::function<Vec2(Vec2)> grad, std::function<Mat2(Vec2)> hess,
                                  double normalization) {
    if (!f || !grad || !hess) throw InvalidArgument("custom nonlinearity needs all evaluators");
    if (!(normalization > 0)) throw InvalidArgument("normalization must be positive");
    Nonlinearity n;
    n.tag_ = NonlinearityTag::custom;
    n.name_ = std::move(name);
    n.s_ = normalization;
    n.f_ = std::move(f);
    n.g_ = std::move(grad);
    n.h_ = std::move(hess);
    return n;
}

Nonlinearity Nonlinearity::from_name(const std::string& name) {
    if (name == "quadratic") return quadratic();
    if (name == "rational_bernoulli") return rational_bernoulli();
    throw InvalidArgument("unknown nonlinearity '" + name + "'");
}

double Nonlinearity::F(Vec2 p) const {
    const auto [x, y] = p;
    switch (tag_) {
        case NonlinearityTag::quadratic: return scale_ * 0.5 * (x * x + y * y);
        case NonlinearityTag::rational_bernoulli: return scale_ * (x * x + y * y) / denominator(y);
        default: return scale_ * f_(p);
    }
}

Vec2 Nonlinearity::grad(Vec2 p) const {
    const auto [x, y] = p;
    switch (tag_) {
        case NonlinearityTag::quadratic: return {scale_ * x, scale_ * y};
        case NonlinearityTag::rational_bernoulli: {
            const double d = denominator(y);
            return {scale_ * 2 * x / d, scale_ * (y * y + 2 * y - x * x) / (d * d)};
        }
        default: {
            const Vec2 g = g_(p);
            return {scale_ * g[0], scale_ * g[1]};
        }
    }
}

Mat2 Nonlinearity::hess(Vec2 p) const {
    const auto [x, y] = p;
    switch (tag_) {
        case NonlinearityTag::quadratic: return {scale_, 0, 0, scale_};
        case NonlinearityTag::rational_bernoulli: {
            const double d = denominator(y);
            const double fxy = -2 * x / (d * d);
            return {scale_ * 2 / d, scale_ * fxy, scale_ * fxy,
                    scale_ * 2 * (1 + x * x) / (d * d * d)};
        }
        default: {
            const Mat2 m = h_(p);
            return {scale_ * m[0], scale_ * m[1], scale_ * m[2], scale_ * m[3]};
        }
    }
}

Nonlinearity Nonlinearity::scaled(double c) const {
    if (!(c > 0)) throw InvalidArgument("scale factor must be positive");
    Nonlinearity n = *this;
    n.scale_ *= c;
    n.s_ /= c;
    return n;
}

Nonlinearity Nonlinearity::normalized() const { return scaled(s_); }

}  // namespace cuspforge
