#pragma once

#include <array>
#include <functional>
#include <string>

namespace cuspforge {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<double, 4>;  // row-major {F11, F12, F21, F22}

enum class NonlinearityTag { quadratic, rational_bernoulli, custom };

std::string to_string(NonlinearityTag tag);

// F(p) with gradient and Hessian. normalization s makes s*F have Hessian Id
// at the origin.
class Nonlinearity {
public:
    // (x^2 + y^2)/2, s = 1.
    static Nonlinearity quadratic();
    // (x^2 + y^2)/(1 + y), s = 1/2. Throws DenominatorDegenerate for y <= -1 + 1e-6.
    static Nonlinearity rational_bernoulli();
    static Nonlinearity custom(std::string name, std::function<double(Vec2)> f,
                               std::function<Vec2(Vec2)> grad, std::function<Mat2(Vec2)> hess,
                               double normalization);
    static Nonlinearity from_name(const std::string& name);

    NonlinearityTag tag() const { return tag_; }
    const std::string& name() const { return name_; }
    double normalization() const { return s_; }

    double F(Vec2 p) const;
    Vec2 grad(Vec2 p) const;
    Mat2 hess(Vec2 p) const;

    // s*F with normalization 1.
    Nonlinearity normalized() const;
    // c*F with normalization s/c.
    Nonlinearity scaled(double c) const;

private:
    NonlinearityTag tag_ = NonlinearityTag::quadratic;
    std::string name_ = "quadratic";
    double s_ = 1.0;
    double scale_ = 1.0;  // multiplies the base evaluators
    std::function<double(Vec2)> f_;
    std::function<Vec2(Vec2)> g_;
    std::function<Mat2(Vec2)> h_;
};

}  // namespace cuspforge
