#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace apx {

class TrigPoly;

/// Closed-form test-function families.
enum class Family { constant, cos_mode, sin_mode, abs_sin_pow, exp_sin, sawtooth, sawtooth_vp, trig_poly };

/// Exact evaluator tag: a named family plus its parameters.
class FunctionRule {
public:
    static FunctionRule constant(double c);
    static FunctionRule cos_mode(int m);
    static FunctionRule sin_mode(int m);
    /// |sin x|^s, s > 0.
    static FunctionRule abs_sin_pow(double s);
    static FunctionRule exp_sin();
    /// Sawtooth sum_k sin(kx)/k = (pi - x)/2 on (0, 2 pi).
    static FunctionRule sawtooth();
    /// Sawtooth smoothed by the de la Vallee-Poussin mean of order n0.
    static FunctionRule sawtooth_vp(int n0);
    static FunctionRule poly(const TrigPoly& p, std::string label = "poly");

    [[nodiscard]] Family family() const { return family_; }
    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] double param() const { return param_; }

    [[nodiscard]] double operator()(double x) const { return eval(x); }
    [[nodiscard]] double eval(double x) const;
    /// r-th derivative; throws InvalidInput when the family has no rule for order r.
    [[nodiscard]] double derivative(double x, int r) const;
    [[nodiscard]] bool has_derivative(int r) const;
    /// Rule for the r-th derivative as a standalone rule.
    [[nodiscard]] FunctionRule derivative_rule(int r) const;
    /// Points in [-pi, pi) where the function or one of its low derivatives is not smooth.
    [[nodiscard]] std::vector<double> kinks() const;
    /// Exact polynomial form for polynomial families.
    [[nodiscard]] std::optional<TrigPoly> as_poly() const;

private:
    FunctionRule() = default;

    Family family_ = Family::constant;
    std::string name_;
    double param_ = 0.0;
    int order_ = 0;  // derivative order carried by derivative_rule
    std::shared_ptr<const TrigPoly> poly_;
    std::shared_ptr<const std::vector<TrigPoly>> exp_sin_factors_;
};

}  // namespace apx
