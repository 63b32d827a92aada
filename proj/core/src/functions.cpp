#include "apx/functions.hpp"

#include <cmath>

#include "apx/errors.hpp"
#include "apx/fourier.hpp"

namespace apx {

namespace {

constexpr int kExpSinOrders = 8;

std::shared_ptr<const std::vector<TrigPoly>> exp_sin_factors() {
    // d^r/dx^r e^{sin x} = e^{sin x} Q_r(x), Q_{r+1} = Q_r' + cos x Q_r.
    static const auto factors = [] {
        std::vector<TrigPoly> q{TrigPoly::constant(1.0)};
        const TrigPoly c = TrigPoly::cosine(1);
        for (int r = 0; r < kExpSinOrders; ++r) q.push_back(q.back().derivative(1) + q.back().times(c));
        return std::make_shared<const std::vector<TrigPoly>>(std::move(q));
    }();
    return factors;
}

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

std::string fmt_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

FunctionRule FunctionRule::constant(double c) {
    FunctionRule f;
    f.family_ = Family::constant;
    f.param_ = c;
    f.name_ = "constant(" + fmt_param(c) + ")";
    return f;
}

FunctionRule FunctionRule::cos_mode(int m) {
    if (m < 0) throw InvalidInput("mode index must be >= 0");
    FunctionRule f;
    f.family_ = Family::cos_mode;
    f.param_ = m;
    f.name_ = "cos(" + std::to_string(m) + "x)";
    return f;
}

FunctionRule FunctionRule::sin_mode(int m) {
    if (m < 0) throw InvalidInput("mode index must be >= 0");
    FunctionRule f;
    f.family_ = Family::sin_mode;
    f.param_ = m;
    f.name_ = "sin(" + std::to_string(m) + "x)";
    return f;
}

FunctionRule FunctionRule::abs_sin_pow(double s) {
    if (!(s > 0)) throw InvalidInput("|sin x|^s needs s > 0");
    FunctionRule f;
    f.family_ = Family::abs_sin_pow;
    f.param_ = s;
    f.name_ = "abs_sin^" + fmt_param(s);
    return f;
}

FunctionRule FunctionRule::exp_sin() {
    FunctionRule f;
    f.family_ = Family::exp_sin;
    f.name_ = "exp_sin";
    f.exp_sin_factors_ = exp_sin_factors();
    return f;
}

FunctionRule FunctionRule::sawtooth() {
    FunctionRule f;
    f.family_ = Family::sawtooth;
    f.name_ = "sawtooth";
    return f;
}

FunctionRule FunctionRule::sawtooth_vp(int n0) {
    if (n0 < 1) throw InvalidInput("sawtooth_vp needs n0 >= 1");
    TrigPoly p(2 * n0 - 1);
    for (int k = 1; k < 2 * n0; ++k) {
        const double m = k <= n0 ? 1.0 : 2.0 - static_cast<double>(k) / n0;
        p.set(k, 0.0, m / k);
    }
    FunctionRule f = poly(p, "sawtooth_vp(" + std::to_string(n0) + ")");
    f.family_ = Family::sawtooth_vp;
    f.param_ = n0;
    return f;
}

FunctionRule FunctionRule::poly(const TrigPoly& p, std::string label) {
    FunctionRule f;
    f.family_ = Family::trig_poly;
    f.name_ = std::move(label);
    f.poly_ = std::make_shared<const TrigPoly>(p);
    return f;
}

double FunctionRule::eval(double x) const {
    if (order_ > 0) return derivative(x, 0);
    switch (family_) {
        case Family::constant: return param_;
        case Family::cos_mode: return std::cos(param_ * x);
        case Family::sin_mode: return std::sin(param_ * x);
        case Family::abs_sin_pow: return std::pow(std::abs(std::sin(x)), param_);
        case Family::exp_sin: return std::exp(std::sin(x));
        case Family::sawtooth: {
            const double y = wrap_angle(x);
            if (y == 0.0 || y == -kPi) return 0.0;
            return y > 0 ? 0.5 * (kPi - y) : 0.5 * (-kPi - y);
        }
        case Family::sawtooth_vp:
        case Family::trig_poly: return (*poly_)(x);
    }
    return 0.0;
}

bool FunctionRule::has_derivative(int r) const {
    const int total = r + order_;
    if (total == 0) return true;
    switch (family_) {
        case Family::constant:
        case Family::cos_mode:
        case Family::sin_mode:
        case Family::sawtooth_vp:
        case Family::trig_poly: return true;
        case Family::exp_sin: return total <= kExpSinOrders;
        case Family::abs_sin_pow: return total <= 2 && param_ >= total;
        case Family::sawtooth: return false;
    }
    return false;
}

double FunctionRule::derivative(double x, int r) const {
    const int total = r + order_;
    if (total == 0) {
        FunctionRule base = *this;
        base.order_ = 0;
        return base.eval(x);
    }
    if (!has_derivative(r)) throw InvalidInput("no derivative rule of order " + std::to_string(total) + " for " + name_);
    switch (family_) {
        case Family::constant: return 0.0;
        case Family::cos_mode: {
            const double m = param_;
            return std::pow(m, total) * std::cos(m * x + total * kPi / 2);
        }
        case Family::sin_mode: {
            const double m = param_;
            return std::pow(m, total) * std::sin(m * x + total * kPi / 2);
        }
        case Family::exp_sin: return std::exp(std::sin(x)) * (*exp_sin_factors_)[static_cast<std::size_t>(total)](x);
        case Family::abs_sin_pow: {
            const double s = param_, sn = std::sin(x), cs = std::cos(x), as = std::abs(sn);
            if (total == 1) return as == 0.0 ? 0.0 : s * std::pow(as, s - 1) * sgn(sn) * cs;
            if (as == 0.0) return s == 2.0 ? 2.0 : 0.0;
            return s * (s - 1) * std::pow(as, s - 2) * cs * cs - s * std::pow(as, s);
        }
        case Family::sawtooth_vp:
        case Family::trig_poly: return poly_->derivative(total)(x);
        case Family::sawtooth: break;
    }
    throw InvalidInput("no derivative rule for " + name_);
}

FunctionRule FunctionRule::derivative_rule(int r) const {
    if (r == 0) return *this;
    if (!has_derivative(r)) throw InvalidInput("no derivative rule of order " + std::to_string(r) + " for " + name_);
    if (auto p = as_poly()) return poly(p->derivative(r), name_ + "^(" + std::to_string(r) + ")");
    FunctionRule d = *this;
    d.order_ += r;
    d.name_ = name_ + "^(" + std::to_string(r) + ")";
    return d;
}

std::vector<double> FunctionRule::kinks() const {
    switch (family_) {
        case Family::abs_sin_pow: {
            const double half = 0.5 * param_;
            if (half == std::floor(half)) return {};
            return {-kPi, 0.0};
        }
        case Family::sawtooth: return {0.0};
        default: return {};
    }
}

std::optional<TrigPoly> FunctionRule::as_poly() const {
    TrigPoly p;
    switch (family_) {
        case Family::constant: p = TrigPoly::constant(param_); break;
        case Family::cos_mode: p = TrigPoly::cosine(static_cast<int>(param_)); break;
        case Family::sin_mode: p = TrigPoly::sine(static_cast<int>(param_)); break;
        case Family::sawtooth_vp:
        case Family::trig_poly: p = *poly_; break;
        default: return std::nullopt;
    }
    return order_ > 0 ? p.derivative(order_) : p;
}

}  // namespace apx
