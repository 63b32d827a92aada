#include "apx/norms.hpp"

#include <algorithm>
#include <cmath>

#include "apx/errors.hpp"
#include "apx/quadrature.hpp"

namespace apx {

NormParams NormParams::make(double p, std::optional<double> q) {
    if (!(p >= 1.0)) throw InvalidInput("p must be in [1, inf]");
    NormParams np;
    np.p = p;
    np.q = q;
    if (q) {
        if (!(*q > p)) throw InvalidInput("q must exceed p");
        np.theta = 1.0 / p - (std::isinf(*q) ? 0.0 : 1.0 / *q);
        np.q_star = std::isinf(*q) ? 1.0 : *q;
    }
    return np;
}

double NormParams::q_star_alt() const {
    if (!q || std::isinf(*q) || p == 1.0) return 1.0;
    return *q;
}

std::size_t default_norm_grid(const Weight& w, int degree) {
    const std::size_t base = w.has_singularities() ? 16384 : 4096;
    return std::max(base, next_power_of_two(static_cast<std::size_t>(4 * degree + 4)));
}

namespace {

double pow_abs(double v, double p) {
    const double a = std::abs(v);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

}  // namespace

double weighted_norm(const SampledFunction& f, double p, const Weight& w) {
    if (f.values.empty()) throw InvalidInput("empty grid");
    if (!(p >= 1.0)) throw InvalidInput("p must be in [1, inf]");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    const auto rule = weighted_rule(w, f.grid.size());
    std::vector<double> g(f.values.size());
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = pow_abs(f.values[j], p);
    double s;
    if (rule->xs.empty()) {
        s = apply_rule(*rule, g, [](double) { return 0.0; });
    } else {
        const FunctionEvaluator ev(f);
        s = apply_rule(*rule, g, [&](double x) { return pow_abs(ev(x), p); });
    }
    if (!std::isfinite(s)) throw DivergenceError("weighted integral diverges");
    return std::pow(std::max(s, 0.0), 1.0 / p);
}

double weighted_norm(std::span<const double> values, const std::function<double(double)>& off_grid, double p,
                     const Weight& w) {
    if (values.empty()) throw InvalidInput("empty grid");
    if (!(p >= 1.0)) throw InvalidInput("p must be in [1, inf]");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    const auto rule = weighted_rule(w, values.size());
    std::vector<double> g(values.size());
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = pow_abs(values[j], p);
    const double s = apply_rule(*rule, g, [&](double x) { return pow_abs(off_grid(x), p); });
    if (!std::isfinite(s)) throw DivergenceError("weighted integral diverges");
    return std::pow(std::max(s, 0.0), 1.0 / p);
}

double weighted_norm(const TrigPoly& u, double p, const Weight& w, std::size_t grid) {
    if (!(p >= 1.0)) throw InvalidInput("p must be in [1, inf]");
    if (std::isinf(p)) return sup_norm(u);
    const std::size_t n = grid ? grid : default_norm_grid(w, u.degree());
    const auto rule = weighted_rule(w, n);
    auto vals = synthesize_values(u, n);
    for (auto& v : vals) v = pow_abs(v, p);
    double s;
    if (rule->xs.empty()) {
        s = apply_rule(*rule, vals, [](double) { return 0.0; });
    } else {
        const PolyEvaluator ev(u);
        s = apply_rule(*rule, vals, [&](double x) { return pow_abs(ev(x), p); });
    }
    return std::pow(std::max(s, 0.0), 1.0 / p);
}

double accurate_norm(const std::function<double(double)>& g, double p, const Weight& w,
                     const std::vector<double>& kinks, int band) {
    if (!(p >= 1.0)) throw InvalidInput("p must be in [1, inf]");
    if (std::isinf(p)) {
        const std::size_t n = std::max<std::size_t>(4096, next_power_of_two(static_cast<std::size_t>(32 * std::max(band, 1))));
        const PeriodicGrid grid(n);
        double m = 0.0;
        for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(g(grid.node(j))));
        for (double k : kinks) m = std::max(m, std::abs(g(k)));
        return m;
    }
    const NodeRule rule = adaptive_rule(w, kinks, band);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.x.size(); ++q) s += rule.w[q] * pow_abs(g(rule.x[q]), p);
    if (!std::isfinite(s)) throw DivergenceError("weighted integral diverges");
    return std::pow(std::max(s, 0.0), 1.0 / p);
}

double sup_norm(const TrigPoly& u) {
    const std::size_t n = 4 * next_power_of_two(static_cast<std::size_t>(2 * u.degree() + 2));
    const auto v = synthesize_values(u, std::max<std::size_t>(n, 16));
    const std::size_t m = v.size();
    double best = 0.0;
    for (double x : v) best = std::max(best, std::abs(x));
    // top-3 local maxima of |U|
    std::vector<std::pair<double, std::size_t>> peaks;
    for (std::size_t j = 0; j < m; ++j) {
        const double a = std::abs(v[j]);
        if (a >= std::abs(v[(j + m - 1) % m]) && a >= std::abs(v[(j + 1) % m])) peaks.emplace_back(a, j);
    }
    std::partial_sort(peaks.begin(), peaks.begin() + std::min<std::size_t>(3, peaks.size()), peaks.end(),
                      std::greater<>());
    if (peaks.size() > 3) peaks.resize(3);
    const TrigPoly d1 = u.derivative(1), d2 = u.derivative(2);
    const double h = kTwoPi / static_cast<double>(m);
    for (auto [val, j] : peaks) {
        double x = -kPi + h * static_cast<double>(j);
        for (int it = 0; it < 3; ++it) {
            const double s = d2(x);
            if (s == 0.0) break;
            const double step = d1(x) / s;
            if (std::abs(step) > h) break;
            x -= step;
        }
        best = std::max(best, std::abs(u(x)));
    }
    return best;
}

double embedding_constant_c9(const Weight& w, double p) {
    const auto rep = classify_weight(w, p);
    if (!rep.in_as) throw NotInClassError("weight not in the class required for p: " + rep.summary);
    if (std::isinf(p)) return kTwoPi;
    if (p == 1.0) return 1.0 / rep.s1->c8;
    return std::pow(rep.ap->value, 1.0 / p) * std::pow(rep.l1_norm, -1.0 / p);
}

}  // namespace apx
