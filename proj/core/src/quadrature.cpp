#include "apx/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "apx/errors.hpp"
#include "gauss.hpp"

namespace apx {

namespace {

constexpr int kWindowLevels = 40;
constexpr double kWindowCells = 128.0;

/// Smooth step from 0 at t = 0 to 1 at t = 1.
double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double bump(double d, double delta) { return 1.0 - smooth_step(std::abs(d) / delta); }

std::shared_ptr<const WeightedRule> build_rule(const Weight& w, std::size_t n) {
    w.require_integrable();
    auto rule = std::make_shared<WeightedRule>();
    rule->n = n;
    rule->grid_w.assign(n, 0.0);
    const PeriodicGrid grid(n);
    const double h = grid.spacing();
    const auto& sps = w.special_points();
    if (sps.empty()) {
        for (std::size_t j = 0; j < n; ++j) rule->grid_w[j] = h * w(grid.node(j));
        return rule;
    }
    double minsep = kTwoPi;
    for (std::size_t i = 0; i < sps.size(); ++i)
        for (std::size_t k = i + 1; k < sps.size(); ++k)
            minsep = std::min(minsep, std::abs(wrap_angle(sps[i].x - sps[k].x)));
    const double delta = std::min({kWindowCells * h, 0.45 * minsep, 1.0});

    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.node(j);
        double psi = 0.0;
        for (const auto& s : sps) psi += bump(wrap_angle(x - s.x), delta);
        const double rest = 1.0 - psi;
        if (rest > 0.0) rule->grid_w[j] = h * w(x) * rest;
    }

    const auto& gl = detail::gauss_legendre(8);
    auto add_panels = [&](double s, double lo, double hi, double sign) {
        // panels over distances [lo, hi] from s on one side
        const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
        const double width = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * width;
            for (std::size_t i = 0; i < gl.x.size(); ++i) {
                const double d = mid + 0.5 * width * gl.x[i];
                const double x = s + sign * d;
                rule->xs.push_back(x);
                rule->ws.push_back(0.5 * width * gl.w[i] * w(x) * bump(d, delta));
            }
        }
    };
    for (const auto& s : sps) {
        for (double sign : {-1.0, 1.0}) {
            if (!s.graded) {
                add_panels(s.x, 0.0, delta, sign);
                continue;
            }
            double outer = delta;
            for (int l = 0; l < kWindowLevels; ++l) {
                add_panels(s.x, 0.5 * outer, outer, sign);
                outer *= 0.5;
            }
            // innermost [0, outer]: gamma ~ C u^alpha, bump ~ 1
            rule->xs.push_back(s.x);
            rule->ws.push_back(w(s.x + sign * outer) * outer / (s.exponent + 1.0));
        }
    }
    return rule;
}

}  // namespace

NodeRule adaptive_rule(const Weight& w, const std::vector<double>& kinks, int band, int refine) {
    w.require_integrable();
    band = std::max(band, 1);
    refine = std::max(refine, 1);
    NodeRule out;
    std::vector<std::pair<double, double>> brk;  // (location, exponent)
    for (const auto& s : w.special_points()) brk.emplace_back(wrap_angle(s.x), s.graded ? s.exponent : 0.0);
    for (double k : kinks) brk.emplace_back(wrap_angle(k), 0.0);
    if (brk.empty()) {
        const std::size_t n = std::max<std::size_t>(4096, next_power_of_two(static_cast<std::size_t>(16 * (band + 1)))) *
                              static_cast<std::size_t>(refine);
        const PeriodicGrid g(n);
        out.x = g.nodes();
        out.w.resize(n);
        for (std::size_t j = 0; j < n; ++j) out.w[j] = g.spacing() * w(out.x[j]);
        return out;
    }
    std::sort(brk.begin(), brk.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& b : brk) {
        if (!merged.empty() && b.first - merged.back().first < 1e-12)
            merged.back().second = std::min(merged.back().second, b.second);
        else
            merged.push_back(b);
    }
    if (merged.size() > 1 && merged.front().first + kTwoPi - merged.back().first < 1e-12) {
        merged.front().second = std::min(merged.front().second, merged.back().second);
        merged.pop_back();
    }
    const double width = std::min(0.25, 2.0 / band) / refine;
    const std::size_t m = merged.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto [a, ea] = merged[i];
        const double b = i + 1 < m ? merged[i + 1].first : merged[0].first + kTwoPi;
        const double eb = merged[(i + 1) % m].second;
        const double half = 0.5 * (b - a);
        detail::graded_nodes(a, half, ea, kWindowLevels, width, out.x, out.w);
        detail::graded_nodes(b, -half, eb, kWindowLevels, width, out.x, out.w);
    }
    for (std::size_t q = 0; q < out.x.size(); ++q) {
        out.x[q] = wrap_angle(out.x[q]);
        out.w[q] *= w(out.x[q]);
    }
    return out;
}

std::shared_ptr<const WeightedRule> weighted_rule(const Weight& w, std::size_t n) {
    static std::mutex mu;
    static std::map<std::pair<std::string, std::size_t>, std::shared_ptr<const WeightedRule>> cache;
    const auto key = std::make_pair(w.descriptor(), n);
    {
        std::lock_guard lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto rule = build_rule(w, n);
    std::lock_guard lock(mu);
    return cache.emplace(key, rule).first->second;
}

double apply_rule(const WeightedRule& rule, std::span<const double> grid_values,
                  const std::function<double(double)>& off_grid) {
    if (grid_values.size() != rule.n) throw InvalidInput("grid values do not match the rule");
    double s = 0.0;
    for (std::size_t j = 0; j < rule.n; ++j)
        if (rule.grid_w[j] != 0.0) s += rule.grid_w[j] * grid_values[j];
    for (std::size_t q = 0; q < rule.xs.size(); ++q) s += rule.ws[q] * off_grid(rule.xs[q]);
    return s;
}

double quadrature(const SampledFunction& f, const Weight& w) {
    for (double v : f.values)
        if (!std::isfinite(v)) throw InvalidInput("non-finite sample");
    const auto rule = weighted_rule(w, f.grid.size());
    if (rule->xs.empty()) return apply_rule(*rule, f.values, [](double) { return 0.0; });
    const FunctionEvaluator ev(f);
    return apply_rule(*rule, f.values, [&](double x) { return ev(x); });
}

double quadrature(const SampledFunction& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.spacing();
}

}  // namespace apx
