#include "gauss.hpp"

#include <map>
#include <mutex>

namespace apx::detail {

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule r;
    r.x.resize(static_cast<std::size_t>(n));
    r.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.x[static_cast<std::size_t>(i)] = x;
        r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, double max_width, int n) {
    if (a == b) return 0.0;
    const auto& g = gauss_legendre(n);
    const double len = b - a;
    int panels = 1;
    if (max_width > 0) panels = std::max(1, static_cast<int>(std::ceil(std::abs(len) / max_width)));
    const double w = len / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * w;
        const double mid = lo + 0.5 * w;
        double acc = 0.0;
        for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * f(mid + 0.5 * w * g.x[i]);
        s += 0.5 * w * acc;
    }
    return s;
}

double integrate_graded(const std::function<double(double)>& f, double s, double len, double exponent, int levels,
                        double max_width) {
    double total = 0.0;
    double outer = len;
    for (int l = 0; l < levels; ++l) {
        const double inner = 0.5 * outer;
        total += len > 0 ? integrate_panels(f, s + inner, s + outer, max_width, 8)
                         : integrate_panels(f, s + outer, s + inner, max_width, 8);
        outer = inner;
    }
    // innermost [s, s + outer]: f ~ C u^exponent, integral = f(s + outer) * outer / (exponent + 1)
    total += f(s + outer) * std::abs(outer) / (exponent + 1.0);
    return total;
}

void panel_nodes(double a, double b, double max_width, int n, std::vector<double>& xs, std::vector<double>& ws) {
    if (a == b) return;
    const auto& g = gauss_legendre(n);
    const double len = b - a;
    int panels = 1;
    if (max_width > 0) panels = std::max(1, static_cast<int>(std::ceil(std::abs(len) / max_width)));
    const double w = len / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * w;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            xs.push_back(mid + 0.5 * w * g.x[i]);
            ws.push_back(0.5 * std::abs(w) * g.w[i]);
        }
    }
}

void graded_nodes(double s, double len, double exponent, int levels, double max_width, std::vector<double>& xs,
                  std::vector<double>& ws) {
    double outer = len;
    for (int l = 0; l < levels; ++l) {
        const double inner = 0.5 * outer;
        panel_nodes(s + inner, s + outer, max_width, 8, xs, ws);
        outer = inner;
    }
    xs.push_back(s + outer);
    ws.push_back(std::abs(outer) / (exponent + 1.0));
}

}  // namespace apx::detail
