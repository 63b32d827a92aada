#include "apx/smoothness.hpp"

#include <algorithm>
#include <cmath>

#include "apx/errors.hpp"
#include "apx/operators.hpp"
#include "apx/quadrature.hpp"
#include "gauss.hpp"

namespace apx {

namespace {

constexpr int kHGrid = 16;
constexpr int kKyNodes = 32;

void check_step(double v) {
    if (!(v >= 0.0)) throw InvalidInput("modulus step must be >= 0");
    if (v > 1.0) throw InvalidInput("modulus step must be <= 1");
}

void check_order(int k) {
    if (k < 1) throw InvalidInput("order must be >= 1");
}

double norm_of(const TrigPoly& u, const LpNorm& nm) { return weighted_norm(u, nm.p, nm.w); }

}  // namespace

double modulus(const TrigPoly& f, int k, double v, const LpNorm& nm) {
    check_order(k);
    check_step(v);
    if (v == 0.0) return 0.0;
    const auto m = steklov_complement(v, k, static_cast<std::size_t>(f.degree()));
    return norm_of(apply_multiplier(f, m), nm);
}

double modulus(const SampledFunction& f, int k, double v, const LpNorm& nm) {
    check_order(k);
    check_step(v);
    if (v == 0.0) return 0.0;
    const auto tag = OperatorTag::steklov(v);
    SampledFunction g = f;
    for (int i = 0; i < k; ++i) {
        const SampledFunction t = apply(tag, g);
        std::vector<double> d(g.values.size());
        for (std::size_t j = 0; j < d.size(); ++j) d[j] = g.values[j] - t.values[j];
        g = SampledFunction(g.grid, std::move(d));
    }
    return weighted_norm(g, nm.p, nm.w);
}

ModulusVariants modulus_variants(const TrigPoly& f, int r, double v, const LpNorm& nm) {
    check_order(r);
    check_step(v);
    ModulusVariants out;
    if (v == 0.0) return out;
    const auto kmax = static_cast<std::size_t>(f.degree());
    const std::size_t n = default_norm_grid(nm.w, f.degree() * (r + 1));
    const auto& gl = detail::gauss_legendre(kKyNodes);
    for (int i = 0; i < kHGrid; ++i) {
        const double h = v * std::pow(2.0, -0.5 * i);

        const Multiplier phi = multiplier(OperatorTag::symmetric(h), kmax);
        Multiplier comp;
        comp.m.resize(kmax + 1);
        for (std::size_t k = 0; k <= kmax; ++k) comp.m[k] = std::pow(1.0 - phi.m[k], r);
        const double g = norm_of(apply_multiplier(f, comp), nm);
        if (g > out.gadjieva) {
            out.gadjieva = g;
            out.h_gadjieva = h;
        }

        // (1/h) int_0^h |Delta_t^r f(x)| dt on the grid, Gauss nodes in t
        std::vector<double> acc(n, 0.0);
        std::vector<TrigPoly> diffs;
        std::vector<double> tw;
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
            const double t = 0.5 * h * (gl.x[q] + 1.0);
            diffs.push_back(apply(OperatorTag::difference(t, r), f));
            tw.push_back(0.5 * gl.w[q]);
            const auto vals = synthesize_values(diffs.back(), n);
            for (std::size_t j = 0; j < n; ++j) acc[j] += tw.back() * std::abs(vals[j]);
        }
        double ky;
        if (weighted_rule(nm.w, n)->xs.empty() || std::isinf(nm.p)) {
            ky = weighted_norm(acc, [](double) { return 0.0; }, nm.p, nm.w);
        } else {
            std::vector<PolyEvaluator> evs;
            evs.reserve(diffs.size());
            for (const auto& d : diffs) evs.emplace_back(d);
            ky = weighted_norm(acc, [&](double x) {
                double s = 0.0;
                for (std::size_t q = 0; q < evs.size(); ++q) s += tw[q] * std::abs(evs[q](x));
                return s;
            }, nm.p, nm.w);
        }
        if (ky > out.ky) {
            out.ky = ky;
            out.h_ky = h;
        }
    }
    return out;
}

KFunctionalBound k_functional_upper(const TrigPoly& f, int r, double v, const LpNorm& nm) {
    check_order(r);
    if (!(v > 0.0) || v > 1.0) throw InvalidInput("K-functional step must be in (0, 1]");
    const double vr = std::pow(v, r);
    KFunctionalBound best;
    best.value = norm_of(f, nm);
    best.candidate = "zero";
    best.distance = best.value;
    auto consider = [&](const char* name, const TrigPoly& g) {
        const double dist = norm_of(f - g, nm);
        const double smooth = vr * norm_of(g.derivative(r), nm);
        if (dist + smooth < best.value) best = {dist + smooth, name, dist, smooth};
    };
    const int n = static_cast<int>(std::ceil(1.0 / v - 1e-12));
    consider("A_delta", apply(OperatorTag::a_delta(v, r), f));
    consider("V_n", apply(OperatorTag::vallee_poussin(n), f).truncated(std::min(f.degree(), 2 * n - 1)));
    if (n >= 2) consider("D_n", apply(OperatorTag::jackson(n), f).truncated(std::min(f.degree(), 2 * (n / 2))));
    return best;
}

double realization(const TrigPoly& f, int r, int n, const LpNorm& nm, const TrigPoly& u) {
    check_order(r);
    if (n < 1) throw InvalidInput("realization needs n >= 1");
    if (u.effective_degree() > n) throw InvalidInput("approximant degree exceeds n");
    return norm_of(f - u, nm) + std::pow(static_cast<double>(n), -r) * norm_of(u.derivative(r), nm);
}

}  // namespace apx
