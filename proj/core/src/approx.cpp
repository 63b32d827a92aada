#include "apx/approx.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>

#include "apx/errors.hpp"
#include "apx/operators.hpp"
#include "apx/quadrature.hpp"
#include "apx/smoothness.hpp"

namespace apx {

namespace {

constexpr double kSmoothing = 1e-10;
constexpr double kWeightFloor = 1e-12;
constexpr int kMaxIncreases = 10;

/// Frequency content of f used to size quadrature panels.
int rule_band(const FunctionRule& f) {
    if (auto p = f.as_poly()) return std::max(1, p->degree());
    return 64;
}

double pow_abs(double v, double p) {
    const double a = std::abs(v);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

/// Discretized problem: nodes, quadrature weights (gamma included) and target values.
struct Problem {
    NodeRule rule;
    std::vector<double> fx;
};

Problem make_problem(const FunctionRule& f, int n, const Weight& w, int refine = 1) {
    Problem pr;
    pr.rule = adaptive_rule(w, f.kinks(), rule_band(f) + 2 * n, refine);
    pr.fx.resize(pr.rule.x.size());
    for (std::size_t q = 0; q < pr.fx.size(); ++q) pr.fx[q] = f(pr.rule.x[q]);
    return pr;
}

/// Basis [1, cos x, sin x, cos 2x, sin 2x, ...]: index 0, then 2k-1 (cos) and 2k (sin).
TrigPoly to_poly(const Eigen::VectorXd& c, int n) {
    TrigPoly p(n);
    p.set_a0(c(0));
    for (int k = 1; k <= n; ++k) p.set(k, c(2 * k - 1), c(2 * k));
    return p;
}

/// Weighted Gram matrix and right-hand side from exponential moments of the node weights.
template <typename Acc>
void normal_equations(const std::vector<double>& x, const std::vector<double>& wt, const std::vector<double>& fx,
                      int n, Eigen::MatrixXd& g, Eigen::VectorXd& rhs) {
    const std::size_t kmax = static_cast<std::size_t>(2 * n);
    using lcplx = std::complex<Acc>;
    std::vector<lcplx> mu(kmax + 1, lcplx{}), nu(static_cast<std::size_t>(n) + 1, lcplx{});
    for (std::size_t q = 0; q < x.size(); ++q) {
        const cplx step = std::polar(1.0, x[q]);
        cplx e{1.0, 0.0};
        const double wf = wt[q] * fx[q];
        for (std::size_t k = 0; k <= kmax; ++k) {
            // re-anchor the recurrence so the phase error stays at a few ulps
            if (k % 8 == 0) e = std::polar(1.0, static_cast<double>(k) * x[q]);
            mu[k] += lcplx(wt[q] * e.real(), wt[q] * e.imag());
            if (k <= static_cast<std::size_t>(n)) nu[k] += lcplx(wf * e.real(), wf * e.imag());
            e *= step;
        }
    }
    const int m = 2 * n + 1;
    g.resize(m, m);
    rhs.resize(m);
    auto re = [&](int k) { return static_cast<double>(mu[static_cast<std::size_t>(std::abs(k))].real()); };
    auto im = [&](int k) {
        const auto v = static_cast<double>(mu[static_cast<std::size_t>(std::abs(k))].imag());
        return k >= 0 ? v : -v;
    };
    g(0, 0) = re(0);
    rhs(0) = static_cast<double>(nu[0].real());
    for (int a = 1; a <= n; ++a) {
        g(0, 2 * a - 1) = g(2 * a - 1, 0) = re(a);
        g(0, 2 * a) = g(2 * a, 0) = im(a);
        rhs(2 * a - 1) = static_cast<double>(nu[static_cast<std::size_t>(a)].real());
        rhs(2 * a) = static_cast<double>(nu[static_cast<std::size_t>(a)].imag());
        for (int b = 1; b <= n; ++b) {
            g(2 * a - 1, 2 * b - 1) = 0.5 * (re(a - b) + re(a + b));
            g(2 * a, 2 * b) = 0.5 * (re(a - b) - re(a + b));
            const double cs = 0.5 * (im(a + b) - im(a - b));  // cos a . sin b
            g(2 * a - 1, 2 * b) = cs;
            g(2 * b, 2 * a - 1) = cs;
        }
    }
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& g, const Eigen::VectorXd& rhs) {
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
        if (ldlt.info() != Eigen::Success) throw SolverError("normal equations are singular");
        return ldlt.solve(rhs);
    }
    return llt.solve(rhs);
}

std::vector<double> residuals(const Problem& pr, const TrigPoly& u) {
    const PolyEvaluator ev(u);
    std::vector<double> r(pr.fx.size());
    for (std::size_t q = 0; q < r.size(); ++q) r[q] = pr.fx[q] - ev(pr.rule.x[q]);
    return r;
}

/// (sum w |r|^p)^(1/p), scaled by max |r| so large p neither underflows nor overflows; max |r| for p = inf.
double objective(const Problem& pr, const std::vector<double>& r, double p) {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    if (std::isinf(p) || m == 0.0) return m;
    long double s = 0.0L;
    for (std::size_t q = 0; q < r.size(); ++q) s += pr.rule.w[q] * pow_abs(r[q] / m, p);
    return m * std::pow(static_cast<double>(s), 1.0 / p);
}

double error_of(const Problem& pr, const TrigPoly& u, double p) { return objective(pr, residuals(pr, u), p); }

Eigen::VectorXd l2_solve(const Problem& pr, int n, const std::vector<double>& wt, bool exact = false) {
    Eigen::MatrixXd g;
    Eigen::VectorXd rhs;
    if (exact)
        normal_equations<long double>(pr.rule.x, wt, pr.fx, n, g, rhs);
    else
        normal_equations<double>(pr.rule.x, wt, pr.fx, n, g, rhs);
    return solve_spd(g, rhs);
}

/// Damped IRLS for sum w |r|^p, warm-started at c.
Eigen::VectorXd irls(const Problem& pr, int n, double p, Eigen::VectorXd c, const ApproxOptions& opt, SolverInfo& info) {
    const std::size_t nq = pr.fx.size();
    std::vector<double> wt(nq);
    auto res = residuals(pr, to_poly(c, n));
    double obj = objective(pr, res, p);
    int increases = 0;
    info.converged = false;
    for (int it = 0; it < opt.max_iterations; ++it) {
        double rmax = 0.0;
        for (double v : res) rmax = std::max(rmax, std::abs(v));
        if (rmax == 0.0) {
            info.converged = true;
            break;
        }
        const double eps = std::max(kSmoothing, 1e-14 * rmax);
        for (std::size_t q = 0; q < nq; ++q) {
            // residuals normalized by their max keep |r|^(p-2) representable for large p
            const double t = std::hypot(res[q] / rmax, eps / rmax);
            wt[q] = pr.rule.w[q] * std::max(std::pow(t, p - 2.0), kWeightFloor);
        }
        const Eigen::VectorXd target = l2_solve(pr, n, wt);
        double theta = 0.5;
        Eigen::VectorXd next = c + theta * (target - c);
        auto nres = residuals(pr, to_poly(next, n));
        double nobj = objective(pr, nres, p);
        for (int h = 0; h < 6 && nobj > obj; ++h) {
            theta *= 0.5;
            next = c + theta * (target - c);
            nres = residuals(pr, to_poly(next, n));
            nobj = objective(pr, nres, p);
        }
        increases = nobj > obj * (1.0 + 1e-12) ? increases + 1 : 0;
        if (increases >= kMaxIncreases)
            throw SolverError("IRLS objective increased for " + std::to_string(kMaxIncreases) +
                              " consecutive steps at p=" + std::to_string(p) + ", n=" + std::to_string(n));
        const double step = (next - c).norm() / std::max(next.norm(), 1e-300);
        c = std::move(next);
        res = std::move(nres);
        obj = nobj;
        info.iterations++;
        info.relative_step = step;
        if (step < opt.tolerance) {
            info.converged = true;
            break;
        }
    }
    return c;
}

/// Discrete minimax by Remez exchange on a uniform grid (trig polynomials are a Haar system on the
/// circle, so the best approximation equioscillates on 2n + 2 points).
std::optional<TrigPoly> remez(const FunctionRule& f, int n, const TrigPoly& start, SolverInfo& info) {
    const int m = 2 * n + 1;
    const std::size_t grid = std::max<std::size_t>(8192, next_power_of_two(static_cast<std::size_t>(64 * (n + 1))));
    const PeriodicGrid g(grid);
    std::vector<double> fx(grid);
    for (std::size_t j = 0; j < grid; ++j) fx[j] = f(g.node(j));
    auto residual = [&](const TrigPoly& u) {
        auto v = synthesize_values(u, grid);
        for (std::size_t j = 0; j < grid; ++j) v[j] = fx[j] - v[j];
        return v;
    };
    // one extremum per maximal sign run, circularly
    auto extrema = [&](const std::vector<double>& r) {
        std::vector<std::size_t> out;
        std::size_t s0 = 0;
        while (s0 < grid && (r[s0] == 0.0 || (r[s0] > 0) == (r[(s0 + grid - 1) % grid] > 0))) ++s0;
        if (s0 == grid) s0 = 0;
        std::size_t best = s0;
        for (std::size_t t = 1; t <= grid; ++t) {
            const std::size_t j = (s0 + t) % grid;
            const bool same = (r[j] > 0) == (r[best] > 0);
            if (t == grid || !same) {
                out.push_back(best);
                best = j;
            } else if (std::abs(r[j]) > std::abs(r[best])) {
                best = j;
            }
        }
        return out;
    };
    auto reduce = [&](std::vector<std::size_t> ref, const std::vector<double>& r) {
        if (ref.size() % 2 == 1) {
            // odd count on a circle: first and last runs share a sign
            if (std::abs(r[ref.front()]) < std::abs(r[ref.back()])) ref.erase(ref.begin());
            else ref.pop_back();
        }
        while (ref.size() > static_cast<std::size_t>(m + 1)) {
            std::size_t k = 0;
            for (std::size_t i = 1; i < ref.size(); ++i)
                if (std::abs(r[ref[i]]) < std::abs(r[ref[k]])) k = i;
            const std::size_t sz = ref.size();
            const std::size_t a = (k + sz - 1) % sz, b = (k + 1) % sz;
            const std::size_t drop = std::abs(r[ref[a]]) < std::abs(r[ref[b]]) ? a : b;
            std::vector<std::size_t> next;
            for (std::size_t i = 0; i < sz; ++i)
                if (i != k && i != drop) next.push_back(ref[i]);
            ref = std::move(next);
        }
        std::sort(ref.begin(), ref.end());
        return ref;
    };
    auto r = residual(start);
    auto ref = extrema(r);
    if (ref.size() < static_cast<std::size_t>(m + 1)) {
        ref.clear();
        for (int i = 0; i <= m; ++i) ref.push_back(static_cast<std::size_t>(i) * grid / static_cast<std::size_t>(m + 1));
    } else {
        ref = reduce(ref, r);
    }
    TrigPoly u = start;
    // golden-section polish of a grid extremum of |f - u| inside the neighbouring cells
    auto polish = [&](std::size_t j) {
        const double x0 = g.node(j), h = g.spacing();
        auto val = [&](double x) { return std::abs(f(x) - u(x)); };
        constexpr double kGold = 0.6180339887498949;
        double lo = x0 - h, hi = x0 + h;
        double c = hi - kGold * (hi - lo), d = lo + kGold * (hi - lo);
        double fc = val(c), fd = val(d);
        for (int k = 0; k < 60 && hi - lo > 1e-14 * h; ++k) {
            if (fc > fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - kGold * (hi - lo);
                fc = val(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + kGold * (hi - lo);
                fd = val(d);
            }
        }
        const double xm = 0.5 * (lo + hi);
        return val(xm) > val(x0) ? xm : x0;
    };
    for (int it = 0; it < 200; ++it) {
        Eigen::MatrixXd a(m + 1, m + 1);
        Eigen::VectorXd rhs(m + 1);
        std::vector<double> xs(static_cast<std::size_t>(m + 1));
        for (int i = 0; i <= m; ++i) xs[static_cast<std::size_t>(i)] = polish(ref[static_cast<std::size_t>(i)]);
        for (int i = 0; i <= m; ++i) {
            const double x = xs[static_cast<std::size_t>(i)];
            a(i, 0) = 1.0;
            for (int k = 1; k <= n; ++k) {
                a(i, 2 * k - 1) = std::cos(k * x);
                a(i, 2 * k) = std::sin(k * x);
            }
            a(i, m) = (i % 2 == 0) ? 1.0 : -1.0;
            rhs(i) = f(x);
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        const Eigen::VectorXd sol = lu.solve(rhs);
        if (!sol.allFinite()) return std::nullopt;
        u = to_poly(sol.head(m), n);
        const double level = std::abs(sol(m));
        r = residual(u);
        double rmax = 0.0;
        for (double v : r) rmax = std::max(rmax, std::abs(v));
        for (const double x : xs) rmax = std::max(rmax, std::abs(f(x) - u(x)));
        info.iterations = it + 1;
        info.relative_step = rmax > 0 ? (rmax - level) / rmax : 0.0;
        if (rmax == 0.0 || rmax - level <= 1e-9 * rmax) {
            info.converged = true;
            return u;
        }
        auto ext = extrema(r);
        if (ext.size() < static_cast<std::size_t>(m + 1)) break;
        ref = reduce(ext, r);
    }
    info.converged = false;
    return u;
}

ApproxResult solve(const FunctionRule& f, int n, const LpNorm& nm, const ApproxOptions& opt) {
    if (n < 0) throw InvalidInput("degree must be >= 0");
    const double p = nm.p;
    if (!(p >= 1.0)) throw InvalidInput("p must be in [1, inf]");
    if (auto fp = f.as_poly(); fp && fp->effective_degree() <= n) {
        ApproxResult out;
        out.poly = fp->resized(n);
        out.info.path = "exact-L2";
        return out;
    }
    const Weight w = std::isinf(p) ? Weight::constant() : nm.w;
    const Problem pr = make_problem(f, n, w);
    ApproxResult out;
    Eigen::VectorXd c = l2_solve(pr, n, pr.rule.w, true);
    out.info.iterations = 0;
    if (p == 2.0 && !opt.force_irls) {
        out.info.path = "exact-L2";
    } else if (std::isinf(p)) {
        out.info.path = "minimax-remez";
        if (auto u = remez(f, n, to_poly(c, n), out.info)) {
            out.poly = *u;
            out.error = error_of(make_problem(f, n, w, 4), out.poly, p);
            const double coarse = error_of(pr, out.poly, p);
            out.info.discretization_error = std::abs(out.error - coarse);
            return out;
        }
        out.info.path = "minimax-homotopy";
        // intermediate stages only need a warm start for the next exponent
        ApproxOptions stage = opt;
        stage.tolerance = std::max(opt.tolerance, 1e-4);
        stage.max_iterations = std::min(opt.max_iterations, 40);
        for (double pk = 4.0; pk < 256.0; pk *= 2.0) c = irls(pr, n, pk, c, stage, out.info);
        const int done = out.info.iterations;
        c = irls(pr, n, 256.0, c, opt, out.info);
        out.info.iterations += done;
    } else {
        out.info.path = "IRLS";
        c = irls(pr, n, p, c, opt, out.info);
    }
    out.poly = to_poly(c, n);
    const double coarse = error_of(pr, out.poly, p);
    const Problem fine = make_problem(f, n, w, 4);
    out.error = error_of(fine, out.poly, p);
    out.info.discretization_error = std::abs(out.error - coarse);
    return out;
}

}  // namespace

ApproxResult best_approx(const FunctionRule& f, int n, const LpNorm& nm, const ApproxOptions& opt) {
    return solve(f, n, nm, opt);
}

ApproxResult best_approx(const TrigPoly& f, int n, const LpNorm& nm, const ApproxOptions& opt) {
    return solve(FunctionRule::poly(f), n, nm, opt);
}

std::vector<double> l2_best_errors(const FunctionRule& f, int kmax, const Weight& w) {
    if (kmax < 0) throw InvalidInput("degree must be >= 0");
    const Problem pr = make_problem(f, kmax, w);
    Eigen::MatrixXd g;
    Eigen::VectorXd rhs;
    normal_equations<long double>(pr.rule.x, pr.rule.w, pr.fx, kmax, g, rhs);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw SolverError("Gram matrix is not positive definite");
    const Eigen::VectorXd y = llt.matrixL().solve(rhs);
    const Eigen::VectorXd c = llt.matrixU().solve(y);
    // E_k^2 = E_kmax^2 + energy of the projection coefficients above degree k; no cancellation
    const double ek = error_of(pr, to_poly(c, kmax), 2.0);
    std::vector<double> out(static_cast<std::size_t>(kmax) + 1);
    long double acc = static_cast<long double>(ek) * ek;
    for (int k = kmax; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = std::sqrt(static_cast<double>(acc));
        if (k > 0) {
            acc += static_cast<long double>(y(2 * k - 1)) * y(2 * k - 1);
            acc += static_cast<long double>(y(2 * k)) * y(2 * k);
        }
    }
    return out;
}

TrigPoly fourier_partial_sum(const FunctionRule& f, int n) {
    if (auto p = f.as_poly()) return p->resized(n).truncated(n);
    const NodeRule rule = adaptive_rule(Weight::constant(), f.kinks(), rule_band(f) + n);
    TrigPoly out(n);
    std::vector<long double> a(static_cast<std::size_t>(n) + 1, 0.0L), b(a.size(), 0.0L);
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
        const double wf = rule.w[q] * f(rule.x[q]);
        const cplx step = std::polar(1.0, rule.x[q]);
        cplx e{1.0, 0.0};
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (k % 8 == 0) e = std::polar(1.0, static_cast<double>(k) * rule.x[q]);
            a[k] += wf * e.real();
            b[k] += wf * e.imag();
            e *= step;
        }
    }
    out.set_a0(static_cast<double>(a[0] / kTwoPi));
    for (int k = 1; k <= n; ++k)
        out.set(k, static_cast<double>(a[static_cast<std::size_t>(k)] / kPi),
                static_cast<double>(b[static_cast<std::size_t>(k)] / kPi));
    return out;
}

ApproxResult near_best_vp(const FunctionRule& f, int n, const LpNorm& nm) {
    if (n < 1) throw InvalidInput("n must be >= 1");
    const TrigPoly s = fourier_partial_sum(f, 2 * n - 1);
    ApproxResult out;
    out.poly = apply(OperatorTag::vallee_poussin(n), s);
    out.info.path = "near-best-VP";
    const Weight w = std::isinf(nm.p) ? Weight::constant() : nm.w;
    const PolyEvaluator ev(out.poly);
    const auto g = [&](double x) { return f(x) - ev(x); };
    out.error = accurate_norm(g, nm.p, w, f.kinks(), rule_band(f) + 2 * n);
    return out;
}

ApproxResult near_best_vp(const TrigPoly& f, int n, const LpNorm& nm) {
    if (n < 1) throw InvalidInput("n must be >= 1");
    ApproxResult out;
    out.poly = apply(OperatorTag::vallee_poussin(n), f);
    out.info.path = "near-best-VP";
    out.error = weighted_norm(f - out.poly, nm.p, nm.w);
    return out;
}

std::vector<SimultaneousRow> simultaneous_errors(const FunctionRule& f, int n, int r, const LpNorm& nm) {
    if (r < 0) throw InvalidInput("order must be >= 0");
    if (!f.has_derivative(r)) throw InvalidInput("no derivative rule of order " + std::to_string(r) + " for " + f.name());
    const ApproxResult best = best_approx(f, n, nm);
    const ApproxResult vp = near_best_vp(f, n, nm);
    const FunctionRule fr = f.derivative_rule(r);
    const double en_r = best_approx(fr, n, nm).error;
    const std::size_t grid = std::max<std::size_t>(4096, next_power_of_two(static_cast<std::size_t>(16 * n)));
    const double om = modulus(SampledFunction::from_rule(fr, grid), 1, std::min(1.0, 1.0 / n), nm);
    const Weight w = std::isinf(nm.p) ? Weight::constant() : nm.w;
    const int band = rule_band(f) + 4 * n;
    std::vector<SimultaneousRow> rows;
    for (int k = 0; k <= r; ++k) {
        const FunctionRule fk = f.derivative_rule(k);
        const PolyEvaluator eb(k ? best.poly.derivative(k) : best.poly), ev(k ? vp.poly.derivative(k) : vp.poly);
        SimultaneousRow row;
        row.k = k;
        if (k == 0) {
            row.err_best = best.error;
            row.err_vp = vp.error;
        } else {
            row.err_best = accurate_norm([&](double x) { return fk(x) - eb(x); }, nm.p, w, f.kinks(), band);
            row.err_vp = accurate_norm([&](double x) { return fk(x) - ev(x); }, nm.p, w, f.kinks(), band);
        }
        const double scale = std::pow(static_cast<double>(n), k - r);
        row.bound_best = scale * en_r;
        row.bound_mod = scale * om;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace apx
