#include "apx/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "apx/approx.hpp"
#include "apx/errors.hpp"
#include "apx/operators.hpp"
#include "apx/parallel.hpp"
#include "apx/smoothness.hpp"
#include "gauss.hpp"

namespace apx {

namespace {

constexpr double kViolationTol = 1e-9;
constexpr int kLogLevels = 20;
constexpr std::size_t kTrendPoints = 4;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix(splitmix(seed ^ splitmix(a)) ^ splitmix(b + 0x51ED27ULL));
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string case_label(const NormCase& c) {
    std::string s = "p=" + fmt(c.p);
    if (c.q) s += ",q=" + fmt(*c.q);
    return s + ",w=" + c.weight.id;
}

LpNorm lp(const NormCase& c) { return LpNorm{c.p, c.weight.w}; }
LpNorm lq(const NormCase& c) { return LpNorm{*c.q, c.weight.w}; }

double norm(const TrigPoly& u, const LpNorm& nm) { return weighted_norm(u, nm.p, nm.w); }

double rule_norm(const FunctionRule& f, const LpNorm& nm) {
    return accurate_norm([&](double x) { return f(x); }, nm.p, nm.w, f.kinks(), 64);
}

/// lhs/rhs with both sides below `floor` treated as an exact zero.
double safe_ratio(double lhs, double rhs, double floor = 0.0) {
    if (lhs <= floor) return 0.0;
    if (rhs <= floor) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

struct PowerFit {
    double log_a = 0.0;  // log A
    double slope = 0.0;  // exponent a in A x^a
    bool ok = false;
};

PowerFit fit_power(const std::vector<double>& xs, const std::vector<double>& ys) {
    PowerFit f;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] > 0 && ys[i] > 0 && std::isfinite(ys[i])) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(ys[i]));
        }
    }
    if (lx.size() < 2) return f;
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0) return f;
    f.slope = sxy / sxx;
    f.log_a = my - f.slope * mx;
    f.ok = true;
    return f;
}

/// int_0^delta g(t) dt/t: midpoint rule in log t on delta 2^-j, j = 0..20, plus a power-law tail.
struct LogIntegral {
    double truncated = 0.0;
    double extrapolated = 0.0;
};

LogIntegral log_integral(double delta, const std::function<double(double)>& g) {
    std::vector<double> ts(kLogLevels), gs(kLogLevels);
    LogIntegral out;
    for (int j = 0; j < kLogLevels; ++j) {
        ts[j] = delta * std::pow(2.0, -(j + 0.5));
        gs[j] = g(ts[j]);
        out.truncated += std::log(2.0) * gs[j];
    }
    const std::vector<double> tx(ts.end() - 4, ts.end()), ty(gs.end() - 4, gs.end());
    double tail = 0.0;
    if (std::all_of(ty.begin(), ty.end(), [](double v) { return v == 0.0; })) {
        tail = 0.0;
    } else {
        const PowerFit pf = fit_power(tx, ty);
        const double tmin = delta * std::pow(2.0, -kLogLevels);
        tail = (pf.ok && pf.slope > 0) ? std::exp(pf.log_a + pf.slope * std::log(tmin)) / pf.slope
                                       : std::numeric_limits<double>::infinity();
    }
    out.extrapolated = out.truncated + tail;
    return out;
}

/// E_k(f)_{p,gamma} for k = 0..K plus a power-law model of the tail.
struct ErrorSeries {
    std::vector<double> e;
    PowerFit tail;  // E_k ~ exp(log_a) k^slope beyond K
    bool vanishing = false;
};

std::vector<int> geometric_degrees(int kmax) {
    std::set<int> s{0, 1, 2, 3};
    for (int k = 4; k <= kmax; k *= 2) {
        s.insert(k);
        if (k + k / 2 <= kmax) s.insert(k + k / 2);
    }
    s.insert(kmax);
    return {s.begin(), s.end()};
}

ErrorSeries best_error_series(const FunctionRule& f, int kmax, const LpNorm& nm) {
    ErrorSeries out;
    std::vector<double> ks, vals;
    if (nm.p == 2.0) {
        out.e = l2_best_errors(f, kmax, nm.w);
        for (int k = std::max(1, kmax / 4); k <= kmax; ++k) {
            ks.push_back(k);
            vals.push_back(out.e[static_cast<std::size_t>(k)]);
        }
    } else {
        const auto deg = geometric_degrees(kmax);
        std::vector<double> ev(deg.size());
        for (std::size_t i = 0; i < deg.size(); ++i) ev[i] = best_approx(f, deg[i], nm).error;
        for (std::size_t i = 1; i < ev.size(); ++i) ev[i] = std::min(ev[i], ev[i - 1]);
        out.e.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
        for (std::size_t i = 0; i + 1 < deg.size(); ++i) {
            const int a = deg[i], b = deg[i + 1];
            for (int k = a; k <= b; ++k) {
                double v;
                if (k == a) v = ev[i];
                else if (k == b) v = ev[i + 1];
                else if (a >= 1 && ev[i] > 0 && ev[i + 1] > 0) {
                    const double s = std::log(static_cast<double>(k) / a) / std::log(static_cast<double>(b) / a);
                    v = std::exp((1 - s) * std::log(ev[i]) + s * std::log(ev[i + 1]));
                } else {
                    const double s = static_cast<double>(k - a) / (b - a);
                    v = (1 - s) * ev[i] + s * ev[i + 1];
                }
                out.e[static_cast<std::size_t>(k)] = v;
            }
        }
        for (std::size_t i = 0; i < deg.size(); ++i) {
            if (deg[i] >= std::max(1, kmax / 8)) {
                ks.push_back(deg[i]);
                vals.push_back(ev[i]);
            }
        }
    }
    const double scale = std::max(out.e[0], 1e-300);
    out.vanishing = out.e.back() <= 1e-13 * scale;
    if (!out.vanishing) out.tail = fit_power(ks, vals);
    return out;
}

/// sum_{k=a}^inf k^s E_k^qs with the tail beyond K from the power model; {truncated, extrapolated}.
std::pair<double, double> weighted_error_sum(const ErrorSeries& es, int a, double s, double qs) {
    const int kmax = static_cast<int>(es.e.size()) - 1;
    double sum = 0.0;
    for (int k = std::max(a, 1); k <= kmax; ++k) sum += std::pow(k, s) * std::pow(es.e[static_cast<std::size_t>(k)], qs);
    double tail = 0.0;
    if (!es.vanishing) {
        const double c = s + es.tail.slope * qs;
        const double x0 = std::max<double>(a, kmax) + 0.5;
        tail = (es.tail.ok && c < -1.0) ? std::exp(qs * es.tail.log_a) * std::pow(x0, c + 1.0) / (-c - 1.0)
                                        : std::numeric_limits<double>::infinity();
    }
    return {sum, sum + tail};
}

/// int_1^inf v^s E_v^qs dv with E_v := E_floor(v).
std::pair<double, double> weighted_error_integral(const ErrorSeries& es, double s, double qs) {
    const int kmax = static_cast<int>(es.e.size()) - 1;
    double sum = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        const double w = (std::pow(k + 1.0, s + 1.0) - std::pow(k, s + 1.0)) / (s + 1.0);
        sum += w * std::pow(es.e[static_cast<std::size_t>(k)], qs);
    }
    double tail = 0.0;
    if (!es.vanishing) {
        const double c = s + es.tail.slope * qs;
        tail = (es.tail.ok && c < -1.0) ? std::exp(qs * es.tail.log_a) * std::pow(kmax + 1.0, c + 1.0) / (-c - 1.0)
                                        : std::numeric_limits<double>::infinity();
    }
    return {sum, sum + tail};
}

/// Minimum over r in {1 + (p-1) j/8} with gamma in A_r of constant_for(r, [gamma]_r); {value, r}.
std::pair<double, double> r_aux_best(const Weight& w, double p, const std::function<double(double, double)>& constant_for) {
    double best = std::numeric_limits<double>::infinity(), arg = 0.0;
    for (int j = 1; j <= 7; ++j) {
        const double r = 1.0 + (p - 1.0) * j / 8.0;
        const ApEstimate a = muckenhoupt_constant(w, r);
        if (!a.in_class || !std::isfinite(a.value)) continue;
        const double v = constant_for(r, a.value);
        if (v < best) {
            best = v;
            arg = r;
        }
    }
    return {best, arg};
}

}  // namespace

// ------------------------------------------------------------------ public helpers

const std::vector<std::string>& check_ids() {
    static const std::vector<std::string> ids = {
        "nikolskii",       "jackson",          "jackson_derivative", "bernstein",          "stechkin_inverse",
        "marchaud",        "ulyanov_modulus",  "ulyanov_best_approx", "realization_equiv", "kfunctional_equiv",
        "operator_uniform", "modulus_props",   "upsilon_derivative",     "jackson_operator",
    };
    return ids;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::bounded: return "bounded";
        case Verdict::bounded_by_constant: return "bounded-by-explicit-constant";
        case Verdict::violated: return "violated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

double ConstantsTable::get(const std::string& name) const {
    for (const auto& e : entries) {
        if (e.name == name) return e.value;
    }
    throw InvalidInput("unknown constant " + name);
}

ConstantsTable explicit_constants(const Weight& w, double p, int r) {
    if (!(p >= 1.0)) throw InvalidInput("p must be in [1, inf]");
    if (r < 1) throw InvalidInput("r must be >= 1");
    ConstantsTable t;
    t.p = p;
    t.r = r;
    const double pi = kPi;
    const double c11 = 2.0 * pi * pi;
    double c1, c2, c9, c10, c12;
    std::string f1, f2, f9, f10, f12;
    double l1 = 0.0;
    if (std::isinf(p)) {
        if (!w.is_constant()) throw NotInClassError("p = inf requires gamma == const");
        l1 = weight_l1_norm(w);
        c1 = 1.0, c2 = 1.0, c9 = kTwoPi, c10 = pi, c12 = pi;
        f1 = "1", f2 = "1", f9 = "2 pi", f10 = "pi", f12 = "pi";
    } else if (p == 1.0) {
        const ClassReport rep = classify_weight(w, 1.0);
        if (!rep.in_as || !rep.s1) throw NotInClassError("weight not in S_1: " + rep.summary);
        const double g1 = rep.s1->gamma1, c8 = rep.s1->c8;
        l1 = rep.l1_norm;
        t.inputs["[gamma]_1"] = g1;
        t.inputs["C8"] = c8;
        c1 = 2.0 * g1 * c8;
        c2 = 36.0 * pi * g1 / c8;
        c9 = 1.0 / c8;
        c10 = l1 * std::pow(kTwoPi, 4) * std::sqrt(2.0) / 3.0 / c8 + 162.0 * g1 / c8;
        c12 = l1 * c11 / c8 + 324.0 * g1 / c8;
        f1 = "2 [gamma]_1 C8";
        f2 = "36 pi C8^-1 [gamma]_1";
        f9 = "C8^-1";
        f10 = "||gamma||_1 (2 pi)^4 sqrt(2)/3 C8^-1 + 162 [gamma]_1 C8^-1";
        f12 = "||gamma||_1 C11 C8^-1 + 324 [gamma]_1 C8^-1";
    } else {
        const ClassReport rep = classify_weight(w, p);
        if (!rep.in_as || !rep.ap) throw NotInClassError("weight not in A_p: " + rep.summary);
        const double gp = rep.ap->value;
        l1 = rep.l1_norm;
        t.inputs["[gamma]_p"] = gp;
        const double gpp = std::pow(gp, 1.0 / p);
        c1 = std::pow(2.0, 1.0 / p) * kTwoPi * gpp;
        c2 = 4.0 * pi * std::pow(3.0, 1.0 / p + 1.0) * gpp;
        c9 = gpp * std::pow(l1, -1.0 / p);
        const auto b10 = r_aux_best(w, p, [&](double ra, double g) {
            return 2.0 * std::pow(9.0, 1.0 + 1.0 / p) * gpp +
                   std::pow(kTwoPi, 4) * std::sqrt(2.0) / 3.0 * std::pow(kTwoPi, 1.0 - ra / p) *
                       std::pow(l1, (p - 1.0) / p) * g;
        });
        const auto b12 = r_aux_best(w, p, [&](double ra, double g) {
            return std::pow(18.0, 1.0 + 1.0 / p) * gpp +
                   c11 * std::pow(kTwoPi, 1.0 - ra / p) * std::pow(l1, (p - 1.0) / p) * g;
        });
        c10 = b10.first;
        c12 = b12.first;
        const double r12 = b12.second;
        if (!std::isfinite(c10) || !std::isfinite(c12)) throw NotInClassError("no auxiliary r in (1, p) with gamma in A_r");
        t.inputs["r_aux"] = r12;
        f1 = "2^(1/p) 2 pi [gamma]_p^(1/p)";
        f2 = "4 pi 3^(1/p+1) [gamma]_p^(1/p)";
        f9 = "[gamma]_p^(1/p) ||gamma||_1^(-1/p)";
        f10 = "2 9^(1+1/p) [gamma]_p^(1/p) + ((2 pi)^4 sqrt(2)/3) (2 pi)^(1-r'/p) ||gamma||_1^((p-1)/p) [gamma]_r'";
        f12 = "18^(1+1/p) [gamma]_p^(1/p) + C11 (2 pi)^(1-r'/p) ||gamma||_1^((p-1)/p) [gamma]_r'";
    }
    t.inputs["||gamma||_1"] = l1;
    const double rr = r;
    const double c13 = std::pow(c1, rr) * std::pow(1.0 + c9 * l1 / kTwoPi, rr);
    const double c14 = (1.0 + 3.0 * c12) * c13;
    const double c15 = c13 * (1.0 + 3.0 * c12 + 3.0 * std::pow(2.0, 2.0 * rr) * std::pow(c12, rr + 1.0));
    double geo = 0.0;
    for (int j = 0; j < r; ++j) geo += std::pow(c1, j);
    const double c18 = 72.0 * c2 * geo;
    const double c19 = 2.0 * (1.0 + 36.0 * c2 + 144.0 * c2 * std::log(2.0));
    const double cim1 = 72.0 * c2 + c19 * c1 + 72.0 * c10 * c2;
    t.entries = {
        {"C1", c1, f1},
        {"C2", c2, f2},
        {"C9", c9, f9},
        {"C10", c10, f10},
        {"C11", c11, "2 pi^2"},
        {"C12", c12, f12},
        {"C13", c13, "C1^r (1 + C9 ||gamma||_1/(2 pi))^r"},
        {"C14", c14, "(1 + 3 C12) C13"},
        {"C15", c15, "C13 (1 + 3 C12 + 3 2^(2k) C12^(r+1)), k = r"},
        {"C18", c18, "72 C2 sum_{j<r} C1^j"},
        {"C19", c19, "2 (1 + 36 C2 + 144 C2 ln 2)"},
        {"jackson_operator", cim1, "72 C2 + 2 (1 + 36 C2 + 144 C2 ln 2) C1 + 72 C10 C2"},
        {"bernstein", std::pow(2.0 * c12, rr), "2^r C12^r"},
        {"near_best_vp", 1.0 + 3.0 * c12, "1 + 3 C12"},
        {"order_reduction", std::pow(1.0 + c1, rr), "(1 + C1)^r"},
        {"smooth_bound", std::pow(c1 / 2.0, rr), "2^-r C1^r"},
        {"r_proximity", 72.0 * c2, "72 C2"},
        {"dilation", 4.0 * std::pow(1.0 + c1, rr) * std::pow(std::max(c18, c19), rr),
         "4 (1 + C1)^r max(C18^r, C19^r), times (1 + floor(lambda))^r"},
    };
    return t;
}

DecayFit estimate_decay_exponent(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 6) throw InvalidInput("decay fit needs at least six points");
    std::vector<double> xs, ys;
    for (const auto& [n, v] : series) {
        if (!(n > 0) || !(v > 0) || !std::isfinite(v)) throw InvalidInput("decay fit needs positive values");
        xs.push_back(n);
        ys.push_back(v);
    }
    const PowerFit f = fit_power(xs, ys);
    if (!f.ok) throw InvalidInput("decay fit needs distinct abscissae");
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = std::log(ys[i]) - (f.log_a + f.slope * std::log(xs[i]));
        ss += d * d;
    }
    return {-f.slope, std::sqrt(ss / static_cast<double>(xs.size()))};
}

TrigPoly random_poly(int degree, std::uint64_t seed, bool zero_mean) {
    if (degree < 0) throw InvalidInput("degree must be >= 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    TrigPoly u(degree);
    const double a0 = nd(rng);
    u.set_a0(zero_mean ? 0.0 : a0);
    for (int k = 1; k <= degree; ++k) {
        const double a = nd(rng);
        const double b = nd(rng);
        u.set(k, a, b);
    }
    return u;
}

TrigPoly surrogate(const FunctionRule& f, int resolution) {
    if (auto p = f.as_poly()) return *p;
    if (resolution < 16 || !is_power_of_two(static_cast<std::size_t>(resolution)))
        throw InvalidInput("resolution must be a power of two >= 16");
    return analyze(SampledFunction::from_rule(f, static_cast<std::size_t>(resolution)));
}

std::vector<NamedFunction> default_functions(std::uint64_t seed, int random_count, int degree) {
    std::vector<NamedFunction> out = {
        {"cos1", FunctionRule::cos_mode(1)},
        {"cos4", FunctionRule::cos_mode(4)},
        {"abs_sin", FunctionRule::abs_sin_pow(1.0)},
        {"abs_sin_2.5", FunctionRule::abs_sin_pow(2.5)},
        {"sawtooth_vp16", FunctionRule::sawtooth_vp(16)},
        {"exp_sin", FunctionRule::exp_sin()},
    };
    for (int i = 0; i < random_count; ++i) {
        const std::string id = "random" + std::to_string(i);
        out.push_back({id, FunctionRule::poly(random_poly(degree, derive_seed(seed, 17, i)), id)});
    }
    return out;
}

// ------------------------------------------------------------------ verdicts

void finalize_report(CheckReport& rep, double slope_tolerance, bool two_sided) {
    rep.series.clear();
    rep.max_ratio = 0.0;
    rep.min_ratio = rep.rows.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    rep.slope = std::numeric_limits<double>::quiet_NaN();
    bool violated = false, unresolved = false, all_constant = !rep.rows.empty();
    std::optional<double> common;
    bool mixed = false;

    std::vector<std::string> order;
    std::map<std::string, std::map<double, double>> by_x;  // per series: x -> max ratio
    std::map<std::string, SeriesSummary> sums;
    for (const auto& row : rep.rows) {
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
        rep.min_ratio = std::min(rep.min_ratio, row.ratio);
        if (row.constant) {
            if (!(row.ratio <= *row.constant * (1.0 + kViolationTol))) violated = true;
            if (!common) common = row.constant;
            else if (*common != *row.constant) mixed = true;
        } else {
            all_constant = false;
            if (!std::isfinite(row.ratio)) unresolved = true;
        }
        if (!sums.count(row.series)) {
            order.push_back(row.series);
            sums[row.series] = SeriesSummary{row.series, std::numeric_limits<double>::quiet_NaN(), row.ratio, row.ratio, 0};
        }
        auto& s = sums[row.series];
        s.max_ratio = std::max(s.max_ratio, row.ratio);
        s.min_ratio = std::min(s.min_ratio, row.ratio);
        ++s.points;
        if (std::isfinite(row.x) && std::isfinite(row.ratio) && row.ratio > 0) {
            auto& m = by_x[row.series];
            auto it = m.find(row.x);
            if (it == m.end()) m[row.x] = row.ratio;
            else it->second = std::max(it->second, row.ratio);
        }
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& id : order) {
        auto s = sums[id];
        const auto it = by_x.find(id);
        if (it != by_x.end() && it->second.size() >= 3) {
            // trend over the last kTrendPoints abscissae (asymptotic growth, not the pre-asymptotic transient)
            std::vector<double> xs, ys;
            for (auto [x, r] : it->second) {
                xs.push_back(x);
                ys.push_back(r);
            }
            if (xs.size() > kTrendPoints) {
                xs.erase(xs.begin(), xs.end() - kTrendPoints);
                ys.erase(ys.begin(), ys.end() - kTrendPoints);
            }
            const PowerFit f = fit_power(xs, ys);
            if (f.ok) {
                s.slope = f.slope;
                const double key = two_sided ? std::abs(f.slope) : f.slope;
                if (key > slope_tolerance) unresolved = true;
                if (key > worst) {
                    worst = key;
                    rep.slope = f.slope;
                }
            }
        }
        rep.series.push_back(s);
    }
    if (common && !mixed) rep.explicit_constant = common;
    if (violated) rep.verdict = Verdict::violated;
    else if (unresolved) rep.verdict = Verdict::inconclusive;
    else rep.verdict = all_constant ? Verdict::bounded_by_constant : Verdict::bounded;
}

namespace {

using Rows = std::vector<CheckRow>;

Rows run_tasks(std::size_t n, const std::function<Rows(std::size_t)>& f) {
    std::vector<Rows> parts(n);
    parallel_for(n, [&](std::size_t i) { parts[i] = f(i); });
    Rows out;
    for (auto& p : parts) {
        for (auto& r : p) out.push_back(std::move(r));
    }
    return out;
}

std::vector<TrigPoly> surrogates(const std::vector<NamedFunction>& fs, int resolution) {
    std::vector<TrigPoly> out(fs.size());
    parallel_for(fs.size(), [&](std::size_t i) { out[i] = surrogate(fs[i].rule, resolution); });
    return out;
}

template <class T>
std::vector<T> or_default(const std::vector<T>& v, std::vector<T> d) {
    return v.empty() ? d : v;
}

const std::vector<int> kDefaultN = {8, 16, 32, 64, 128, 256};
const std::vector<double> kDefaultV = {0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};

std::vector<NamedFunction> functions_or(const CheckSpec& s, std::vector<std::string> ids) {
    if (!s.functions.empty()) return s.functions;
    const auto all = default_functions(s.seed);
    std::vector<NamedFunction> out;
    for (const auto& id : ids) {
        for (const auto& f : all) {
            if (f.id == id) out.push_back(f);
        }
    }
    return out;
}

std::vector<NormCase> norms_or(const CheckSpec& s) {
    if (!s.norms.empty()) return s.norms;
    return {NormCase{}};
}

/// Index triples over (function, norm case, order).
struct Triple {
    std::size_t f, c;
    int r;
};

std::vector<Triple> triples(std::size_t nf, std::size_t nc, const std::vector<int>& orders) {
    std::vector<Triple> t;
    for (std::size_t f = 0; f < nf; ++f) {
        for (std::size_t c = 0; c < nc; ++c) {
            for (int r : orders) t.push_back({f, c, r});
        }
    }
    return t;
}

std::string series_id(const std::string& f, const NormCase& c, const std::string& order) {
    return f + "|" + case_label(c) + "|" + order;
}

void add_decay_extras(CheckReport& rep, const std::string& prefix, bool use_lhs) {
    std::map<std::string, std::vector<std::pair<double, double>>> pts;
    for (const auto& r : rep.rows) {
        const double v = use_lhs ? r.lhs : r.rhs;
        if (std::isfinite(r.x) && v > 0) pts[r.series].emplace_back(r.x, v);
    }
    for (auto& [id, p] : pts) {
        if (p.size() >= 6) rep.extras[prefix + ":" + id] = estimate_decay_exponent(p).beta;
    }
}

/// Cached Omega_k(f, t) over t for one (surrogate, norm).
class ModulusCache {
public:
    ModulusCache(const TrigPoly& f, int k, LpNorm nm) : f_(f), k_(k), nm_(std::move(nm)) {}
    double operator()(double t) {
        auto it = memo_.find(t);
        if (it != memo_.end()) return it->second;
        const double v = modulus(f_, k_, t, nm_);
        memo_[t] = v;
        return v;
    }

private:
    const TrigPoly& f_;
    int k_;
    LpNorm nm_;
    std::map<double, double> memo_;
};

// ------------------------------------------------------------------ checks

Rows check_nikolskii(const CheckSpec& s, CheckReport& rep) {
    const auto cases = norms_or(s);
    for (const auto& c : cases) {
        if (!c.q) throw InvalidInput("nikolskii needs q");
        if (*c.q > c.p) throw InvalidInput("nikolskii requires q <= p");
    }
    const auto ns = or_default(s.n, {4, 8, 16, 32, 64, 128, 256});
    rep.notes.push_back("random zero-mean polynomials of degree n, " + std::to_string(s.samples) + " per degree");
    std::vector<std::pair<std::size_t, int>> pts;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        for (int n : ns) pts.emplace_back(c, n);
    }
    return run_tasks(pts.size(), [&](std::size_t i) {
        const auto& c = cases[pts[i].first];
        const int n = pts[i].second;
        if (n < 1) throw InvalidInput("n must be >= 1");
        Rows rows;
        for (int j = 0; j < s.samples; ++j) {
            const TrigPoly u = random_poly(n, derive_seed(s.seed, 100 + static_cast<std::uint64_t>(n), j), true);
            CheckRow r;
            r.lhs = norm(u, lp(c));
            r.rhs = std::pow(n, 1.0 / *c.q - 1.0 / c.p) * norm(u, lq(c));
            r.ratio = safe_ratio(r.lhs, r.rhs);
            r.params = {{"weight", c.weight.id}, {"p", c.p}, {"q", *c.q}, {"n", double(n)}, {"sample", double(j)}};
            r.series = case_label(c);
            r.x = n;
            rows.push_back(std::move(r));
        }
        return rows;
    });
}

Rows check_jackson(const CheckSpec& s, CheckReport&) {
    const auto fs = functions_or(s, {"abs_sin", "abs_sin_2.5"});
    const auto cases = norms_or(s);
    const auto ns = or_default(s.n, kDefaultN);
    const auto sur = surrogates(fs, s.resolution);
    const auto tr = triples(fs.size(), cases.size(), or_default(s.orders, {1, 2}));
    return run_tasks(tr.size(), [&](std::size_t i) {
        const auto& [fi, ci, r] = tr[i];
        const auto& c = cases[ci];
        const double floor = 1e-13 * norm(sur[fi], lp(c));
        Rows rows;
        for (int n : ns) {
            CheckRow row;
            row.lhs = best_approx(fs[fi].rule, n, lp(c)).error;
            row.rhs = modulus(sur[fi], r, 1.0 / n, lp(c));
            row.ratio = safe_ratio(row.lhs, row.rhs, floor);
            row.params = {{"function", fs[fi].id}, {"weight", c.weight.id}, {"p", c.p}, {"r", double(r)}, {"n", double(n)}};
            row.series = series_id(fs[fi].id, c, "r=" + std::to_string(r));
            row.x = n;
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

Rows check_jackson_derivative(const CheckSpec& s, CheckReport& rep) {
    auto fs = functions_or(s, {"abs_sin_2.5", "exp_sin"});
    const auto cases = norms_or(s);
    const auto ns = or_default(s.n, kDefaultN);
    const auto orders = or_default(s.orders, {1, 2});
    const int k = s.j;
    std::vector<Triple> tr;
    for (const auto& t : triples(fs.size(), cases.size(), orders)) {
        if (fs[t.f].rule.has_derivative(t.r)) tr.push_back(t);
        else if (t.c == 0) rep.notes.push_back("skipped " + fs[t.f].id + " for r=" + std::to_string(t.r) + ": no derivative rule");
    }
    return run_tasks(tr.size(), [&](std::size_t i) {
        const auto& [fi, ci, r] = tr[i];
        const auto& c = cases[ci];
        const TrigPoly d = surrogate(fs[fi].rule.derivative_rule(r), s.resolution);
        const double floor = 1e-13 * norm(surrogate(fs[fi].rule, s.resolution), lp(c));
        Rows rows;
        for (int n : ns) {
            CheckRow row;
            row.lhs = best_approx(fs[fi].rule, n, lp(c)).error;
            row.rhs = std::pow(n, -r) * modulus(d, k, 1.0 / n, lp(c));
            row.ratio = safe_ratio(row.lhs, row.rhs, floor);
            row.params = {{"function", fs[fi].id}, {"weight", c.weight.id}, {"p", c.p}, {"r", double(r)},
                          {"k", double(k)},        {"n", double(n)}};
            row.series = series_id(fs[fi].id, c, "r=" + std::to_string(r));
            row.x = n;
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

Rows check_bernstein(const CheckSpec& s, CheckReport& rep) {
    const auto cases = norms_or(s);
    const auto ns = or_default(s.n, {4, 8, 16, 32, 64, 128});
    const auto orders = or_default(s.orders, {1, 2});
    struct Pt {
        std::size_t c;
        int r, n;
        double k;
    };
    std::vector<Pt> pts;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        for (int r : orders) {
            const double k = explicit_constants(cases[c].weight.w, cases[c].p, r).get("bernstein");
            for (int n : ns) pts.push_back({c, r, n, k});
        }
    }
    rep.notes.push_back("constant 2^r C12^r");
    return run_tasks(pts.size(), [&](std::size_t i) {
        const auto& pt = pts[i];
        const auto& c = cases[pt.c];
        Rows rows;
        for (int j = 0; j < s.samples; ++j) {
            const TrigPoly u = random_poly(pt.n, derive_seed(s.seed, 2000 + static_cast<std::uint64_t>(pt.n), j));
            CheckRow row;
            row.lhs = norm(u.derivative(pt.r), lp(c));
            row.rhs = std::pow(pt.n, pt.r) * norm(u, lp(c));
            row.ratio = safe_ratio(row.lhs, row.rhs);
            row.constant = pt.k;
            row.params = {{"weight", c.weight.id}, {"p", c.p}, {"r", double(pt.r)}, {"n", double(pt.n)}, {"sample", double(j)}};
            row.series = case_label(c) + "|r=" + std::to_string(pt.r);
            row.x = pt.n;
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

Rows check_stechkin(const CheckSpec& s, CheckReport&) {
    const auto fs = functions_or(s, {"abs_sin", "abs_sin_2.5"});
    const auto cases = norms_or(s);
    const auto ns = or_default(s.n, kDefaultN);
    const auto orders = or_default(s.orders, {1, 2});
    const int nmax = *std::max_element(ns.begin(), ns.end());
    const auto sur = surrogates(fs, s.resolution);
    const auto tr = triples(fs.size(), cases.size(), {0});
    return run_tasks(tr.size(), [&](std::size_t i) {
        const auto& [fi, ci, unused] = tr[i];
        (void)unused;
        const auto& c = cases[ci];
        const ErrorSeries es = best_error_series(fs[fi].rule, nmax, lp(c));
        const double floor = 1e-13 * norm(sur[fi], lp(c));
        Rows rows;
        for (int k : orders) {
            for (int n : ns) {
                double sum = 0.0;
                for (int nu = 0; nu <= n; ++nu) sum += std::pow(nu + 1.0, k - 1) * es.e[static_cast<std::size_t>(nu)];
                CheckRow row;
                row.lhs = modulus(sur[fi], k, 1.0 / n, lp(c));
                row.rhs = std::pow(n, -k) * sum;
                row.ratio = safe_ratio(row.lhs, row.rhs, floor);
                row.params = {{"function", fs[fi].id}, {"weight", c.weight.id}, {"p", c.p}, {"k", double(k)}, {"n", double(n)}};
                row.series = series_id(fs[fi].id, c, "k=" + std::to_string(k));
                row.x = n;
                rows.push_back(std::move(row));
            }
        }
        return rows;
    });
}

Rows check_marchaud(const CheckSpec& s, CheckReport& rep) {
    const auto fs = functions_or(s, {"abs_sin", "abs_sin_2.5"});
    const auto cases = norms_or(s);
    const auto ts = or_default(s.v, kDefaultV);
    for (double t : ts) {
        if (!(t > 0.0 && t < 0.5)) throw InvalidInput("marchaud requires 0 < t < 1/2");
    }
    const auto sur = surrogates(fs, s.resolution);
    const auto tr = triples(fs.size(), cases.size(), or_default(s.orders, {1}));
    rep.notes.push_back("rhs = t^k int_t^1 Omega_{k+1}(f,u) u^{-k-1} du, 8-point Gauss panels of width ln2/2 in log u");
    const auto& gl = detail::gauss_legendre(8);
    const double h0 = 0.5 * std::log(2.0);
    return run_tasks(tr.size(), [&](std::size_t i) {
        const auto& [fi, ci, k] = tr[i];
        const auto& c = cases[ci];
        ModulusCache om(sur[fi], k + 1, lp(c));
        const double floor = 1e-13 * norm(sur[fi], lp(c));
        Rows rows;
        for (double t : ts) {
            const double a = std::log(t);
            double integral = 0.0;
            double hi = 0.0;
            while (hi > a + 1e-14) {
                const double lo = std::max(a, std::ceil(hi / h0 - 1.0 - 1e-12) * h0);
                for (std::size_t q = 0; q < gl.x.size(); ++q) {
                    const double sv = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[q];
                    integral += 0.5 * (hi - lo) * gl.w[q] * om(std::exp(sv)) * std::exp(-k * sv);
                }
                hi = lo;
            }
            CheckRow row;
            row.lhs = modulus(sur[fi], k, t, lp(c));
            row.rhs = std::pow(t, k) * integral;
            row.ratio = safe_ratio(row.lhs, row.rhs, floor);
            row.params = {{"function", fs[fi].id}, {"weight", c.weight.id}, {"p", c.p}, {"k", double(k)}, {"t", t}};
            row.series = series_id(fs[fi].id, c, "k=" + std::to_string(k));
            row.x = 1.0 / t;
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

void require_ulyanov_case(const NormCase& c) {
    if (!c.q) throw InvalidInput("Ul'yanov checks need q");
    (void)NormParams::make(c.p, c.q);
    (void)explicit_constants(c.weight.w, c.p, 1);
}

Rows check_ulyanov_modulus(const CheckSpec& s, CheckReport& rep) {
    const auto fs = functions_or(s, {"abs_sin", "abs_sin_2.5"});
    const auto cases = norms_or(s);
    for (const auto& c : cases) require_ulyanov_case(c);
    const auto ds = or_default(s.v, kDefaultV);
    for (double d : ds) {
        if (!(d > 0.0 && d <= 1.0)) throw InvalidInput("delta must be in (0, 1]");
    }
    const auto sur = surrogates(fs, s.resolution);
    const auto tr = triples(fs.size(), cases.size(), or_default(s.orders, {1}));
    rep.notes.push_back("t-integral: midpoint rule in log t on delta 2^-j (j = 0..20) plus power-law tail from the last 4 points");
    Rows rows = run_tasks(tr.size(), [&](std::size_t i) {
        const auto& [fi, ci, k] = tr[i];
        const auto& c = cases[ci];
        const NormParams np = NormParams::make(c.p, c.q);
        ModulusCache om(sur[fi], k, lp(c));
        const double floor = 1e-13 * norm(sur[fi], lp(c));
        Rows out;
        for (double d : ds) {
            const LogIntegral li = log_integral(d, [&](double t) { return std::pow(std::pow(t, -np.theta) * om(t), np.q_star); });
            CheckRow row;
            row.lhs = modulus(sur[fi], k, d, lq(c));
            const double tr_rhs = std::pow(li.truncated, 1.0 / np.q_star);
            row.rhs = std::pow(li.extrapolated, 1.0 / np.q_star);
            row.ratio = safe_ratio(row.lhs, row.rhs, floor);
            row.params = {{"function", fs[fi].id}, {"weight", c.weight.id}, {"p", c.p},           {"q", *c.q},
                          {"k", double(k)},        {"delta", d},           {"q_star", np.q_star}, {"rhs_truncated", tr_rhs},
                          {"rhs_extrapolated", row.rhs}};
            row.series = series_id(fs[fi].id, c, "k=" + std::to_string(k));
            row.x = 1.0 / d;
            out.push_back(std::move(row));
        }
        return out;
    });
    double gap = 0.0;
    for (const auto& r : rows) {
        const double tr_rhs = std::get<double>(r.params[7].second);
        if (r.rhs > 0) gap = std::max(gap, std::abs(r.rhs - tr_rhs) / r.rhs);
    }
    rep.extras["max_tail_gap"] = gap;
    return rows;
}

Rows check_ulyanov_best_approx(const CheckSpec& s, CheckReport& rep) {
    const auto fs = functions_or(s, {"abs_sin", "abs_sin_2.5"});
    const auto cases = norms_or(s);
    for (const auto& c : cases) require_ulyanov_case(c);
    const auto ns = or_default(s.n, {4, 8, 16, 32});
    const int j = s.j;
    const auto sur = surrogates(fs, s.resolution);
    const auto tr = triples(fs.size(), cases.size(), {0});
    rep.notes.push_back("primary q_* = q for 1 < p < inf and q < inf, 1 if q = inf or p = 1; the alternative q* is recorded as extra series");
    rep.notes.push_back("E_k sums: k <= 1024 (p = 2) or k <= 256 on a geometric set (p != 2), power-law tail beyond");
    Rows rows = run_tasks(tr.size(), [&](std::size_t i) {
        const auto& [fi, ci, unused] = tr[i];
        (void)unused;
        const auto& c = cases[ci];
        const auto& f = fs[fi];
        const NormParams np = NormParams::make(c.p, c.q);
        const int kmax = c.p == 2.0 ? 1024 : 256;
        const ErrorSeries es = best_error_series(f.rule, kmax, lp(c));
        const double fp = rule_norm(f.rule, lp(c));
        const double fq = rule_norm(f.rule, lq(c));
        ModulusCache om(sur[fi], j, lp(c));
        std::vector<double> eq;
        for (int n : ns) eq.push_back(best_approx(f.rule, n, lq(c)).error);
        // Omega_j(f, 1/k), k = 1..256, with a power-law tail fitted on k >= 64
        constexpr int kOm = 256;
        std::vector<double> omk(kOm + 1), kk, vv;
        for (int k = 1; k <= kOm; ++k) {
            omk[k] = om(1.0 / k);
            if (k >= kOm / 4) {
                kk.push_back(k);
                vv.push_back(omk[k]);
            }
        }
        const PowerFit omfit = fit_power(kk, vv);

        std::vector<double> stars = {np.q_star_alt()};
        if (np.q_star != np.q_star_alt()) stars.push_back(np.q_star);
        Rows out;
        auto push = [&](const std::string& variant, double qs, double n, double lhs, double tr_rhs, double ex_rhs) {
            CheckRow row;
            row.lhs = lhs;
            row.rhs = ex_rhs;
            row.ratio = safe_ratio(lhs, ex_rhs);
            row.params = {{"variant", variant}, {"function", f.id}, {"weight", c.weight.id}, {"p", c.p},
                          {"q", *c.q},          {"j", double(j)},   {"n", n},                {"q_star", qs},
                          {"rhs_truncated", tr_rhs}, {"rhs_extrapolated", ex_rhs}};
            char buf[32];
            std::snprintf(buf, sizeof buf, "q*=%g", qs);
            row.series = variant + "|" + series_id(f.id, c, buf);
            row.x = n > 0 ? n : std::numeric_limits<double>::quiet_NaN();
            out.push_back(std::move(row));
        };
        for (double qs : stars) {
            const double sx = qs * np.theta - 1.0;
            const auto root = [&](double v) { return std::pow(v, 1.0 / qs); };
            for (std::size_t a = 0; a < ns.size(); ++a) {
                const auto [t, e] = weighted_error_sum(es, ns[a] / 2 + 1, sx, qs);
                push("pq1", qs, ns[a], eq[a], root(t), root(e));
            }
            {
                const auto [t, e] = weighted_error_sum(es, 1, sx, qs);
                push("pq2", qs, 0, fq, root(t) + fp, root(e) + fp);
            }
            {
                const auto [t, e] = weighted_error_integral(es, sx, qs);
                push("pq3", qs, 0, fq, root(t) + fp, root(e) + fp);
            }
            {
                const LogIntegral li = log_integral(1.0, [&](double u) { return std::pow(std::pow(u, -np.theta) * om(u), qs); });
                push("pq4", qs, 0, fq, root(li.truncated) + fp, root(li.extrapolated) + fp);
            }
            {
                double sum = 0.0;
                for (int k = 1; k <= kOm; ++k) sum += std::pow(k, sx) * std::pow(omk[k], qs);
                const double cexp = sx + omfit.slope * qs;
                const double tail = (omfit.ok && cexp < -1.0)
                                        ? std::exp(qs * omfit.log_a) * std::pow(kOm + 0.5, cexp + 1.0) / (-cexp - 1.0)
                                        : std::numeric_limits<double>::infinity();
                push("pq5", qs, 0, fq, root(sum) + fp, root(sum + tail) + fp);
            }
        }
        return out;
    });
    double gap = 0.0;
    for (const auto& r : rows) {
        const double tr_rhs = std::get<double>(r.params[8].second);
        if (r.rhs > 0 && std::isfinite(r.rhs)) gap = std::max(gap, std::abs(r.rhs - tr_rhs) / r.rhs);
    }
    rep.extras["max_tail_gap"] = gap;
    return rows;
}

Rows check_equivalence(const CheckSpec& s, CheckReport& rep, bool realization) {
    const auto fs = functions_or(s, {"abs_sin"});
    const auto cases = norms_or(s);
    const auto orders = or_default(s.orders, {1, 2});
    std::vector<double> vs = s.v;
    if (vs.empty()) {
        for (int n : or_default(s.n, {4, 8, 16, 32, 64, 128})) vs.push_back(1.0 / n);
    }
    if (realization && !s.v.empty()) throw InvalidInput("realization_equiv sweeps n, not v");
    const auto sur = surrogates(fs, s.resolution);
    std::map<std::pair<std::size_t, int>, double> consts;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        for (int r : orders) consts[{c, r}] = explicit_constants(cases[c].weight.w, cases[c].p, r).get("order_reduction");
    }
    rep.notes.push_back(realization ? "rhs = ||f - U|| + n^-r ||U^(r)||, U the best approximant of degree n"
                                    : "rhs = smallest of ||f - g|| + v^r ||g^(r)|| over g in {0, A_v^r f, V_n f, D_n f}");
    rep.notes.push_back("ratio Omega_r/rhs bounded above by (1 + C1)^r");
    const auto tr = triples(fs.size(), cases.size(), orders);
    return run_tasks(tr.size(), [&](std::size_t i) {
        const auto& [fi, ci, r] = tr[i];
        const auto& c = cases[ci];
        Rows rows;
        for (double v : vs) {
            CheckRow row;
            row.lhs = modulus(sur[fi], r, v, lp(c));
            std::string cand = "U";
            const int n = static_cast<int>(std::lround(1.0 / v));
            if (realization) {
                const ApproxResult u = best_approx(fs[fi].rule, n, lp(c));
                row.rhs = u.error + std::pow(n, -r) * norm(u.poly.derivative(r), lp(c));
            } else {
                const KFunctionalBound kb = k_functional_upper(sur[fi], r, v, lp(c));
                row.rhs = kb.value;
                cand = kb.candidate;
            }
            row.ratio = safe_ratio(row.lhs, row.rhs);
            row.constant = consts.at({ci, r});
            row.params = {{"function", fs[fi].id}, {"weight", c.weight.id}, {"p", c.p}, {"r", double(r)}};
            if (realization) row.params.emplace_back("n", double(n));
            else {
                row.params.emplace_back("v", v);
                row.params.emplace_back("candidate", cand);
            }
            row.series = series_id(fs[fi].id, c, "r=" + std::to_string(r));
            row.x = 1.0 / v;
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

std::vector<NamedFunction> uniform_family(std::uint64_t seed) {
    std::vector<NamedFunction> out;
    for (int m : {0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48}) out.push_back({"cos" + std::to_string(m), FunctionRule::cos_mode(m)});
    for (int m : {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48}) out.push_back({"sin" + std::to_string(m), FunctionRule::sin_mode(m)});
    for (int i = 0; i < 20; ++i) {
        const std::string id = "random" + std::to_string(i);
        out.push_back({id, FunctionRule::poly(random_poly(32, derive_seed(seed, 300, i)), id)});
    }
    out.push_back({"abs_sin_0.5", FunctionRule::abs_sin_pow(0.5)});
    out.push_back({"abs_sin", FunctionRule::abs_sin_pow(1.0)});
    out.push_back({"abs_sin_2.5", FunctionRule::abs_sin_pow(2.5)});
    out.push_back({"sawtooth_vp4", FunctionRule::sawtooth_vp(4)});
    out.push_back({"sawtooth_vp16", FunctionRule::sawtooth_vp(16)});
    return out;
}

Rows check_operator_uniform(const CheckSpec& s, CheckReport& rep) {
    const auto fs = s.functions.empty() ? uniform_family(s.seed) : s.functions;
    const auto cases = norms_or(s);
    const auto vs = or_default(s.v, {1.0, 0.5, 0.1, 0.01});
    const auto lams = or_default(s.lambdas, {1.0, 2.0, 4.0, 16.0});
    const auto ns = or_default(s.n, {1, 2, 4, 8, 16, 32});
    std::vector<TrigPoly> sur = surrogates(fs, std::min(s.resolution, 1024));
    rep.notes.push_back("test family of " + std::to_string(fs.size()) + " polynomials (non-polynomial members interpolated on 1024 points)");

    struct Op {
        OperatorTag tag;
        std::string constant;
        double factor;
    };
    std::vector<Op> ops;
    for (double v : vs) ops.push_back({OperatorTag::steklov(v), "C1", 1.0});
    for (double v : vs) ops.push_back({OperatorTag::smooth_r(v), "C1", 1.0});
    for (double l : lams) {
        const double tmax = kPi * std::pow(l, -s.g_exponent);
        for (double tau : {-tmax, 0.0, tmax}) ops.push_back({OperatorTag::window(l, tau), "C2", 1.0});
    }
    for (int n : ns) ops.push_back({OperatorTag::fejer(n), "C12", 1.0});
    for (int n : ns) ops.push_back({OperatorTag::vallee_poussin(n), "C12", 3.0});
    for (int n : ns) ops.push_back({OperatorTag::jackson(n), "C10", 1.0});

    std::vector<ConstantsTable> tabs;
    for (const auto& c : cases) tabs.push_back(explicit_constants(c.weight.w, c.p, 1));
    std::vector<std::pair<std::size_t, std::size_t>> pts;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        for (std::size_t o = 0; o < ops.size(); ++o) pts.emplace_back(c, o);
    }
    return run_tasks(pts.size(), [&](std::size_t i) {
        const auto& c = cases[pts[i].first];
        const Op& op = ops[pts[i].second];
        const double k = op.factor * tabs[pts[i].first].get(op.constant);
        Rows rows;
        for (std::size_t fi = 0; fi < fs.size(); ++fi) {
            CheckRow row;
            row.lhs = norm(apply(op.tag, sur[fi]), lp(c));
            row.rhs = norm(sur[fi], lp(c));
            row.ratio = safe_ratio(row.lhs, row.rhs);
            row.constant = k;
            row.params = {{"weight", c.weight.id}, {"p", c.p}, {"operator", op.tag.name()}, {"bound", (op.factor == 3.0 ? "3" : "") + op.constant},
                          {"function", fs[fi].id}};
            row.series = case_label(c) + "|" + op.tag.name();
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

Rows check_modulus_props(const CheckSpec& s, CheckReport& rep) {
    const auto fs = functions_or(s, {"abs_sin", "abs_sin_2.5", "sawtooth_vp16", "random0"});
    const auto cases = norms_or(s);
    const auto vs = or_default(s.v, kDefaultV);
    const auto lams = or_default(s.lambdas, {0.5, 1.0, 2.0, 3.7});
    const auto sur = surrogates(fs, s.resolution);
    const auto orders = or_default(s.orders, {1, 2});
    std::map<std::pair<std::size_t, int>, ConstantsTable> tabs;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        for (int k : orders) tabs.emplace(std::make_pair(c, k), explicit_constants(cases[c].weight.w, cases[c].p, k));
        tabs.emplace(std::make_pair(c, 1), explicit_constants(cases[c].weight.w, cases[c].p, 1));
    }
    rep.notes.push_back("vanishing: Omega_k(f,v) <= (1+C1)^k ||f||; order_reduction: Omega_{k+1} <= (1+C1) Omega_k; "
                        "dilation: Omega_k(f,lambda v) <= 4(1+C1)^k max(C18,C19)^k (1+floor(lambda))^k Omega_k(f,v); "
                        "smooth_bound: Omega_k(f,v) <= 2^-k C1^k v^k ||f^(k)||; r_proximity: ||f-R_v f|| <= 72 C2 ||(I-T_v)f||; "
                        "r_derivative: v||(R_v f)'|| <= C19 Omega_1(f,v)");
    const auto tr = triples(fs.size(), cases.size(), orders);
    return run_tasks(tr.size(), [&](std::size_t i) {
        const auto& [fi, ci, k] = tr[i];
        const auto& c = cases[ci];
        const auto& t = tabs.at({ci, k});
        const auto& t1 = tabs.at({ci, 1});
        const auto nm = lp(c);
        const TrigPoly& f = sur[fi];
        const double fnorm = norm(f, nm);
        const double floor = 1e-13 * fnorm;
        Rows rows;
        auto push = [&](const std::string& prop, double v, double lam, double lhs, double rhs, double constant, bool trend) {
            CheckRow row;
            row.lhs = lhs;
            row.rhs = rhs;
            row.ratio = safe_ratio(lhs, rhs, floor);
            row.constant = constant;
            row.params = {{"property", prop}, {"function", fs[fi].id}, {"weight", c.weight.id}, {"p", c.p},
                          {"k", double(k)},   {"v", v},                {"lambda", lam}};
            row.series = prop + "|" + series_id(fs[fi].id, c, "k=" + std::to_string(k));
            if (trend) row.x = 1.0 / v;
            rows.push_back(std::move(row));
        };
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double c1 = t.get("C1");
        for (double v : vs) {
            const double om = modulus(f, k, v, nm);
            push("vanishing", v, nan, om, fnorm, std::pow(1.0 + c1, k), true);
            push("order_reduction", v, nan, modulus(f, k + 1, v, nm), om, 1.0 + c1, false);
            push("smooth_bound", v, nan, om, std::pow(v, k) * norm(f.derivative(k), nm), t.get("smooth_bound"), false);
            for (double lam : lams) {
                if (lam * v > 1.0) continue;
                push("dilation", v, lam, modulus(f, k, lam * v, nm), om,
                     t.get("dilation") * std::pow(1.0 + std::floor(lam), k), false);
            }
            if (k == 1) {
                const TrigPoly rf = apply(OperatorTag::smooth_r(v), f);
                push("r_proximity", v, nan, norm(f - rf, nm), om, t1.get("r_proximity"), false);
                push("r_derivative", v, nan, v * norm(rf.derivative(1), nm), om, t1.get("C19"), false);
            }
        }
        return rows;
    });
}

Rows check_upsilon_derivative(const CheckSpec& s, CheckReport& rep) {
    const auto fs = functions_or(s, {"cos4", "abs_sin", "abs_sin_2.5", "exp_sin"});
    const auto cases = norms_or(s);
    const auto ls = or_default(s.v, {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625});
    if (!s.orders.empty() && (s.orders.size() != 1 || s.orders[0] != 1))
        throw InvalidInput("upsilon_derivative is defined for r = 1 only");
    std::vector<NamedFunction> usable;
    for (const auto& f : fs) {
        if (f.rule.has_derivative(1)) usable.push_back(f);
        else rep.notes.push_back("skipped " + f.id + ": no derivative rule");
    }
    const auto sur = surrogates(usable, s.resolution);
    const auto tr = triples(usable.size(), cases.size(), {1});
    std::vector<double> resid(tr.size(), 0.0);
    Rows rows = run_tasks(tr.size(), [&](std::size_t i) {
        const auto& [fi, ci, r] = tr[i];
        const auto& c = cases[ci];
        const auto nm = lp(c);
        const TrigPoly d = surrogate(usable[fi].rule.derivative_rule(1), s.resolution);
        const double dn = norm(d, nm);
        const double fnorm = norm(sur[fi], nm);
        Rows out;
        for (double l : ls) {
            // l (Upsilon_l f)' = 2 (T_l - I) f
            const TrigPoly lhs_id = apply(OperatorTag::upsilon(l), sur[fi]).derivative(1) * l;
            const TrigPoly rhs_id = apply_multiplier(sur[fi], steklov_complement(l, 1, static_cast<std::size_t>(sur[fi].degree()))) * -2.0;
            resid[i] = std::max(resid[i], norm(lhs_id - rhs_id, nm) / std::max(fnorm, 1e-300));
            CheckRow row;
            row.lhs = l * dn;
            row.rhs = modulus(sur[fi], r, l, nm);
            row.ratio = safe_ratio(row.lhs, row.rhs, 1e-13 * fnorm);
            row.params = {{"function", usable[fi].id}, {"weight", c.weight.id}, {"p", c.p}, {"r", 1.0}, {"l", l}};
            row.series = series_id(usable[fi].id, c, "r=1");
            row.x = 1.0 / l;
            out.push_back(std::move(row));
        }
        return out;
    });
    rep.extras["identity_residual_r1"] = resid.empty() ? 0.0 : *std::max_element(resid.begin(), resid.end());
    rep.notes.push_back("identity l (Upsilon_l f)' = 2 (T_l - I) f checked for r = 1; r >= 2 is not asserted");
    return rows;
}

Rows check_jackson_operator(const CheckSpec& s, CheckReport& rep) {
    const auto fs = functions_or(s, {"abs_sin", "abs_sin_2.5", "sawtooth_vp16", "exp_sin"});
    const auto cases = norms_or(s);
    const auto ns = or_default(s.n, {2, 4, 8, 16, 32, 64});
    const auto sur = surrogates(fs, s.resolution);
    std::vector<ConstantsTable> tabs;
    for (const auto& c : cases) tabs.push_back(explicit_constants(c.weight.w, c.p, 1));
    rep.notes.push_back("D_n: ||f - D_n f|| <= (72 C2 + C19 C1 + 72 C10 C2) Omega_1(f,1/n); V_n: ||f - V_n f|| <= (1 + 3 C12) E_n(f)");
    const auto tr = triples(fs.size(), cases.size(), {1});
    return run_tasks(tr.size(), [&](std::size_t i) {
        const auto& [fi, ci, unused] = tr[i];
        (void)unused;
        const auto& c = cases[ci];
        const auto nm = lp(c);
        const double floor = 1e-12 * norm(sur[fi], nm);
        Rows rows;
        for (int n : ns) {
            CheckRow a;
            a.lhs = norm(sur[fi] - apply(OperatorTag::jackson(n), sur[fi]), nm);
            a.rhs = modulus(sur[fi], 1, 1.0 / n, nm);
            a.ratio = safe_ratio(a.lhs, a.rhs, floor);
            a.constant = tabs[ci].get("jackson_operator");
            a.params = {{"operator", "D_n"}, {"function", fs[fi].id}, {"weight", c.weight.id}, {"p", c.p}, {"n", double(n)}};
            a.series = "D_n|" + series_id(fs[fi].id, c, "");
            a.x = n;
            rows.push_back(std::move(a));

            CheckRow b;
            b.lhs = near_best_vp(fs[fi].rule, n, nm).error;
            b.rhs = best_approx(fs[fi].rule, n, nm).error;
            b.ratio = safe_ratio(b.lhs, b.rhs, floor);
            b.constant = tabs[ci].get("near_best_vp");
            b.params = {{"operator", "V_n"}, {"function", fs[fi].id}, {"weight", c.weight.id}, {"p", c.p}, {"n", double(n)}};
            b.series = "V_n|" + series_id(fs[fi].id, c, "");
            b.x = n;
            rows.push_back(std::move(b));
        }
        return rows;
    });
}

}  // namespace

CheckReport run_check(const CheckSpec& spec) {
    const auto& ids = check_ids();
    if (std::find(ids.begin(), ids.end(), spec.check) == ids.end()) throw InvalidInput("unknown check " + spec.check);
    if (spec.samples < 1) throw InvalidInput("samples must be >= 1");
    if (spec.j < 1) throw InvalidInput("j must be >= 1");
    for (int n : spec.n) {
        if (n < 1) throw InvalidInput("n must be >= 1");
    }
    for (int r : spec.orders) {
        if (r < 1) throw InvalidInput("orders must be >= 1");
    }
    for (double v : spec.v) {
        if (!(v > 0.0 && v <= 1.0)) throw InvalidInput("steps must be in (0, 1]");
    }
    for (const auto& c : spec.norms) {
        if (!(c.p >= 1.0)) throw InvalidInput("p must be in [1, inf]");
        if (std::isinf(c.p) && !c.weight.w.is_constant() && spec.check != "nikolskii") throw InvalidInput("p = inf requires gamma == const");
        c.weight.w.require_integrable();
    }
    CheckReport rep;
    rep.id = spec.id.empty() ? spec.check : spec.id;
    rep.check = spec.check;
    const std::string& k = spec.check;
    bool two_sided = false;
    if (k == "nikolskii") rep.rows = check_nikolskii(spec, rep);
    else if (k == "jackson") {
        rep.rows = check_jackson(spec, rep);
        add_decay_extras(rep, "beta_E", true);
        add_decay_extras(rep, "beta_Omega", false);
    } else if (k == "jackson_derivative") rep.rows = check_jackson_derivative(spec, rep);
    else if (k == "bernstein") rep.rows = check_bernstein(spec, rep);
    else if (k == "stechkin_inverse") {
        rep.rows = check_stechkin(spec, rep);
        add_decay_extras(rep, "beta_Omega", true);
    } else if (k == "marchaud") rep.rows = check_marchaud(spec, rep);
    else if (k == "ulyanov_modulus") rep.rows = check_ulyanov_modulus(spec, rep);
    else if (k == "ulyanov_best_approx") rep.rows = check_ulyanov_best_approx(spec, rep);
    else if (k == "realization_equiv") {
        rep.rows = check_equivalence(spec, rep, true);
        two_sided = true;
    } else if (k == "kfunctional_equiv") {
        rep.rows = check_equivalence(spec, rep, false);
        two_sided = true;
    } else if (k == "operator_uniform") rep.rows = check_operator_uniform(spec, rep);
    else if (k == "modulus_props") rep.rows = check_modulus_props(spec, rep);
    else if (k == "upsilon_derivative") rep.rows = check_upsilon_derivative(spec, rep);
    else if (k == "jackson_operator") rep.rows = check_jackson_operator(spec, rep);
    finalize_report(rep, spec.slope_tolerance, two_sided);
    return rep;
}

}  // namespace apx
