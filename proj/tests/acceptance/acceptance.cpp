// Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion; exit status 0 iff all selected pass.
// Usage: apx_acceptance [--criterion N]...

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "apx/approx.hpp"
#include "apx/harness.hpp"
#include "apx/norms.hpp"
#include "apx/operators.hpp"
#include "config.hpp"

namespace fs = std::filesystem;
using namespace apx;

namespace {

// Pinned tolerances.
constexpr double kKernelNormTol = 1e-9;
constexpr double kKappaLo = 1.06066;
constexpr double kKappaHi = 1.76777;
constexpr double kKernelSeconds = 5.0;
constexpr double kPathTol = 1e-8;
constexpr double kPathSeconds = 30.0;
constexpr double kConstantSlack = 1e-9;
constexpr double kParsevalTol = 1e-7;
constexpr double kParsevalSeconds = 10.0;
constexpr double kSlopeTol = 0.05;
constexpr double kBetaTol = 0.1;
constexpr double kTailGapTol = 0.05;
constexpr double kSuiteSeconds = 180.0;
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

const fs::path kSuite = fs::path(APX_SOURCE_DIR) / "configs" / "default_suite.json";

const CheckSpec& suite_check(const std::string& check) {
    static const cli::ExperimentConfig cfg = cli::load_config(kSuite);
    for (const auto& s : cfg.checks) {
        if (s.check == check) return s;
    }
    throw std::runtime_error("default suite has no " + check + " check");
}

std::string param_string(const CheckRow& r, const std::string& key) {
    for (const auto& [k, v] : r.params) {
        if (k == key && std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    }
    return {};
}

int constant_violations(const CheckReport& rep) {
    int bad = 0;
    for (const auto& r : rep.rows) {
        if (r.constant && !(r.ratio <= *r.constant * (1 + kConstantSlack))) ++bad;
    }
    return bad;
}

// ---------------------------------------------------------------- 1
Outcome kernel_identities() {
    const auto t0 = Clock::now();
    int norm_bad = 0, kappa_bad = 0, moment_bad = 0;
    double worst_norm = 0.0, worst_moment = 0.0;
    int first_moment_fail = 0;
    for (int n = 2; n <= 64; ++n) {
        const JacksonKernel jk = jackson_kernel(n);
        double s = 0.0;
        for (double v : jk.samples.values) s += v;
        const double norm_err = std::abs(s * jk.samples.grid.spacing() / kPi - 1.0);
        worst_norm = std::max(worst_norm, norm_err);
        if (norm_err > kKernelNormTol) ++norm_bad;
        const double r = jk.kappa / std::pow(n, 3);
        if (r < kKappaLo || r > kKappaHi) ++kappa_bad;
        // First moment by composite Simpson on the closed-form kernel.
        const int m = 20000;
        const double h = kPi / m;
        double acc = 0.0;
        for (int i = 1; i <= m; ++i) {
            const double u = i * h;
            const double q = std::sin(n * u / 2) / std::sin(u / 2);
            acc += (i == m ? 1.0 : (i % 2 ? 4.0 : 2.0)) * u * q * q * q * q;
        }
        const double moment = acc * h / 3.0 / jk.kappa / kPi;
        const double scaled = moment * 2.0 * n;
        worst_moment = std::max(worst_moment, scaled);
        if (scaled > 1.0) {
            ++moment_bad;
            if (!first_moment_fail) first_moment_fail = n;
        }
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = norm_bad == 0 && kappa_bad == 0 && moment_bad == 0 && secs < kKernelSeconds;
    o.detail = "max |(1/pi)int J - 1| = " + fmt(worst_norm) + ", kappa band misses = " + std::to_string(kappa_bad) +
               ", moment bound misses = " + std::to_string(moment_bad) + "/63 (max 2n*moment = " + fmt(worst_moment) +
               (first_moment_fail ? ", first at n = " + std::to_string(first_moment_fail) : std::string()) +
               "), " + fmt(secs) + " s";
    return o;
}

// ---------------------------------------------------------------- 2
Outcome path_agreement() {
    const auto t0 = Clock::now();
    const std::vector<OperatorTag> tags = {
        OperatorTag::steklov(0.05),        OperatorTag::steklov(0.7),      OperatorTag::window(1.0, 0.0),
        OperatorTag::window(8.0, -0.3),    OperatorTag::symmetric(0.1),    OperatorTag::symmetric(0.9),
        OperatorTag::smooth_r(0.1),        OperatorTag::smooth_r(1.0),     OperatorTag::a_delta(0.2, 1),
        OperatorTag::a_delta(0.5, 3),      OperatorTag::upsilon(0.1),      OperatorTag::upsilon(1.0),
        OperatorTag::fejer(4),             OperatorTag::fejer(40),         OperatorTag::vallee_poussin(8),
        OperatorTag::vallee_poussin(20),   OperatorTag::jackson(4),        OperatorTag::jackson(16),
        OperatorTag::difference(0.3, 1),   OperatorTag::difference(0.05, 3), OperatorTag::partial_sum(10),
        OperatorTag::partial_sum(32)};
    const std::vector<Weight> weights = {Weight::constant(), Weight::power(0.0, 0.5)};
    constexpr std::size_t kGrid = 2048;
    double worst = 0.0;
    std::string worst_tag;
    int bad = 0, total = 0;
    for (int i = 0; i < 20; ++i) {
        const TrigPoly u = random_poly(32, kSeed + static_cast<std::uint64_t>(i));
        const auto sampled = synthesize(u, PeriodicGrid(kGrid));
        const SampledFunction plain(sampled.grid, sampled.values);
        for (const auto& t : tags) {
            const auto ref = synthesize_values(apply(t, u), kGrid);
            const SampledFunction quad = apply(t, plain);
            std::vector<double> diff(kGrid);
            for (std::size_t j = 0; j < kGrid; ++j) diff[j] = quad.values[j] - ref[j];
            const SampledFunction d(PeriodicGrid(kGrid), diff);
            for (const auto& w : weights) {
                const double rel = weighted_norm(d, 2.0, w) / weighted_norm(u, 2.0, w);
                ++total;
                if (!(rel <= kPathTol)) ++bad;
                if (rel > worst) {
                    worst = rel;
                    worst_tag = t.name();
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = bad == 0 && secs < kPathSeconds;
    o.detail = std::to_string(total) + " comparisons, " + std::to_string(bad) + " above " + fmt(kPathTol) +
               ", worst relative L2 gap " + fmt(worst) + " (" + worst_tag + "), " + fmt(secs) + " s";
    return o;
}

// ---------------------------------------------------------------- 3
Outcome operator_bounds() {
    const CheckReport rep = run_check(suite_check("operator_uniform"));
    std::set<std::string> cases;
    int tv = 0, s = 0, vp = 0;
    for (const auto& r : rep.rows) {
        cases.insert(r.series.substr(0, r.series.find('|')));
        const std::string b = param_string(r, "bound");
        const std::string op = param_string(r, "operator");
        if (b == "C1" && op.rfind("steklov_T", 0) == 0) ++tv;
        if (b == "C2") ++s;
        if (b == "3C12") ++vp;
    }
    const int bad = constant_violations(rep);
    double worst = 0.0;
    for (const auto& r : rep.rows) worst = std::max(worst, r.ratio / *r.constant);
    Outcome o;
    o.pass = bad == 0 && rep.verdict == Verdict::bounded_by_constant && cases.size() == 4 && tv > 0 && s > 0 && vp > 0;
    o.detail = std::to_string(rep.rows.size()) + " rows over " + std::to_string(cases.size()) + " norm cases (T_v " +
               std::to_string(tv) + ", S " + std::to_string(s) + ", V_n " + std::to_string(vp) + "), " +
               std::to_string(bad) + " violations, max ratio/constant = " + fmt(worst) +
               ", verdict " + to_string(rep.verdict);
    return o;
}

// ---------------------------------------------------------------- 4
double abs_sin_pow_coeff(double s, int m) {
    // a_{2m} of |sin x|^s
    if (m <= s / 2.0 + 1.0)
        return 2.0 * std::pow(-1.0, m) * std::tgamma(s + 1.0) /
               (std::pow(2.0, s) * std::tgamma(1.0 + s / 2.0 + m) * std::tgamma(1.0 + s / 2.0 - m));
    // reflection keeps large m finite: 1/Gamma(1 + s/2 - m) = Gamma(m - s/2) sin(pi (m - s/2)) / pi
    const double ratio = std::exp(std::lgamma(m - s / 2.0) - std::lgamma(m + 1.0 + s / 2.0));
    return -2.0 * std::tgamma(s + 1.0) * std::sin(kPi * s / 2.0) / (kPi * std::pow(2.0, s)) * ratio;
}

double abs_sin_tail(int n) {
    long double acc = 0.0L;
    const long m1 = 2000000;
    for (long m = m1; m > n / 2; --m) {
        const long double c = 4.0L / (3.14159265358979323846L * (4.0L * m * m - 1.0L));
        acc += c * c;
    }
    acc += 1.0L / (3.0L * 3.14159265358979323846L * 3.14159265358979323846L * m1 * m1 * m1);
    return std::sqrt(kPi * static_cast<double>(acc));
}

double exp_sin_tail(int n) {
    double acc = 0.0;
    for (int k = 200; k > n; --k) {
        const double c = 2.0 * std::cyl_bessel_i(static_cast<double>(k), 1.0);
        acc += c * c;
    }
    return std::sqrt(kPi * acc);
}

Outcome parseval_oracle() {
    const auto t0 = Clock::now();
    const LpNorm l2{2.0, Weight::constant()};
    double worst_abs_sin = 0.0, worst_exp = 0.0;
    int bad_abs_sin = 0, bad_exp = 0, first_exp_fail = 0;
    for (int n = 4; n <= 64; ++n) {
        const double a = best_approx(FunctionRule::abs_sin_pow(1.0), n, l2).error;
        const double ra = std::abs(a / abs_sin_tail(n) - 1.0);
        worst_abs_sin = std::max(worst_abs_sin, ra);
        if (!(ra <= kParsevalTol)) ++bad_abs_sin;
        const double e = best_approx(FunctionRule::exp_sin(), n, l2).error;
        const double oracle = exp_sin_tail(n);
        const double re = oracle > 0 ? std::abs(e / oracle - 1.0) : (e == 0 ? 0.0 : INFINITY);
        worst_exp = std::max(worst_exp, re);
        if (!(re <= kParsevalTol)) {
            ++bad_exp;
            if (!first_exp_fail) first_exp_fail = n;
        }
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = bad_abs_sin == 0 && bad_exp == 0 && secs < kParsevalSeconds;
    o.detail = "|sin|: " + std::to_string(bad_abs_sin) + "/61 above " + fmt(kParsevalTol) + " (worst " + fmt(worst_abs_sin) +
               "); exp(sin): " + std::to_string(bad_exp) + "/61 above (worst " + fmt(worst_exp) +
               (first_exp_fail ? ", first at n = " + std::to_string(first_exp_fail) + " where E_n = " +
                                     fmt(exp_sin_tail(first_exp_fail)) + " is at the double-precision floor"
                               : std::string()) +
               "), " + fmt(secs) + " s";
    return o;
}

// ---------------------------------------------------------------- 5
Outcome equivalence_bands() {
    bool ok = true;
    std::string detail;
    for (const char* id : {"kfunctional_equiv", "realization_equiv"}) {
        CheckSpec s = suite_check(id);
        const CheckReport rep = run_check(s);
        const int bad = constant_violations(rep);
        double worst_slope = 0.0, min_ratio = INFINITY, max_ratio = 0.0;
        for (const auto& ser : rep.series) worst_slope = std::max(worst_slope, std::abs(ser.slope));
        for (const auto& r : rep.rows) {
            min_ratio = std::min(min_ratio, r.ratio);
            max_ratio = std::max(max_ratio, r.ratio);
        }
        const bool fine = bad == 0 && min_ratio > 0 && std::isfinite(max_ratio) && worst_slope <= kSlopeTol &&
                          rep.series.size() == 4;
        ok = ok && fine;
        detail += std::string(detail.empty() ? "" : "; ") + id + ": Omega/rhs in [" + fmt(min_ratio) + ", " + fmt(max_ratio) +
                  "], lower-bound misses " + std::to_string(bad) + ", max |slope| " + fmt(worst_slope) + ", " +
                  std::to_string(rep.series.size()) + " series";
    }
    return {ok, detail};
}

// ---------------------------------------------------------------- 6
Outcome sandwich() {
    bool ok = true;
    std::string detail;
    for (const char* id : {"jackson", "stechkin_inverse"}) {
        const CheckReport rep = run_check(suite_check(id));
        ok = ok && rep.verdict == Verdict::bounded;
        detail += std::string(id) + " " + to_string(rep.verdict) + " (slope " + fmt(rep.slope) + "); ";
    }
    for (double s : {1.0, 2.5}) {
        const auto f = FunctionRule::abs_sin_pow(s);
        const auto errs = l2_best_errors(f, 256, Weight::constant());
        std::vector<std::pair<double, double>> measured, oracle;
        for (int n : {8, 16, 32, 64, 128, 256}) {
            measured.emplace_back(n, errs[static_cast<std::size_t>(n)]);
            double acc = 0.0;
            for (int m = 200000; m > n / 2; --m) acc += std::pow(abs_sin_pow_coeff(s, m), 2);
            oracle.emplace_back(n, std::sqrt(kPi * acc));
        }
        const double b = estimate_decay_exponent(measured).beta;
        const double bo = estimate_decay_exponent(oracle).beta;
        const double asym = s + 0.5;
        ok = ok && std::abs(b - bo) <= kBetaTol && std::abs(b - asym) <= kBetaTol;
        detail += "|sin|^" + fmt(s) + ": beta " + fmt(b) + " vs oracle fit " + fmt(bo) + " and exponent " + fmt(asym) + "; ";
    }
    return {ok, detail.substr(0, detail.size() - 2)};
}

// ---------------------------------------------------------------- 7
Outcome ulyanov() {
    const auto t0 = Clock::now();
    static const cli::ExperimentConfig cfg = cli::load_config(kSuite);
    std::vector<CheckReport> reps;
    for (const auto& s : cfg.checks) reps.push_back(run_check(s));
    const double secs = seconds_since(t0);
    bool ok = secs < kSuiteSeconds;
    std::string detail;
    for (const auto& rep : reps) {
        if (rep.check != "ulyanov_modulus" && rep.check != "ulyanov_best_approx") continue;
        const double gap = rep.extras.count("max_tail_gap") ? rep.extras.at("max_tail_gap") : INFINITY;
        std::set<std::string> cases;
        for (const auto& r : rep.rows) cases.insert(r.series);
        ok = ok && rep.verdict == Verdict::bounded && gap <= kTailGapTol;
        detail += rep.check + " " + to_string(rep.verdict) + " (max tail gap " + fmt(gap) + ", " +
                  std::to_string(cases.size()) + " series); ";
    }
    detail += "full suite " + fmt(secs) + " s";
    return {ok, detail};
}

// ---------------------------------------------------------------- 8
Outcome bernstein() {
    const CheckSpec& s = suite_check("bernstein");
    const CheckReport rep = run_check(s);
    const int bad = constant_violations(rep);
    const bool shape = s.samples == 50 && s.n.front() == 4 && s.n.back() == 128 && s.orders == std::vector<int>{1, 2};
    Outcome o;
    o.pass = bad == 0 && shape && rep.verdict == Verdict::bounded_by_constant;
    o.detail = std::to_string(rep.rows.size()) + " rows, " + std::to_string(bad) + " violations, verdict " + to_string(rep.verdict);
    return o;
}

// ---------------------------------------------------------------- 9
Outcome nikolskii() {
    const CheckReport rep = run_check(suite_check("nikolskii"));
    bool ok = std::isfinite(rep.max_ratio) && rep.series.size() == 2;
    std::string detail;
    for (const auto& ser : rep.series) {
        ok = ok && ser.slope <= kSlopeTol;
        detail += ser.series + ": max " + fmt(ser.max_ratio) + ", slope " + fmt(ser.slope) + "; ";
    }
    detail += "verdict " + to_string(rep.verdict);
    return {ok && rep.verdict == Verdict::bounded, detail};
}

// ---------------------------------------------------------------- 10
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / ("apx_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    std::vector<fs::path> dirs = {root / "a", root / "b"};
    for (const auto& d : dirs) {
        const std::string cmd = "'" APX_CLI_PATH "' run '" + kSuite.string() + "' -o '" + d.string() + "' -q > /dev/null 2>&1";
        const int st = std::system(cmd.c_str());
        if (!WIFEXITED(st) || WEXITSTATUS(st) != 0) {
            return {false, "suite run exited with status " + std::to_string(WIFEXITED(st) ? WEXITSTATUS(st) : -1)};
        }
    }
    int files = 0, differ = 0;
    for (const auto& e : fs::directory_iterator(dirs[0])) {
        if (e.path().extension() != ".csv") continue;
        ++files;
        if (slurp(e.path()) != slurp(dirs[1] / e.path().filename())) ++differ;
    }
    fs::remove_all(root);
    return {files >= 14 && differ == 0, std::to_string(files) + " CSV files, " + std::to_string(differ) + " differ"};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "kernel identities", kernel_identities},
        {2, "multiplier/quadrature agreement", path_agreement},
        {3, "explicit-constant operator bounds", operator_bounds},
        {4, "Parseval best-approximation oracle", parseval_oracle},
        {5, "equivalence bands", equivalence_bands},
        {6, "direct/inverse sandwich", sandwich},
        {7, "Ul'yanov checks", ulyanov},
        {8, "Bernstein with explicit constant", bernstein},
        {9, "Nikol'skii trend", nikolskii},
        {10, "determinism", determinism},
    };
    std::set<int> pick;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) pick.insert(std::atoi(argv[++i]));
        else {
            std::cerr << "usage: apx_acceptance [--criterion N]...\n";
            return 2;
        }
    }
    bool all_pass = true;
    for (const auto& c : all) {
        if (!pick.empty() && !pick.count(c.id)) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all_pass = all_pass && o.pass;
        std::cout << "criterion " << c.id << " [" << c.name << "]: " << (o.pass ? "PASS" : "FAIL") << " : " << o.detail
                  << std::endl;
    }
    return all_pass ? 0 : 1;
}
