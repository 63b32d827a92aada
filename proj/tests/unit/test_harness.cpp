#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "apx/approx.hpp"
#include "apx/errors.hpp"
#include "apx/harness.hpp"
#include "apx/smoothness.hpp"

using namespace apx;

namespace {

CheckRow row(double ratio, double x, std::optional<double> c = std::nullopt) {
    CheckRow r;
    r.lhs = ratio;
    r.rhs = 1.0;
    r.ratio = ratio;
    r.x = x;
    r.series = "s";
    r.constant = c;
    return r;
}

bool same_rows(const CheckReport& a, const CheckReport& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& x = a.rows[i];
        const auto& y = b.rows[i];
        if (x.params != y.params || x.series != y.series) return false;
        if (std::memcmp(&x.lhs, &y.lhs, sizeof(double)) || std::memcmp(&x.rhs, &y.rhs, sizeof(double)) ||
            std::memcmp(&x.ratio, &y.ratio, sizeof(double)))
            return false;
    }
    return true;
}

}  // namespace

TEST(ExplicitConstants, PrintedTableValues) {
    const ConstantsTable t = explicit_constants(Weight::constant(), 2.0);
    EXPECT_NEAR(t.get("C1"), std::sqrt(2.0) * kTwoPi, 1e-12);
    EXPECT_NEAR(t.get("C1"), 8.8858, 1e-4);
    EXPECT_NEAR(t.get("C2"), 4.0 * kPi * std::pow(3.0, 1.5), 1e-10);
    EXPECT_NEAR(t.get("C2"), 65.297, 1e-3);
    EXPECT_NEAR(t.get("C9"), 1.0 / std::sqrt(kTwoPi), 1e-12);
    EXPECT_NEAR(explicit_constants(Weight::constant(), kInf).get("C1"), 1.0, 0.0);
    for (const auto& e : t.entries) EXPECT_FALSE(e.formula.empty()) << e.name;
}

TEST(ExplicitConstants, WeightOutsideClassRejected) {
    EXPECT_THROW((void)explicit_constants(Weight::power(0.0, 0.5), kInf), NotInClassError);
    EXPECT_THROW((void)explicit_constants(Weight::power(0.0, 0.5), 1.0), NotInClassError);
    EXPECT_THROW((void)explicit_constants(Weight::power(0.0, 1.5), 2.0), NotInClassError);
}

TEST(DecayExponent, ExactPowerData) {
    std::vector<std::pair<double, double>> s;
    for (int n : {4, 8, 16, 32, 64, 128}) s.emplace_back(n, std::pow(n, -1.5));
    const DecayFit f = estimate_decay_exponent(s);
    EXPECT_NEAR(f.beta, 1.5, 1e-10);
    EXPECT_LT(f.residual, 1e-10);
}

TEST(DecayExponent, RejectsBadInput) {
    std::vector<std::pair<double, double>> s = {{1, 1}, {2, 0.5}, {3, 0.3}, {4, 0.2}, {5, 0.1}, {6, 0.0}};
    EXPECT_THROW((void)estimate_decay_exponent(s), InvalidInput);
    s.pop_back();
    EXPECT_THROW((void)estimate_decay_exponent(s), InvalidInput);
}

TEST(DecayExponent, AbsSinBestApproximationAndModulus) {
    const auto f = FunctionRule::abs_sin_pow(1.0);
    const auto errs = l2_best_errors(f, 256, Weight::constant());
    const TrigPoly sur = surrogate(f, 8192);
    std::vector<std::pair<double, double>> e, w;
    for (int n : {8, 16, 32, 64, 128, 256}) {
        e.emplace_back(n, errs[static_cast<std::size_t>(n)]);
        w.emplace_back(n, modulus(sur, 2, 1.0 / n, LpNorm{}));
    }
    EXPECT_NEAR(estimate_decay_exponent(e).beta, 1.5, 0.1);
    EXPECT_NEAR(estimate_decay_exponent(w).beta, 1.5, 0.1);
}

TEST(Sandwich, AbsSinModulusBand) {
    const TrigPoly sur = surrogate(FunctionRule::abs_sin_pow(1.0), 8192);
    double lo = kInf, hi = 0.0;
    for (int n : {8, 16, 32, 64, 128}) {
        const double v = modulus(sur, 2, 1.0 / n, LpNorm{}) * std::pow(n, 1.5);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_LE(hi / lo, 10.0);
}

TEST(FinalizeReport, VerdictPolicy) {
    CheckReport flat;
    for (double x : {4.0, 8.0, 16.0, 32.0, 64.0}) flat.rows.push_back(row(0.5, x));
    finalize_report(flat, 0.05, false);
    EXPECT_EQ(flat.verdict, Verdict::bounded);

    CheckReport growing;
    for (double x : {4.0, 8.0, 16.0, 32.0, 64.0}) growing.rows.push_back(row(0.01 * x, x));
    finalize_report(growing, 0.05, false);
    EXPECT_EQ(growing.verdict, Verdict::inconclusive);
    EXPECT_NEAR(growing.slope, 1.0, 1e-12);

    CheckReport capped;
    for (double x : {4.0, 8.0, 16.0}) capped.rows.push_back(row(0.5, x, 1.0));
    finalize_report(capped, 0.05, false);
    EXPECT_EQ(capped.verdict, Verdict::bounded_by_constant);

    capped.rows.push_back(row(1.5, 32.0, 1.0));
    finalize_report(capped, 0.05, false);
    EXPECT_EQ(capped.verdict, Verdict::violated);

    CheckReport decaying;
    for (double x : {4.0, 8.0, 16.0, 32.0}) decaying.rows.push_back(row(1.0 / x, x));
    finalize_report(decaying, 0.05, false);
    EXPECT_EQ(decaying.verdict, Verdict::bounded);
    finalize_report(decaying, 0.05, true);
    EXPECT_EQ(decaying.verdict, Verdict::inconclusive);
}

TEST(RunCheck, NikolskiiEqualExponentsGiveOne) {
    CheckSpec s;
    s.check = "nikolskii";
    s.norms = {NormCase{2.0, 2.0, {"sqrt", Weight::power(0.0, 0.5)}}};
    s.n = {4, 16, 64};
    s.samples = 3;
    const CheckReport r = run_check(s);
    for (const auto& row : r.rows) EXPECT_NEAR(row.ratio, 1.0, 1e-15);
}

TEST(RunCheck, JacksonOnPolynomialInput) {
    CheckSpec s;
    s.check = "jackson";
    s.functions = {{"p4", FunctionRule::poly(random_poly(4, 77))}};
    s.n = {4, 8, 16, 32, 64, 128};
    s.orders = {1};
    const CheckReport r = run_check(s);
    ASSERT_FALSE(r.rows.empty());
    for (const auto& row : r.rows) EXPECT_EQ(row.ratio, 0.0);
    EXPECT_EQ(r.verdict, Verdict::bounded);
}

TEST(RunCheck, HypothesisViolationsRejected) {
    CheckSpec s;
    s.check = "ulyanov_modulus";
    s.norms = {NormCase{2.0, 1.5, {"one", Weight::constant()}}};
    EXPECT_THROW((void)run_check(s), InvalidInput);
    s.check = "no_such_check";
    EXPECT_THROW((void)run_check(s), InvalidInput);
    s.check = "jackson";
    s.norms = {NormCase{kInf, std::nullopt, {"sqrt", Weight::power(0.0, 0.5)}}};
    EXPECT_THROW((void)run_check(s), InvalidInput);
}

TEST(RunCheck, Deterministic) {
    for (const char* id : {"bernstein", "nikolskii", "realization_equiv"}) {
        CheckSpec s;
        s.check = id;
        s.seed = 42;
        s.samples = 4;
        s.n = {4, 8, 16, 32};
        if (s.check == "nikolskii") s.norms = {NormCase{kInf, 2.0, {"sqrt", Weight::power(0.0, 0.5)}}};
        const CheckReport a = run_check(s);
        const CheckReport b = run_check(s);
        EXPECT_TRUE(same_rows(a, b)) << id;
    }
}

TEST(RunCheck, SeedChangesRandomPolynomials) {
    CheckSpec s;
    s.check = "bernstein";
    s.samples = 2;
    s.n = {8};
    s.orders = {1};
    s.seed = 1;
    const CheckReport a = run_check(s);
    s.seed = 2;
    const CheckReport b = run_check(s);
    EXPECT_NE(a.rows[0].lhs, b.rows[0].lhs);
}

// Polynomials concentrated at the zero of |x|^{1/2} make the (inf, 2) Nikol'skii ratio grow like n^{1/4}.
TEST(NikolskiiDefect, ConcentratedPolynomialsGrow) {
    const Weight w = Weight::power(0.0, 0.5);
    std::vector<std::pair<double, double>> pts;
    for (int n : {8, 16, 32, 64, 128, 256}) {
        TrigPoly k(n);
        k.set_a0(1.0);
        for (int j = 1; j <= n; ++j) k.set(j, 2.0 * (1.0 - j / (n + 1.0)), 0.0);
        const double ratio = sup_norm(k) / (std::sqrt(static_cast<double>(n)) * weighted_norm(k, 2.0, w));
        pts.emplace_back(n, 1.0 / ratio);
    }
    const double growth = estimate_decay_exponent(pts).beta;
    EXPECT_NEAR(growth, 0.25, 0.03);
}

TEST(DefaultFunctions, FamilyAndSurrogates) {
    const auto fs = default_functions(3);
    ASSERT_GE(fs.size(), 10u);
    for (const auto& f : fs) {
        const TrigPoly s = surrogate(f.rule, 1024);
        EXPECT_LT(std::abs(s(0.7) - f.rule(0.7)), 1e-3) << f.id;
    }
}
