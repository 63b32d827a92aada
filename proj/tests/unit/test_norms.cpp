#include <gtest/gtest.h>

#include <cmath>

#include "apx/errors.hpp"
#include "apx/harness.hpp"
#include "apx/norms.hpp"

using namespace apx;

namespace {

SampledFunction sampled(const FunctionRule& r, std::size_t n = 4096) { return SampledFunction::from_rule(r, n); }

}  // namespace

TEST(WeightedNorm, Examples) {
    const Weight one = Weight::constant();
    EXPECT_NEAR(weighted_norm(sampled(FunctionRule::constant(1.0)), 2.0, one), std::sqrt(kTwoPi), 1e-12);
    EXPECT_NEAR(weighted_norm(sampled(FunctionRule::cos_mode(1)), 2.0, one), std::sqrt(kPi), 1e-12);
    EXPECT_NEAR(weighted_norm(sampled(FunctionRule::constant(1.0), 16384), 1.0, Weight::power(0.0, -0.5)),
                4.0 * std::sqrt(kPi), 1e-8);
}

TEST(WeightedNorm, InfinityIgnoresWeight) {
    const TrigPoly u = TrigPoly::cosine(2, 3.0) + TrigPoly::sine(5, 0.5);
    EXPECT_NEAR(weighted_norm(u, kInf, Weight::power(0.0, 0.5)), weighted_norm(u, kInf, Weight::constant()), 1e-14);
}

TEST(WeightedNorm, PolynomialMatchesParseval) {
    const TrigPoly u = random_poly(24, 17);
    EXPECT_NEAR(weighted_norm(u, 2.0, Weight::constant()), std::sqrt(u.l2_norm_squared()), 1e-11);
}

TEST(WeightedNorm, HolderMonotoneNormalized) {
    const TrigPoly u = random_poly(12, 4);
    const Weight one = Weight::constant();
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
        const double v = std::isinf(p) ? weighted_norm(u, p, one) : std::pow(kTwoPi, -1.0 / p) * weighted_norm(u, p, one);
        EXPECT_GE(v, prev - 1e-8) << p;
        prev = v;
    }
}

TEST(WeightedNorm, Homogeneity) {
    const TrigPoly u = random_poly(10, 8);
    const Weight w = Weight::power(0.0, 0.5);
    for (double p : {1.0, 2.0, 3.0}) {
        const double base = weighted_norm(u, p, w);
        EXPECT_NEAR(weighted_norm(-2.5 * u, p, w), 2.5 * base, 1e-10 * base);
        EXPECT_NEAR(weighted_norm(u, p, w.scaled(4.0)), std::pow(4.0, 1.0 / p) * base, 1e-10 * base);
    }
}

TEST(WeightedNorm, AccurateNormOfKinkedFunction) {
    const auto f = FunctionRule::abs_sin_pow(1.0);
    const double v = accurate_norm([&](double x) { return f(x); }, 1.0, Weight::constant(), f.kinks(), 8);
    EXPECT_NEAR(v, 4.0, 1e-10);
}

TEST(SupNorm, NewtonPolishBeatsGrid) {
    const TrigPoly u = random_poly(40, 23);
    double dense = 0.0;
    for (int j = 0; j < 200000; ++j) dense = std::max(dense, std::abs(u(-kPi + kTwoPi * j / 200000.0)));
    const double s = sup_norm(u);
    EXPECT_GE(s, dense - 1e-12);
    EXPECT_NEAR(s, dense, 1e-7 * dense);
}

TEST(NormParams, ThetaAndQStar) {
    const NormParams a = NormParams::make(1.0, 2.0);
    EXPECT_DOUBLE_EQ(a.theta, 0.5);
    EXPECT_DOUBLE_EQ(a.q_star, 2.0);
    EXPECT_DOUBLE_EQ(a.q_star_alt(), 1.0);
    const NormParams b = NormParams::make(2.0, kInf);
    EXPECT_DOUBLE_EQ(b.theta, 0.5);
    EXPECT_DOUBLE_EQ(b.q_star, 1.0);
    const NormParams c = NormParams::make(2.0, 4.0);
    EXPECT_DOUBLE_EQ(c.q_star_alt(), 4.0);
    EXPECT_THROW((void)NormParams::make(2.0, 2.0), InvalidInput);
    EXPECT_THROW((void)NormParams::make(0.5), InvalidInput);
}

TEST(EmbeddingC9, Table) {
    EXPECT_NEAR(embedding_constant_c9(Weight::constant(), kInf), kTwoPi, 1e-14);
    EXPECT_NEAR(embedding_constant_c9(Weight::constant(), 2.0), 1.0 / std::sqrt(kTwoPi), 1e-12);
    EXPECT_NEAR(embedding_constant_c9(Weight::power(0.0, -0.5), 1.0), std::sqrt(kPi), 1e-6);
    EXPECT_THROW((void)embedding_constant_c9(Weight::power(0.0, 0.5), 1.0), NotInClassError);
}

TEST(EmbeddingC9, PrintedEntryMissesFactorTwoPi) {
    const auto one = SampledFunction::from_rule(FunctionRule::constant(1.0), 64);
    const double c9 = embedding_constant_c9(Weight::constant(), 2.0);
    EXPECT_GT(weighted_norm(one, 1.0, Weight::constant()), c9 * weighted_norm(one, 2.0, Weight::constant()));
}

// Holder with the A_p condition gives ||f||_1 <= 2 pi [gamma]_p^{1/p} ||gamma||_1^{-1/p} ||f||_{p,gamma}.
TEST(EmbeddingC9, ChainHoldsOnTestFamily) {
    struct Case {
        double p;
        Weight w;
    };
    const std::vector<Case> cases = {{2.0, Weight::constant()}, {2.0, Weight::power(0.0, 0.5)},
                                     {1.0, Weight::power(0.0, -0.5)}, {3.0, Weight::power(0.0, 0.5)}};
    for (const auto& c : cases) {
        const double c9 = (c.p > 1.0 ? kTwoPi : 1.0) * embedding_constant_c9(c.w, c.p);
        const double l1w = weight_l1_norm(c.w);
        for (const auto& nf : default_functions(5)) {
            const TrigPoly u = surrogate(nf.rule, 2048);
            const double mid = weighted_norm(u, c.p, c.w);
            EXPECT_LE(weighted_norm(u, 1.0, Weight::constant()), c9 * mid * (1 + 1e-9)) << nf.id;
            EXPECT_LE(mid, std::pow(l1w, 1.0 / c.p) * sup_norm(u) * (1 + 1e-9)) << nf.id;
        }
    }
}
