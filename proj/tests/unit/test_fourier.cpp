#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "apx/errors.hpp"
#include "apx/fourier.hpp"
#include "apx/harness.hpp"
#include "apx/quadrature.hpp"

using namespace apx;

namespace {

TrigPoly seeded_poly(int degree, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TrigPoly p(degree);
    p.set_a0(u(rng));
    for (int k = 1; k <= degree; ++k) p.set(k, u(rng), u(rng));
    return p;
}

double max_coeff_diff(const TrigPoly& x, const TrigPoly& y) {
    const int n = std::max(x.degree(), y.degree());
    double d = std::abs(x.a0() - y.a0());
    for (int k = 1; k <= n; ++k) d = std::max({d, std::abs(x.a(k) - y.a(k)), std::abs(x.b(k) - y.b(k))});
    return d;
}

}  // namespace

TEST(PeriodicGrid, NodesCoverHalfOpenInterval) {
    PeriodicGrid g(16);
    EXPECT_DOUBLE_EQ(g.node(0), -kPi);
    for (std::size_t j = 1; j < g.size(); ++j) EXPECT_NEAR(g.node(j) - g.node(j - 1), g.spacing(), 1e-15);
    EXPECT_LT(g.node(15), kPi);
    EXPECT_THROW(PeriodicGrid(12), InvalidInput);
}

TEST(Analyze, ConstantSamples) {
    const TrigPoly p = analyze(std::vector<double>(32, 1.0));
    EXPECT_NEAR(p.a0(), 1.0, 1e-14);
    for (int k = 1; k <= p.degree(); ++k) {
        EXPECT_NEAR(p.a(k), 0.0, 1e-14);
        EXPECT_NEAR(p.b(k), 0.0, 1e-14);
    }
}

TEST(Analyze, PureMode) {
    const auto f = SampledFunction::from_rule(FunctionRule::cos_mode(3), 64);
    const TrigPoly p = analyze(f);
    EXPECT_NEAR(p.a(3), 1.0, 1e-12);
    EXPECT_LT(max_coeff_diff(p, TrigPoly::cosine(3)), 1e-12);
}

TEST(Analyze, AbsSinSecondCoefficient) {
    // |sin x| = 2/pi - (4/pi) sum cos(2mx)/(4m^2 - 1)
    const TrigPoly p = analyze(SampledFunction::from_rule(FunctionRule::abs_sin_pow(1.0), 1024));
    EXPECT_NEAR(p.a(2), -4.0 / (3.0 * kPi), 1e-5);
    EXPECT_NEAR(p.a0(), 2.0 / kPi, 1e-5);
}

TEST(Analyze, RejectsNonFinite) {
    std::vector<double> v(16, 0.0);
    v[3] = std::nan("");
    EXPECT_THROW((void)analyze(v), InvalidInput);
}

TEST(Synthesize, ZeroAndCosine) {
    const auto z = synthesize(TrigPoly(4), PeriodicGrid(16));
    for (double v : z.values) EXPECT_EQ(v, 0.0);
    const auto c = synthesize(TrigPoly::cosine(1), PeriodicGrid(8));
    for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(c.values[j], std::cos(c.grid.node(j)), 1e-15);
}

TEST(Synthesize, RoundTripRandomDegree16) {
    const TrigPoly p = seeded_poly(16, 7);
    const TrigPoly q = analyze(synthesize(p, PeriodicGrid(64)));
    EXPECT_LT(max_coeff_diff(p, q), 1e-12);
}

TEST(Synthesize, UndersizedGridThrows) {
    EXPECT_THROW((void)synthesize(seeded_poly(16, 1), PeriodicGrid(16)), AliasingError);
}

TEST(ApplyMultiplier, IdentityAndProjection) {
    const TrigPoly p = seeded_poly(6, 3);
    Multiplier one{std::vector<cplx>(7, 1.0)};
    EXPECT_LT(max_coeff_diff(apply_multiplier(p, one), p), 1e-15);

    Multiplier proj{std::vector<cplx>(2, 0.0)};
    proj.m[0] = 1.0;
    const TrigPoly q = apply_multiplier(TrigPoly::constant(1.0) + TrigPoly::cosine(1), proj);
    EXPECT_NEAR(q.a0(), 1.0, 1e-15);
    EXPECT_NEAR(q.a(1), 0.0, 1e-15);
}

TEST(ApplyMultiplier, SteklovAverageOfCosine) {
    const double v = kPi;
    Multiplier m{{1.0, (std::exp(cplx(0.0, v)) - 1.0) / cplx(0.0, v)}};
    const TrigPoly q = apply_multiplier(TrigPoly::cosine(1), m);
    EXPECT_NEAR(std::sqrt(q.l2_norm_squared()), std::sqrt(kPi) * 2.0 / kPi, 1e-12);
}

TEST(ApplyMultiplier, MissingFrequencyThrows) {
    Multiplier m{{1.0, 1.0}};
    EXPECT_THROW((void)apply_multiplier(TrigPoly::cosine(3), m), InvalidInput);
}

TEST(ApplyMultiplier, Linear) {
    const TrigPoly p = seeded_poly(10, 11), q = seeded_poly(10, 12);
    Multiplier m;
    for (int k = 0; k <= 10; ++k) m.m.push_back(k == 0 ? cplx(1.0) : std::polar(1.0 / (1 + k), 0.3 * k));
    const TrigPoly lhs = apply_multiplier(2.5 * p - 0.75 * q, m);
    const TrigPoly rhs = 2.5 * apply_multiplier(p, m) - 0.75 * apply_multiplier(q, m);
    EXPECT_LT(max_coeff_diff(lhs, rhs), 1e-12);
}

TEST(Quadrature, Examples) {
    const Weight one = Weight::constant();
    EXPECT_NEAR(quadrature(SampledFunction::from_rule(FunctionRule::constant(1.0), 64), one), kTwoPi, 1e-12);
    const auto cos2 = synthesize(TrigPoly::cosine(1).times(TrigPoly::cosine(1)), PeriodicGrid(64));
    EXPECT_NEAR(quadrature(cos2, one), kPi, 1e-10);
    const double got = quadrature(SampledFunction::from_rule(FunctionRule::constant(1.0), 256), Weight::power(0.0, -0.5));
    EXPECT_NEAR(got, 4.0 * std::sqrt(kPi), 1e-8);
}

TEST(Quadrature, DivergentWeightThrows) {
    const auto f = SampledFunction::from_rule(FunctionRule::constant(1.0), 64);
    EXPECT_THROW((void)quadrature(f, Weight::power(0.0, -1.0)), DivergenceError);
}

TEST(Quadrature, ParsevalOnGrid) {
    const TrigPoly p = seeded_poly(20, 5);
    const auto sq = synthesize(p.times(p), PeriodicGrid(128));
    double expect = 2.0 * p.a0() * p.a0();
    for (int k = 1; k <= 20; ++k) expect += p.a(k) * p.a(k) + p.b(k) * p.b(k);
    EXPECT_NEAR(quadrature(sq), kPi * expect, 1e-10 * kPi * expect);
}

TEST(Quadrature, OddFunctionEvenWeight) {
    const auto f = synthesize(TrigPoly::sine(3) + TrigPoly::sine(1, 0.4), PeriodicGrid(256));
    EXPECT_NEAR(quadrature(f, Weight::power(0.0, 0.5)), 0.0, 1e-10);
    EXPECT_NEAR(quadrature(f, Weight::power(0.0, -0.5)), 0.0, 1e-10);
}

TEST(TrigPoly, ConstantStoredDirectly) {
    const TrigPoly c = TrigPoly::constant(3.0);
    EXPECT_EQ(c.a0(), 3.0);
    EXPECT_EQ(c(1.234), 3.0);
}

TEST(TrigPoly, RandomPolyIsDeterministic) {
    const TrigPoly a = random_poly(32, 99), b = random_poly(32, 99), c = random_poly(32, 100);
    EXPECT_EQ(max_coeff_diff(a, b), 0.0);
    EXPECT_GT(max_coeff_diff(a, c), 0.0);
}
