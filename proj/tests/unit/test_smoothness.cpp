#include <gtest/gtest.h>

#include <cmath>

#include "apx/errors.hpp"
#include "apx/harness.hpp"
#include "apx/smoothness.hpp"

using namespace apx;

namespace {

const LpNorm kL2{2.0, Weight::constant()};

TrigPoly abs_sin() { return surrogate(FunctionRule::abs_sin_pow(1.0), 8192); }

}  // namespace

TEST(Modulus, ConstantVanishes) {
    for (int k : {1, 2, 3}) {
        for (double v : {0.1, 1.0}) EXPECT_EQ(modulus(TrigPoly::constant(2.0), k, v, kL2), 0.0);
    }
}

TEST(Modulus, SingleModeClosedForm) {
    for (double v : {0.05, 0.4, 1.0}) {
        const cplx m = (std::exp(cplx(0.0, v)) - 1.0) / cplx(0.0, v);
        EXPECT_NEAR(modulus(TrigPoly::cosine(1), 1, v, kL2), std::sqrt(kPi) * std::abs(1.0 - m), 1e-13);
    }
}

TEST(Modulus, VanishesMonotonicallyForAbsSin) {
    const TrigPoly f = abs_sin();
    double prev = kInf;
    for (int j = 0; j <= 10; ++j) {
        const double w = modulus(f, 1, std::ldexp(1.0, -j), kL2);
        EXPECT_LT(w, prev);
        prev = w;
    }
    EXPECT_LT(prev, 0.01);
}

TEST(Modulus, SampledPathAgrees) {
    const TrigPoly u = random_poly(16, 3);
    const auto s = synthesize(u, PeriodicGrid(512));
    EXPECT_NEAR(modulus(SampledFunction(s.grid, s.values), 2, 0.3, kL2), modulus(u, 2, 0.3, kL2), 1e-9);
}

TEST(Modulus, StepAboveOneRejected) {
    EXPECT_THROW((void)modulus(TrigPoly::cosine(1), 1, 1.5, kL2), InvalidInput);
}

TEST(Modulus, Subadditive) {
    const TrigPoly f = random_poly(20, 1), g = random_poly(20, 2);
    const LpNorm nm{1.5, Weight::power(0.0, 0.5)};
    for (double v : {0.05, 0.5}) {
        EXPECT_LE(modulus(f + g, 2, v, nm), modulus(f, 2, v, nm) + modulus(g, 2, v, nm) + 1e-10);
    }
}

TEST(Modulus, OrderReductionAndSmoothBound) {
    const double c1 = explicit_constants(Weight::constant(), 2.0).get("C1");
    const TrigPoly f = random_poly(24, 6);
    for (double v : {0.01, 0.1, 1.0}) {
        for (int k : {1, 2}) {
            EXPECT_LE(modulus(f, k + 1, v, kL2), (1 + c1) * modulus(f, k, v, kL2));
            const double bound = std::pow(c1 / 2.0, k) * std::pow(v, k) * weighted_norm(f.derivative(k), 2.0, kL2.w);
            EXPECT_LE(modulus(f, k, v, kL2), bound);
        }
    }
}

TEST(ModulusVariants, ConstantVanishes) {
    const ModulusVariants mv = modulus_variants(TrigPoly::constant(1.0), 1, 0.5, kL2);
    EXPECT_EQ(mv.gadjieva, 0.0);
    EXPECT_EQ(mv.ky, 0.0);
}

TEST(ModulusVariants, KyDominatesSteklovModulus) {
    const TrigPoly f = abs_sin();
    for (int j = 1; j <= 8; ++j) {
        const double v = std::ldexp(1.0, -j);
        EXPECT_LE(modulus(f, 1, v, kL2), modulus_variants(f, 1, v, kL2).ky * (1 + 1e-9)) << v;
    }
}

TEST(ModulusVariants, GadjievaBandAgainstSecondOrder) {
    const TrigPoly f = abs_sin();
    double lo = kInf, hi = 0.0;
    for (int j = 1; j <= 8; ++j) {
        const double v = std::ldexp(1.0, -j);
        const double r = modulus(f, 2, v, kL2) / modulus_variants(f, 1, v, kL2).gadjieva;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi / lo, 10.0);
}

TEST(KFunctional, PolynomialAndConstant) {
    EXPECT_EQ(k_functional_upper(TrigPoly::constant(3.0), 2, 0.1, kL2).value, 0.0);
    const TrigPoly u = random_poly(4, 8);
    const double v = 0.05;
    const double smooth = std::pow(v, 2) * weighted_norm(u.derivative(2), 2.0, kL2.w);
    EXPECT_LE(k_functional_upper(u, 2, v, kL2).value, smooth * (1 + 1e-12));
}

TEST(KFunctional, DominatesScaledModulus) {
    const TrigPoly f = abs_sin();
    const LpNorm nm{2.0, Weight::power(0.0, 0.5)};
    for (int r : {1, 2}) {
        const double band = std::pow(1 + explicit_constants(nm.w, 2.0, r).get("C1"), r);
        for (int n : {4, 16, 64}) {
            const KFunctionalBound kb = k_functional_upper(f, r, 1.0 / n, nm);
            EXPECT_LE(modulus(f, r, 1.0 / n, nm), band * kb.value);
            EXPECT_FALSE(kb.candidate.empty());
        }
    }
}

TEST(Realization, Examples) {
    const TrigPoly u = random_poly(6, 12);
    EXPECT_NEAR(realization(u, 2, 8, kL2, u), std::pow(8.0, -2) * weighted_norm(u.derivative(2), 2.0, kL2.w), 1e-12);
    EXPECT_EQ(realization(TrigPoly::constant(1.0), 1, 4, kL2, TrigPoly::constant(1.0)), 0.0);
    EXPECT_THROW((void)realization(u, 1, 4, kL2, u), InvalidInput);
}
