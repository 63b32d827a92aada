#pragma once

#include <string>

#include "apx/fourier.hpp"
#include "apx/norms.hpp"

namespace apx {

/// Omega_k(f, v) = ||(I - T_v)^k f||_{p,gamma}, multiplier path. Requires 0 <= v <= 1.
[[nodiscard]] double modulus(const TrigPoly& f, int k, double v, const LpNorm& nm);
/// Same modulus through repeated quadrature of the Steklov mean.
[[nodiscard]] double modulus(const SampledFunction& f, int k, double v, const LpNorm& nm);

/// Competitor moduli. Both suprema are taken over a 16-point geometric h-grid (equal steps for
/// the product form), so both values are lower bounds of the printed suprema.
struct ModulusVariants {
    double gadjieva = 0.0;  // sup_h ||(I - Phi_h)^r f||
    double ky = 0.0;        // sup_h ||(1/h) int_0^h |Delta_t^r f| dt||
    double h_gadjieva = 0.0;
    double h_ky = 0.0;
};

[[nodiscard]] ModulusVariants modulus_variants(const TrigPoly& f, int r, double v, const LpNorm& nm);

struct KFunctionalBound {
    double value = 0.0;
    std::string candidate;  // "A_delta", "V_n", "D_n" or "zero"
    double distance = 0.0;  // ||f - g||
    double smooth = 0.0;    // v^r ||g^(r)||
};

/// Upper bound of K_r(f, v) over the candidates A_v^r f, V_n f (n = ceil(1/v)), D_n f and 0.
[[nodiscard]] KFunctionalBound k_functional_upper(const TrigPoly& f, int r, double v, const LpNorm& nm);

/// ||f - u|| + n^-r ||u^(r)|| for an approximant u of degree <= n.
[[nodiscard]] double realization(const TrigPoly& f, int r, int n, const LpNorm& nm, const TrigPoly& u);

}  // namespace apx
