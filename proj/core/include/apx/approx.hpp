#pragma once

#include <string>
#include <vector>

#include "apx/fourier.hpp"
#include "apx/functions.hpp"
#include "apx/norms.hpp"

namespace apx {

struct SolverInfo {
    std::string path;  // exact-L2 | IRLS | minimax-homotopy | near-best-VP
    int iterations = 0;
    double relative_step = 0.0;
    bool converged = true;
    /// |error on the 4x refined rule - error on the solver rule|
    double discretization_error = 0.0;
};

struct ApproxResult {
    TrigPoly poly;
    double error = 0.0;
    SolverInfo info;
};

struct ApproxOptions {
    bool force_irls = false;  // run IRLS even for p = 2
    double tolerance = 1e-8;
    int max_iterations = 500;
};

/// Upper bound of E_n(f)_{p,gamma}; exact (to quadrature accuracy) for p = 2.
[[nodiscard]] ApproxResult best_approx(const FunctionRule& f, int n, const LpNorm& nm, const ApproxOptions& opt = {});
[[nodiscard]] ApproxResult best_approx(const TrigPoly& f, int n, const LpNorm& nm, const ApproxOptions& opt = {});

/// E_k(f)_{2,gamma} for every k = 0..kmax from one factorization.
[[nodiscard]] std::vector<double> l2_best_errors(const FunctionRule& f, int kmax, const Weight& w);

/// V_n f (degree 2n - 1) and its error.
[[nodiscard]] ApproxResult near_best_vp(const FunctionRule& f, int n, const LpNorm& nm);
[[nodiscard]] ApproxResult near_best_vp(const TrigPoly& f, int n, const LpNorm& nm);

/// Fourier coefficients of f up to degree n (accurate quadrature).
[[nodiscard]] TrigPoly fourier_partial_sum(const FunctionRule& f, int n);

struct SimultaneousRow {
    int k = 0;
    double err_best = 0.0;   // ||f^(k) - (u*)^(k)||
    double err_vp = 0.0;     // ||f^(k) - (V_n f)^(k)||
    double bound_best = 0.0; // n^(k-r) E_n(f^(r))
    double bound_mod = 0.0;  // n^(k-r) Omega_1(f^(r), 1/n)
};

/// Derivative errors of the best and de la Vallee-Poussin approximants for k = 0..r.
[[nodiscard]] std::vector<SimultaneousRow> simultaneous_errors(const FunctionRule& f, int n, int r, const LpNorm& nm);

}  // namespace apx
