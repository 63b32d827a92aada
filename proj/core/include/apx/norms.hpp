#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "apx/fourier.hpp"
#include "apx/weights.hpp"

namespace apx {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exponent pair (p, q) with theta = 1/p - 1/q and q* (q if finite, else 1).
struct NormParams {
    double p = 2.0;
    std::optional<double> q;
    double theta = 0.0;
    double q_star = 1.0;

    /// Validates 1 <= p < q <= inf.
    static NormParams make(double p, std::optional<double> q = std::nullopt);
    /// The alternative exponent q_*: q when 1 < p < inf (and q finite), 1 when q = inf or p = 1.
    [[nodiscard]] double q_star_alt() const;
};

/// A weighted Lebesgue norm ||.||_{p,gamma}.
struct LpNorm {
    double p = 2.0;
    Weight w = Weight::constant();
};

/// Grid used for norms of a polynomial of the given degree against w.
[[nodiscard]] std::size_t default_norm_grid(const Weight& w, int degree);

/// ||f||_{p,gamma}; p = inf is the grid maximum (weight ignored).
[[nodiscard]] double weighted_norm(const SampledFunction& f, double p, const Weight& w);
/// Norm from grid values of size N (uniform grid) plus an evaluator for the rule's window nodes.
[[nodiscard]] double weighted_norm(std::span<const double> values, const std::function<double(double)>& off_grid,
                                   double p, const Weight& w);
/// ||U||_{p,gamma} for a polynomial; grid = 0 selects default_norm_grid.
[[nodiscard]] double weighted_norm(const TrigPoly& u, double p, const Weight& w, std::size_t grid = 0);
/// ||g||_{p,gamma} for a pointwise evaluator, integrating piecewise between the kinks of g and the
/// special points of w with graded Gauss panels. band sizes the panels (about 8/band wide).
[[nodiscard]] double accurate_norm(const std::function<double(double)>& g, double p, const Weight& w,
                                   const std::vector<double>& kinks, int band);
/// max |U| via oversampled grid and Newton polish of the top local maxima.
[[nodiscard]] double sup_norm(const TrigPoly& u);

/// The printed embedding constant C_9 with ||f||_1 <= C_9 ||f||_{p,gamma}.
[[nodiscard]] double embedding_constant_c9(const Weight& w, double p);

}  // namespace apx
