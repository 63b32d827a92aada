#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "apx/fourier.hpp"
#include "apx/weights.hpp"

namespace apx {

/// Node/weight rule for integrals against a weight on a uniform grid:
/// sum_j grid_w[j] F(x_j) + sum_q ws[q] F(xs[q]).
/// Grid nodes carry the smooth part of a partition of unity; extra nodes resolve windows
/// around the weight's special points with geometrically graded Gauss panels.
struct WeightedRule {
    std::size_t n = 0;
    std::vector<double> grid_w;
    std::vector<double> xs;
    std::vector<double> ws;
};

/// Free-node rule sum_q w[q] F(x[q]) for integrals of F * gamma (gamma folded into w).
struct NodeRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Rule adapted to a band-limited-ish integrand with the given kinks: uniform trapezoid when there are
/// no kinks and no special points of w, otherwise composite Gauss panels split at every breakpoint and
/// graded toward it. `refine` shrinks panels (or grows the grid) by that factor.
[[nodiscard]] NodeRule adaptive_rule(const Weight& w, const std::vector<double>& kinks, int band, int refine = 1);

/// Cached rule for (weight, grid size). Throws DivergenceError for exponents <= -1.
[[nodiscard]] std::shared_ptr<const WeightedRule> weighted_rule(const Weight& w, std::size_t n);

/// Applies a rule to grid values plus an off-grid evaluator for the window nodes.
[[nodiscard]] double apply_rule(const WeightedRule& rule, std::span<const double> grid_values,
                                const std::function<double(double)>& off_grid);

/// Integral of f * gamma over the circle.
[[nodiscard]] double quadrature(const SampledFunction& f, const Weight& w);
/// Integral of f over the circle (periodic trapezoid rule).
[[nodiscard]] double quadrature(const SampledFunction& f);

}  // namespace apx
