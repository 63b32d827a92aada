#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace apx::detail {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

/// Gauss-Legendre rule with n nodes (cached).
const GaussRule& gauss_legendre(int n);

/// Integral of f over [a, b] with composite n-node Gauss panels of width <= max_width.
double integrate_panels(const std::function<double(double)>& f, double a, double b, double max_width, int n = 8);

/// Integral of f over [s, s + len] (len may be negative) where f ~ C |x - s|^exponent near s.
/// Uses `levels` geometric panels toward s and a power-law tail for the innermost piece.
double integrate_graded(const std::function<double(double)>& f, double s, double len, double exponent,
                        int levels = 40, double max_width = 0.0);

/// Nodes and weights of integrate_panels / integrate_graded, appended to xs and ws.
void panel_nodes(double a, double b, double max_width, int n, std::vector<double>& xs, std::vector<double>& ws);
void graded_nodes(double s, double len, double exponent, int levels, double max_width, std::vector<double>& xs,
                  std::vector<double>& ws);

}  // namespace apx::detail
