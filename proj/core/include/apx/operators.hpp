#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "apx/fourier.hpp"

namespace apx {

enum class OpKind {
    steklov_T,
    window_S,
    symmetric_Phi,
    smooth_R,
    a_delta,
    upsilon,
    fejer,
    vallee_poussin,
    jackson_D,
    difference,
    partial_sum,
};

/// Operator selector with its parameters.
struct OperatorTag {
    OpKind kind = OpKind::steklov_T;
    double s1 = 0.0;  // v, lambda, h, l or t
    double s2 = 0.0;  // tau for window_S
    int n = 0;        // degree parameter
    int r = 1;        // order for a_delta and difference

    static OperatorTag steklov(double v);
    static OperatorTag window(double lambda, double tau);
    static OperatorTag symmetric(double h);
    static OperatorTag smooth_r(double v);
    static OperatorTag a_delta(double v, int r);
    static OperatorTag upsilon(double l);
    static OperatorTag fejer(int n);
    static OperatorTag vallee_poussin(int n);
    static OperatorTag jackson(int n);
    static OperatorTag difference(double t, int r);
    static OperatorTag partial_sum(int n);

    [[nodiscard]] std::string name() const;
    void validate() const;
};

/// m(k) for k = 0..kmax.
[[nodiscard]] Multiplier multiplier(const OperatorTag& tag, std::size_t kmax);
/// Multiplier of (I - T_v)^order, evaluated without cancellation for small k v.
[[nodiscard]] Multiplier steklov_complement(double v, int order, std::size_t kmax);

/// Multiplier path.
[[nodiscard]] TrigPoly apply(const OperatorTag& tag, const TrigPoly& p);
/// Quadrature path: evaluates the defining integral at every grid node.
[[nodiscard]] SampledFunction apply(const OperatorTag& tag, const SampledFunction& f);

[[nodiscard]] TrigPoly trig_derivative(const TrigPoly& p, int r);

struct JacksonKernel {
    int n = 2;
    double kappa = 0.0;
    SampledFunction samples;  // J_{2,n} on a 16384-point grid
};

/// J_{2,n}(x) = (sin(nx/2)/sin(x/2))^4 / kappa with (1/pi) * integral = 1.
[[nodiscard]] JacksonKernel jackson_kernel(int n);

/// Kernel family k_lambda for the (cup) conditions.
struct KernelSpec {
    std::string name = "fejer";  // fejer | jackson | poisson | steklov | custom | custom-tabulated
    double rho = 0.5;
    std::optional<std::array<double, 3>> declared;  // (C3, C4, C5)
    std::function<double(double lambda, double x)> custom;
    std::vector<double> table;  // lambda-independent samples on a uniform grid
};

struct KernelConditions {
    double c3 = 0.0, c4 = 0.0, c5 = 0.0, rho = 0.0;
    bool pass = false;
    std::vector<std::array<double, 4>> per_lambda;  // (lambda, C3, C4, C5)
    std::string diagnostics;
};

/// Smallest (C3, C4, C5) over lambda in {1, 2, 4, ..., 256}.
[[nodiscard]] KernelConditions check_kernel_conditions(const KernelSpec& k);

/// Kernel value used by check_kernel_conditions.
[[nodiscard]] double kernel_value(const KernelSpec& k, double lambda, double x);

}  // namespace apx
