#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apx/functions.hpp"

namespace apx {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Reduce x to [-pi, pi).
[[nodiscard]] double wrap_angle(double x);

[[nodiscard]] bool is_power_of_two(std::size_t n);
[[nodiscard]] std::size_t next_power_of_two(std::size_t n);

/// Uniform grid x_j = -pi + 2 pi j / n on [-pi, pi).
class PeriodicGrid {
public:
    explicit PeriodicGrid(std::size_t n_points);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] double spacing() const { return kTwoPi / static_cast<double>(n_); }
    [[nodiscard]] double node(std::size_t j) const {
        return -kPi + kTwoPi * static_cast<double>(j) / static_cast<double>(n_);
    }
    [[nodiscard]] std::vector<double> nodes() const;

    bool operator==(const PeriodicGrid&) const = default;

private:
    std::size_t n_;
};

/// Real trigonometric polynomial a0 + sum_k a_k cos kx + b_k sin kx.
/// a[0] and b[0] are unused placeholders so that a[k] is the k-th coefficient.
class TrigPoly {
public:
    TrigPoly() : a_(1, 0.0), b_(1, 0.0) {}
    explicit TrigPoly(int degree);
    TrigPoly(double a0, std::vector<double> a, std::vector<double> b);

    static TrigPoly constant(double c);
    static TrigPoly cosine(int k, double amp = 1.0);
    static TrigPoly sine(int k, double amp = 1.0);

    [[nodiscard]] int degree() const { return static_cast<int>(a_.size()) - 1; }
    /// Index of the last nonzero coefficient pair.
    [[nodiscard]] int effective_degree() const;

    [[nodiscard]] double a0() const { return a_[0]; }
    [[nodiscard]] double a(int k) const { return k <= degree() ? a_[static_cast<std::size_t>(k)] : 0.0; }
    [[nodiscard]] double b(int k) const { return k <= degree() && k > 0 ? b_[static_cast<std::size_t>(k)] : 0.0; }
    void set_a0(double v) { a_[0] = v; }
    void set(int k, double ak, double bk);

    /// Complex coefficient c_k = (a_k - i b_k)/2 for k >= 1, c_0 = a0.
    [[nodiscard]] cplx c(int k) const;

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] TrigPoly derivative(int r = 1) const;
    [[nodiscard]] TrigPoly truncated(int n) const;
    [[nodiscard]] TrigPoly resized(int n) const;

    TrigPoly& operator+=(const TrigPoly& o);
    TrigPoly& operator-=(const TrigPoly& o);
    TrigPoly& operator*=(double s);
    friend TrigPoly operator+(TrigPoly x, const TrigPoly& y) { return x += y; }
    friend TrigPoly operator-(TrigPoly x, const TrigPoly& y) { return x -= y; }
    friend TrigPoly operator*(TrigPoly x, double s) { return x *= s; }
    friend TrigPoly operator*(double s, TrigPoly x) { return x *= s; }
    /// Product of two polynomials (degree adds).
    [[nodiscard]] TrigPoly times(const TrigPoly& o) const;

    /// pi (2 a0^2 + sum a_k^2 + b_k^2), the exact integral of p^2 over the circle.
    [[nodiscard]] double l2_norm_squared() const;

private:
    std::vector<double> a_;
    std::vector<double> b_;
};

/// Periodic function known on a uniform grid, optionally with a closed-form rule.
struct SampledFunction {
    PeriodicGrid grid{4};
    std::vector<double> values;
    std::optional<FunctionRule> rule;

    SampledFunction() = default;
    SampledFunction(PeriodicGrid g, std::vector<double> v, std::optional<FunctionRule> r = std::nullopt);

    /// Samples of a closed-form rule.
    static SampledFunction from_rule(const FunctionRule& rule, std::size_t n_points);
};

/// Fourier multiplier indexed by |k|; acts as c_k -> m[k] c_k, c_{-k} -> conj(m[k]) c_{-k}.
struct Multiplier {
    std::vector<cplx> m;

    [[nodiscard]] std::size_t max_frequency() const { return m.empty() ? 0 : m.size() - 1; }
    [[nodiscard]] Multiplier compose(const Multiplier& o) const;
    [[nodiscard]] Multiplier power(int r) const;
};

/// Degree N/2-1 interpolant of the samples.
[[nodiscard]] TrigPoly analyze(const SampledFunction& f);
[[nodiscard]] TrigPoly analyze(std::span<const double> values);
[[nodiscard]] SampledFunction synthesize(const TrigPoly& p, const PeriodicGrid& g);
[[nodiscard]] std::vector<double> synthesize_values(const TrigPoly& p, std::size_t n_points);
[[nodiscard]] TrigPoly apply_multiplier(const TrigPoly& p, const Multiplier& m);

/// Discrete sums S_k = sum_j g_j e^{i k x_j} for k = 0..kmax on the uniform grid of size g.size().
[[nodiscard]] std::vector<cplx> grid_exponential_sums(std::span<const double> g, std::size_t kmax);

/// Evaluates a polynomial at many points quickly (upsampling + local interpolation for high degree).
class PolyEvaluator {
public:
    explicit PolyEvaluator(const TrigPoly& p);
    [[nodiscard]] double operator()(double x) const;

private:
    TrigPoly p_;
    bool direct_ = true;
    std::vector<double> fine_;
    double fine_h_ = 0.0;
};

/// Off-grid evaluator for a sampled function: closed-form rule when present, interpolant otherwise.
class FunctionEvaluator {
public:
    explicit FunctionEvaluator(const SampledFunction& f);
    [[nodiscard]] double operator()(double x) const;

private:
    std::optional<FunctionRule> rule_;
    std::unique_ptr<PolyEvaluator> interp_;
};

}  // namespace apx
