#pragma once

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace apx {

enum class WeightFamily { constant, power, product, tabulated };

/// One factor |x - x0|^alpha with periodic distance.
struct PowerFactor {
    double x0 = 0.0;
    double alpha = 0.0;
};

/// Point where the weight is not smooth: a zero/pole (graded) or a kink (exponent 0).
struct SpecialPoint {
    double x = 0.0;
    double exponent = 0.0;
    bool graded = true;
};

struct ApEstimate {
    bool in_class = false;
    double value = std::numeric_limits<double>::quiet_NaN();
    /// estimate(all levels) / estimate(all but the finest level)
    double refinement_trend = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> by_level;  // running sup up to each width level
    std::string note;
};

struct S1Estimate {
    bool in_class = false;
    double gamma1 = std::numeric_limits<double>::quiet_NaN();
    double refinement_trend = std::numeric_limits<double>::quiet_NaN();
    double c8 = 0.0;
    std::string note;
};

struct AinfEstimate {
    double c7 = 0.0;  // E containing I, as printed
    double p0 = 0.0;
    double c7_inside = 0.0;  // E inside I
    double p0_inside = 0.0;
};

struct WeightCache;

/// 2 pi-periodic weight with declared singular points and cached class constants.
class Weight {
public:
    static Weight constant(double c = 1.0);
    static Weight power(double x0, double alpha, double scale = 1.0);
    static Weight product(std::vector<PowerFactor> factors, double scale = 1.0);
    /// Periodic linear interpolation of samples on the uniform grid of size values.size().
    static Weight tabulated(std::vector<double> values, std::vector<SpecialPoint> declared = {}, double scale = 1.0);

    [[nodiscard]] WeightFamily family() const { return family_; }
    [[nodiscard]] double scale() const { return scale_; }
    [[nodiscard]] const std::vector<PowerFactor>& factors() const { return factors_; }
    [[nodiscard]] const std::vector<double>& table() const { return table_; }

    /// Pointwise value; throws PoleError exactly at a negative-exponent singularity.
    [[nodiscard]] double operator()(double x) const;
    /// Points that need graded or split quadrature, sorted by location.
    [[nodiscard]] const std::vector<SpecialPoint>& special_points() const { return special_; }
    [[nodiscard]] bool is_constant() const { return family_ == WeightFamily::constant; }
    [[nodiscard]] bool has_singularities() const;
    /// Smallest exponent over graded special points (0 if none).
    [[nodiscard]] double min_exponent() const;
    /// Throws DivergenceError when some exponent is <= -1.
    void require_integrable() const;
    /// Weight scaled by c > 0 (fresh cache).
    [[nodiscard]] Weight scaled(double c) const;
    /// Canonical text form, used as cache key.
    [[nodiscard]] const std::string& descriptor() const { return descriptor_; }

    [[nodiscard]] WeightCache& cache() const { return *cache_; }

private:
    Weight() = default;
    void finalize();
    [[nodiscard]] Weight with_family(WeightFamily f) const;

    WeightFamily family_ = WeightFamily::constant;
    double scale_ = 1.0;
    std::vector<PowerFactor> factors_;
    std::vector<double> table_;
    std::vector<SpecialPoint> special_;
    std::string descriptor_;
    std::shared_ptr<WeightCache> cache_;
};

struct WeightCache {
    std::mutex mu;
    std::map<double, ApEstimate> ap;
    std::optional<S1Estimate> s1;
    std::optional<AinfEstimate> ainf;
    std::optional<double> doubling;
    std::optional<double> l1;
};

/// Muckenhoupt constant [gamma]_p over the dyadic interval family (widths 2 pi 2^-l, l = 0..14).
[[nodiscard]] ApEstimate muckenhoupt_constant(const Weight& w, double p);
/// [gamma]_1 (sup of interval averages over the same family) and C_8 (essential lower bound).
[[nodiscard]] S1Estimate s1_constants(const Weight& w);
/// Doubling constant C_6 over the dyadic family.
[[nodiscard]] double doubling_constant(const Weight& w);
/// Fitted (C_7, p_0) for both readings of the A_infinity condition.
[[nodiscard]] AinfEstimate ainf_constants(const Weight& w);
/// Integral of the weight over the circle.
[[nodiscard]] double weight_l1_norm(const Weight& w);

struct ClassReport {
    double p = 2.0;
    bool in_ap = false;  // meaningful for 1 < p < inf
    bool in_s1 = false;  // meaningful for p = 1
    bool in_as = false;  // membership in the class required for exponent p
    std::optional<ApEstimate> ap;
    std::optional<S1Estimate> s1;
    AinfEstimate ainf;
    double doubling_c6 = 0.0;
    double l1_norm = 0.0;
    std::string summary;
};

/// Class verdicts for exponent p in [1, inf]; fills the weight's cache.
[[nodiscard]] ClassReport classify_weight(const Weight& w, double p);

}  // namespace apx
