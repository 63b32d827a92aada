#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "apx/fourier.hpp"
#include "apx/functions.hpp"
#include "apx/norms.hpp"
#include "apx/weights.hpp"

namespace apx {

struct NamedFunction {
    std::string id;
    FunctionRule rule;
};

struct NamedWeight {
    std::string id;
    Weight w;
};

/// Exponent pair and weight for one sweep case.
struct NormCase {
    double p = 2.0;
    std::optional<double> q;
    NamedWeight weight{"one", Weight::constant()};
};

/// Identifiers of the verifiable inequalities.
[[nodiscard]] const std::vector<std::string>& check_ids();

struct CheckSpec {
    std::string id;     // label used for output files
    std::string check;  // one of check_ids()
    std::vector<NamedFunction> functions;
    std::vector<NormCase> norms;
    std::vector<int> n;          // degrees
    std::vector<double> v;       // steps / deltas
    std::vector<int> orders;     // r (or k) values
    std::vector<double> lambdas;
    int j = 1;                   // modulus order in the (p, q) best-approximation family
    std::uint64_t seed = 0;
    int samples = 20;            // random polynomials per sweep point
    int poly_degree = 32;        // degree of random test polynomials when not tied to n
    int resolution = 8192;       // samples used to build polynomial surrogates of test functions
    double slope_tolerance = 0.05;
    double g_exponent = 1.0;     // tau range |tau| <= pi lambda^-g for the window operator
};

enum class Verdict { bounded, bounded_by_constant, violated, inconclusive };
[[nodiscard]] std::string to_string(Verdict v);

using ParamValue = std::variant<std::string, double>;

struct CheckRow {
    std::vector<std::pair<std::string, ParamValue>> params;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    std::string series;  // rows sharing a series form one trend
    double x = std::numeric_limits<double>::quiet_NaN();  // trend abscissa (n or 1/delta)
    std::optional<double> constant;                       // explicit bound for the ratio
};

struct SeriesSummary {
    std::string series;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double max_ratio = 0.0;
    double min_ratio = 0.0;
    int points = 0;
};

struct CheckReport {
    std::string id;
    std::string check;
    std::vector<CheckRow> rows;
    std::vector<SeriesSummary> series;
    double max_ratio = 0.0;
    double min_ratio = 0.0;
    double slope = std::numeric_limits<double>::quiet_NaN();  // worst series slope (last 4 abscissae)
    std::optional<double> explicit_constant;
    Verdict verdict = Verdict::inconclusive;
    std::map<std::string, double> extras;
    std::vector<std::string> notes;
};

/// Evaluates every sweep point of a check and aggregates the verdict. Throws InvalidInput for
/// specs that violate the theorem hypotheses; solver failures propagate as SolverError.
[[nodiscard]] CheckReport run_check(const CheckSpec& spec);

/// Recomputes aggregates and verdict from rows (two_sided selects the equivalence policy).
void finalize_report(CheckReport& rep, double slope_tolerance, bool two_sided);

struct ConstantEntry {
    std::string name;
    double value = 0.0;
    std::string formula;
};

struct ConstantsTable {
    double p = 2.0;
    int r = 1;
    std::vector<ConstantEntry> entries;
    std::map<std::string, double> inputs;  // [gamma]_p, [gamma]_1, C8, ||gamma||_1, r_aux

    [[nodiscard]] double get(const std::string& name) const;
};

/// C1, C2, C9, C10, C11, C12, C13, C14, C15, C18, C19 and the Jackson-operator constant.
/// Throws NotInClassError when the weight is outside the class required for p.
[[nodiscard]] ConstantsTable explicit_constants(const Weight& w, double p, int r = 1);

struct DecayFit {
    double beta = 0.0;
    double residual = 0.0;  // rms of the log-log fit
};

/// Least-squares slope of -log(value) against log(n).
[[nodiscard]] DecayFit estimate_decay_exponent(const std::vector<std::pair<double, double>>& series);

/// Default family: modes, |sin|^s, mollified sawtooth, exp(sin), seeded random polynomials.
[[nodiscard]] std::vector<NamedFunction> default_functions(std::uint64_t seed, int random_count = 4, int degree = 32);

/// Seeded random polynomial with normal coefficients; no constant term when zero_mean.
[[nodiscard]] TrigPoly random_poly(int degree, std::uint64_t seed, bool zero_mean = false);

/// Polynomial surrogate of a test function: exact for polynomial rules, interpolant otherwise.
[[nodiscard]] TrigPoly surrogate(const FunctionRule& f, int resolution);

}  // namespace apx
