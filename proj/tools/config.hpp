#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "apx/harness.hpp"

namespace apx::cli {

/// Malformed or unresolvable configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    int schema_version = 1;
    std::uint64_t seed = 0;
    std::vector<NamedWeight> weights;
    std::vector<NamedFunction> functions;
    std::vector<CheckSpec> checks;
    std::filesystem::path output_dir = "apx_out";
    bool csv = true;
    bool json = true;
};

[[nodiscard]] double parse_exponent(const nlohmann::json& j);
[[nodiscard]] Weight parse_weight(const nlohmann::json& j);
[[nodiscard]] FunctionRule parse_function(const nlohmann::json& j, std::uint64_t seed);

/// Parses and validates a schema_version 1 document. A relative output directory resolves against base when given.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base = {});
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace apx::cli
