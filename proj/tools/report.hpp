#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "apx/harness.hpp"

namespace apx::cli {

/// %.17g, with inf/nan spelled out.
[[nodiscard]] std::string format_double(double x);

/// Columns: check_id, params..., [constant], lhs, rhs, ratio.
void write_csv(const CheckReport& rep, std::ostream& out);

[[nodiscard]] nlohmann::json report_json(const CheckReport& rep);
[[nodiscard]] nlohmann::json constants_json(const ConstantsTable& t);

}  // namespace apx::cli
