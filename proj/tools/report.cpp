#include "report.hpp"

#include <cmath>
#include <cstdio>

namespace apx::cli {

using nlohmann::json;

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

json number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const CheckReport& rep, std::ostream& out) {
    bool has_constant = false;
    for (const auto& r : rep.rows) has_constant = has_constant || r.constant.has_value();
    out << "check_id";
    if (!rep.rows.empty()) {
        for (const auto& [k, v] : rep.rows.front().params) out << ',' << k;
    }
    if (has_constant) out << ",constant";
    out << ",lhs,rhs,ratio\n";
    for (const auto& r : rep.rows) {
        out << csv_field(rep.check);
        for (const auto& [k, v] : r.params) {
            out << ',';
            if (const auto* s = std::get_if<std::string>(&v)) out << csv_field(*s);
            else out << format_double(std::get<double>(v));
        }
        if (has_constant) out << ',' << (r.constant ? format_double(*r.constant) : "");
        out << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.ratio) << '\n';
    }
}

json report_json(const CheckReport& rep) {
    json j;
    j["id"] = rep.id;
    j["check"] = rep.check;
    j["verdict"] = to_string(rep.verdict);
    j["rows"] = rep.rows.size();
    j["max_ratio"] = number(rep.max_ratio);
    j["min_ratio"] = number(rep.min_ratio);
    j["slope"] = number(rep.slope);
    j["explicit_constant"] = rep.explicit_constant ? number(*rep.explicit_constant) : json(nullptr);
    json series = json::array();
    for (const auto& s : rep.series) {
        series.push_back({{"series", s.series},
                          {"slope", number(s.slope)},
                          {"max_ratio", number(s.max_ratio)},
                          {"min_ratio", number(s.min_ratio)},
                          {"points", s.points}});
    }
    j["series"] = series;
    json extras = json::object();
    for (const auto& [k, v] : rep.extras) extras[k] = number(v);
    j["extras"] = extras;
    j["notes"] = rep.notes;
    return j;
}

json constants_json(const ConstantsTable& t) {
    json j;
    j["p"] = number(t.p);
    j["r"] = t.r;
    json inputs = json::object();
    for (const auto& [k, v] : t.inputs) inputs[k] = number(v);
    j["inputs"] = inputs;
    json entries = json::array();
    for (const auto& e : t.entries) entries.push_back({{"name", e.name}, {"value", number(e.value)}, {"formula", e.formula}});
    j["constants"] = entries;
    return j;
}

}  // namespace apx::cli
