#include "config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "apx/errors.hpp"

namespace apx::cli {

using nlohmann::json;

namespace {

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items()) {
        if (!ok.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
    }
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + ": bad '" + key + "': " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T def, const std::string& where) {
    return j.contains(key) ? get<T>(j, key, where) : def;
}

std::uint64_t parse_seed(const json& j) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return std::stoull(j.get<std::string>(), nullptr, 0);
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("seed must be a non-negative 64-bit integer");
}

std::vector<double> parse_doubles(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(parse_exponent(x));
    return out;
}

}  // namespace

double parse_exponent(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    }
    throw ConfigError("expected a number or \"inf\"");
}

Weight parse_weight(const json& j) {
    const std::string where = "weight";
    allow_keys(j, where, {"id", "family", "x0", "alpha", "scale", "factors", "values"});
    const auto fam = get<std::string>(j, "family", where);
    const double scale = get_or<double>(j, "scale", 1.0, where);
    if (fam == "constant") return Weight::constant(scale);
    if (fam == "power") return Weight::power(get_or<double>(j, "x0", 0.0, where), get<double>(j, "alpha", where), scale);
    if (fam == "product") {
        std::vector<PowerFactor> fs;
        for (const auto& f : get<json>(j, "factors", where)) {
            allow_keys(f, "weight factor", {"x0", "alpha"});
            fs.push_back({get_or<double>(f, "x0", 0.0, where), get<double>(f, "alpha", where)});
        }
        return Weight::product(std::move(fs), scale);
    }
    if (fam == "tabulated") return Weight::tabulated(get<std::vector<double>>(j, "values", where), {}, scale);
    throw ConfigError("unknown weight family '" + fam + "'");
}

FunctionRule parse_function(const json& j, std::uint64_t seed) {
    const std::string where = "function";
    allow_keys(j, where, {"id", "family", "c", "m", "s", "n0", "degree", "index", "a0", "a", "b"});
    const auto fam = get<std::string>(j, "family", where);
    const std::string id = get_or<std::string>(j, "id", fam, where);
    if (fam == "constant") return FunctionRule::constant(get_or<double>(j, "c", 1.0, where));
    if (fam == "cos_mode") return FunctionRule::cos_mode(get<int>(j, "m", where));
    if (fam == "sin_mode") return FunctionRule::sin_mode(get<int>(j, "m", where));
    if (fam == "abs_sin_pow") return FunctionRule::abs_sin_pow(get<double>(j, "s", where));
    if (fam == "exp_sin") return FunctionRule::exp_sin();
    if (fam == "sawtooth") return FunctionRule::sawtooth();
    if (fam == "sawtooth_vp") return FunctionRule::sawtooth_vp(get<int>(j, "n0", where));
    if (fam == "random_poly") {
        const int degree = get<int>(j, "degree", where);
        const auto index = get_or<std::uint64_t>(j, "index", 0, where);
        return FunctionRule::poly(random_poly(degree, seed ^ (0x9E3779B97F4A7C15ULL * (index + 1))), id);
    }
    if (fam == "trig_poly") {
        const auto a = get_or<std::vector<double>>(j, "a", {}, where);
        const auto b = get_or<std::vector<double>>(j, "b", {}, where);
        if (a.size() != b.size()) throw ConfigError("trig_poly: a and b must have equal length");
        return FunctionRule::poly(TrigPoly(get_or<double>(j, "a0", 0.0, where), a, b), id);
    }
    throw ConfigError("unknown function family '" + fam + "'");
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base) {
    allow_keys(doc, "config", {"schema_version", "seed", "weights", "functions", "checks", "output", "description"});
    ExperimentConfig cfg;
    cfg.schema_version = get<int>(doc, "schema_version", "config");
    if (cfg.schema_version != 1) throw ConfigError("unsupported schema_version " + std::to_string(cfg.schema_version));
    cfg.seed = doc.contains("seed") ? parse_seed(doc.at("seed")) : 0;

    std::map<std::string, Weight> weights{{"one", Weight::constant()}};
    for (const auto& w : doc.value("weights", json::array())) {
        const auto id = get<std::string>(w, "id", "weight");
        try {
            weights.insert_or_assign(id, parse_weight(w));
        } catch (const apx::InvalidInput& e) {
            throw ConfigError("weight '" + id + "': " + e.what());
        }
        cfg.weights.push_back({id, weights.at(id)});
    }
    std::map<std::string, FunctionRule> funcs;
    for (const auto& f : doc.value("functions", json::array())) {
        const auto id = get<std::string>(f, "id", "function");
        try {
            funcs.insert_or_assign(id, parse_function(f, cfg.seed));
        } catch (const apx::InvalidInput& e) {
            throw ConfigError("function '" + id + "': " + e.what());
        }
        cfg.functions.push_back({id, funcs.at(id)});
    }

    std::set<std::string> ids;
    for (const auto& c : doc.value("checks", json::array())) {
        const std::string where = "check";
        allow_keys(c, where,
                   {"id", "check", "functions", "norms", "n", "v", "orders", "lambdas", "j", "samples", "poly_degree",
                    "resolution", "slope_tolerance", "g_exponent", "seed"});
        CheckSpec s;
        s.check = get<std::string>(c, "check", where);
        const auto& known = check_ids();
        if (std::find(known.begin(), known.end(), s.check) == known.end()) throw ConfigError("unknown check '" + s.check + "'");
        s.id = get_or<std::string>(c, "id", s.check, where);
        if (!ids.insert(s.id).second) throw ConfigError("duplicate check id '" + s.id + "'");
        if (s.id.find_first_of("/\\") != std::string::npos) throw ConfigError("check id must not contain path separators");
        s.seed = c.contains("seed") ? parse_seed(c.at("seed")) : cfg.seed;
        for (const auto& fid : get_or<std::vector<std::string>>(c, "functions", {}, where)) {
            auto it = funcs.find(fid);
            if (it == funcs.end()) throw ConfigError("check '" + s.id + "': unknown function '" + fid + "'");
            s.functions.push_back({fid, it->second});
        }
        for (const auto& nj : c.value("norms", json::array())) {
            allow_keys(nj, "norm", {"p", "q", "weight"});
            NormCase nc;
            nc.p = parse_exponent(get<json>(nj, "p", "norm"));
            if (nj.contains("q")) nc.q = parse_exponent(nj.at("q"));
            const auto wid = get_or<std::string>(nj, "weight", "one", "norm");
            auto it = weights.find(wid);
            if (it == weights.end()) throw ConfigError("check '" + s.id + "': unknown weight '" + wid + "'");
            nc.weight = {wid, it->second};
            s.norms.push_back(nc);
        }
        s.n = get_or<std::vector<int>>(c, "n", {}, where);
        if (c.contains("v")) s.v = parse_doubles(c.at("v"), where);
        s.orders = get_or<std::vector<int>>(c, "orders", {}, where);
        if (c.contains("lambdas")) s.lambdas = parse_doubles(c.at("lambdas"), where);
        s.j = get_or<int>(c, "j", 1, where);
        s.samples = get_or<int>(c, "samples", 20, where);
        s.poly_degree = get_or<int>(c, "poly_degree", 32, where);
        s.resolution = get_or<int>(c, "resolution", 8192, where);
        s.slope_tolerance = get_or<double>(c, "slope_tolerance", 0.05, where);
        s.g_exponent = get_or<double>(c, "g_exponent", 1.0, where);
        cfg.checks.push_back(std::move(s));
    }

    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        allow_keys(o, "output", {"directory", "formats"});
        cfg.output_dir = get_or<std::string>(o, "directory", "apx_out", "output");
        if (o.contains("formats")) {
            cfg.csv = cfg.json = false;
            for (const auto& f : get<std::vector<std::string>>(o, "formats", "output")) {
                if (f == "csv") cfg.csv = true;
                else if (f == "json") cfg.json = true;
                else throw ConfigError("unknown output format '" + f + "'");
            }
        }
    }
    if (cfg.output_dir.is_relative() && !base.empty()) cfg.output_dir = base / cfg.output_dir;
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
    return parse_config(doc);
}

}  // namespace apx::cli
