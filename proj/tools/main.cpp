#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "apx/errors.hpp"
#include "apx/harness.hpp"
#include "apx/parallel.hpp"
#include "apx/weights.hpp"
#include "config.hpp"
#include "report.hpp"

#ifndef APX_VERSION
#define APX_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace apx;

enum Exit : int { ok = 0, config_error = 2, bad_weight = 3, violated = 4, solver_failure = 5, inconclusive = 6 };

struct WeightArgs {
    std::string family = "power";
    double x0 = 0.0;
    double alpha = 0.0;
    double scale = 1.0;
    std::vector<std::string> factors;
    std::string table;
    std::string p = "2";
};

void add_weight_options(CLI::App* app, WeightArgs& a) {
    app->add_option("--family", a.family, "constant | power | product | tabulated")->capture_default_str();
    app->add_option("--x0", a.x0, "singular point of a power weight")->capture_default_str();
    app->add_option("--alpha", a.alpha, "exponent of a power weight")->capture_default_str();
    app->add_option("--scale", a.scale, "positive multiplier")->capture_default_str();
    app->add_option("--factor", a.factors, "x0:alpha factor of a product weight (repeatable)");
    app->add_option("--table", a.table, "file with weight samples on a uniform grid");
    app->add_option("--p", a.p, "exponent in [1, inf]")->capture_default_str();
}

double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    const double p = std::stod(s, &pos);
    if (pos != s.size() || !(p >= 1.0)) throw cli::ConfigError("p must be a number >= 1 or inf");
    return p;
}

Weight build_weight(const WeightArgs& a) {
    json j{{"family", a.family}, {"scale", a.scale}};
    if (a.family == "power") {
        j["x0"] = a.x0;
        j["alpha"] = a.alpha;
    } else if (a.family == "product") {
        json fs = json::array();
        for (const auto& f : a.factors) {
            const auto c = f.find(':');
            if (c == std::string::npos) throw cli::ConfigError("factor must be x0:alpha");
            fs.push_back({{"x0", std::stod(f.substr(0, c))}, {"alpha", std::stod(f.substr(c + 1))}});
        }
        j["factors"] = fs;
    } else if (a.family == "tabulated") {
        std::ifstream in(a.table);
        if (!in) throw cli::ConfigError("cannot open table " + a.table);
        std::vector<double> v;
        for (double x; in >> x;) v.push_back(x);
        j["values"] = v;
    }
    Weight w = cli::parse_weight(j);
    w.require_integrable();
    return w;
}

int report_weight_error(const std::exception& e) {
    std::cerr << "error: " << e.what()
              << " (local integrability of the weight fails, so neither the S_1 nor the Muckenhoupt A_p condition can hold)\n";
    return bad_weight;
}

json num(double x) {
    if (std::isfinite(x)) return x;
    return cli::format_double(x);
}

int cmd_classify(const WeightArgs& a) {
    try {
        const Weight w = build_weight(a);
        const double p = parse_p(a.p);
        const ClassReport r = classify_weight(w, p);
        json j;
        j["weight"] = w.descriptor();
        j["p"] = num(p);
        j["in_class"] = r.in_as;
        if (r.ap) {
            j["A_p"] = {{"in_class", r.ap->in_class},
                        {"constant", num(r.ap->value)},
                        {"refinement_trend", num(r.ap->refinement_trend)},
                        {"note", r.ap->note}};
        }
        if (r.s1) {
            j["S_1"] = {{"in_class", r.s1->in_class},
                        {"gamma_1", num(r.s1->gamma1)},
                        {"C8", num(r.s1->c8)},
                        {"refinement_trend", num(r.s1->refinement_trend)},
                        {"note", r.s1->note}};
        }
        j["A_inf"] = {{"C7", num(r.ainf.c7)}, {"p0", num(r.ainf.p0)}, {"C7_inside", num(r.ainf.c7_inside)}, {"p0_inside", num(r.ainf.p0_inside)}};
        j["doubling_C6"] = num(r.doubling_c6);
        j["l1_norm"] = num(r.l1_norm);
        j["summary"] = r.summary;
        std::cout << j.dump(2) << '\n';
        return ok;
    } catch (const DivergenceError& e) {
        return report_weight_error(e);
    } catch (const cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number: " << e.what() << '\n';
        return config_error;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    }
}

int cmd_constants(const WeightArgs& a, int r) {
    try {
        const Weight w = build_weight(a);
        const double p = parse_p(a.p);
        json j = cli::constants_json(explicit_constants(w, p, r));
        j["weight"] = w.descriptor();
        std::cout << j.dump(2) << '\n';
        return ok;
    } catch (const DivergenceError& e) {
        return report_weight_error(e);
    } catch (const NotInClassError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bad_weight;
    } catch (const cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    }
}

int cmd_list() {
    static const std::map<std::string, std::string> what = {
        {"nikolskii", "||U_n||_p <= c n^(1/q-1/p) ||U_n||_q for q <= p"},
        {"jackson", "E_n(f) <= c Omega_r(f, 1/n)"},
        {"jackson_derivative", "E_n(f) <= c n^-r Omega_k(f^(r), 1/n)"},
        {"bernstein", "||U_n^(r)|| <= 2^r C12^r n^r ||U_n||"},
        {"stechkin_inverse", "Omega_k(f, 1/n) <= c n^-k sum (nu+1)^(k-1) E_nu(f)"},
        {"marchaud", "Omega_k(f, t) <= c t^k int_t^1 Omega_{k+1}(f, u) u^(-k-1) du"},
        {"ulyanov_modulus", "Omega_k(f, delta)_q <= c (int_0^delta (t^-theta Omega_k(f, t)_p)^q* dt/t)^(1/q*)"},
        {"ulyanov_best_approx", "five (p, q) inequalities for E_n and ||f||_q"},
        {"realization_equiv", "Omega_r(f, 1/n) ~ ||f - U|| + n^-r ||U^(r)||"},
        {"kfunctional_equiv", "Omega_r(f, v) ~ K_r(f, v)"},
        {"operator_uniform", "T_v, R_v, S_lambda_tau, F_n, V_n, D_n norms vs C1, C2, C12, 3 C12, C10"},
        {"modulus_props", "vanishing, order reduction, dilation, smooth bound, R_v proximity"},
        {"upsilon_derivative", "l ||f'|| <= c ||(T_l - I) f||"},
        {"jackson_operator", "||f - D_n f|| <= c Omega_1(f, 1/n); ||f - V_n f|| <= (1 + 3 C12) E_n(f)"},
    };
    for (const auto& id : check_ids()) std::cout << id << "\t" << what.at(id) << '\n';
    return ok;
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int cmd_run(const std::string& path, const std::string& out_override, bool quiet) {
    cli::ExperimentConfig cfg;
    try {
        cfg = cli::load_config(path);
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const DivergenceError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    }
    if (!out_override.empty()) cfg.output_dir = out_override;

    std::vector<CheckReport> reports;
    for (const auto& spec : cfg.checks) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            reports.push_back(run_check(spec));
        } catch (const SolverError& e) {
            std::cerr << "solver failure in check '" << spec.id << "': " << e.what() << '\n';
            return solver_failure;
        } catch (const Error& e) {
            std::cerr << "rejected check '" << spec.id << "': " << e.what() << '\n';
            return config_error;
        }
        if (!quiet) {
            const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::fprintf(stderr, "%-28s %-26s rows=%-5zu max_ratio=%-12.5g slope=%-10.4g %.1fs\n", spec.id.c_str(),
                         to_string(reports.back().verdict).c_str(), reports.back().rows.size(), reports.back().max_ratio,
                         reports.back().slope, s);
        }
    }

    int code = ok;
    for (const auto& r : reports) {
        if (r.verdict == Verdict::violated) code = violated;
        else if (r.verdict == Verdict::inconclusive && code == ok) code = inconclusive;
    }

    try {
        std::filesystem::create_directories(cfg.output_dir);
        if (cfg.csv) {
            for (const auto& r : reports) {
                std::ofstream out(cfg.output_dir / (r.id + ".csv"), std::ios::binary);
                cli::write_csv(r, out);
                if (!out) throw std::runtime_error("write failed for " + r.id + ".csv");
            }
        }
        if (cfg.json) {
            json s;
            s["tool"] = "apx";
            s["version"] = APX_VERSION;
            s["schema_version"] = cfg.schema_version;
            s["seed"] = cfg.seed;
            s["metadata"] = {{"timestamp", timestamp()}, {"threads", thread_count()}, {"config", path}};
            json checks = json::array();
            json constants = json::array();
            std::set<std::string> seen;
            for (std::size_t i = 0; i < reports.size(); ++i) {
                checks.push_back(cli::report_json(reports[i]));
                for (const auto& nc : cfg.checks[i].norms) {
                    const std::string key = nc.weight.w.descriptor() + "|" + cli::format_double(nc.p);
                    if (!seen.insert(key).second) continue;
                    json c;
                    try {
                        c = cli::constants_json(explicit_constants(nc.weight.w, nc.p, 1));
                    } catch (const Error& e) {
                        c = {{"p", num(nc.p)}, {"error", e.what()}};
                    }
                    c["weight"] = nc.weight.id;
                    constants.push_back(c);
                }
            }
            s["checks"] = checks;
            s["constants"] = constants;
            s["exit_code"] = code;
            std::ofstream out(cfg.output_dir / "summary.json", std::ios::binary);
            out << s.dump(2) << '\n';
            if (!out) throw std::runtime_error("write failed for summary.json");
        }
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return config_error;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted trigonometric approximation: weight classes, explicit constants and inequality checks"};
    app.set_version_flag("--version", APX_VERSION);
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (overrides APX_THREADS)");

    WeightArgs cw;
    auto* classify = app.add_subcommand("classify-weight", "class verdicts and estimated constants of a weight (JSON)");
    add_weight_options(classify, cw);

    WeightArgs pw;
    int r = 1;
    auto* constants = app.add_subcommand("print-constants", "explicit constants for a weight and exponent (JSON)");
    add_weight_options(constants, pw);
    constants->add_option("--r", r, "order used by C13, C15, C18")->capture_default_str();

    std::string config, out;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "run every check of a config; writes CSV files and summary.json");
    run->add_option("config", config, "experiment config (JSON, schema_version 1)")->required();
    run->add_option("-o,--output", out, "output directory (overrides the config)");
    run->add_flag("-q,--quiet", quiet, "no per-check progress lines");

    auto* list = app.add_subcommand("list-checks", "identifiers of the available checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : config_error;
    }
    if (threads > 0) set_thread_count(threads);

    if (*classify) return cmd_classify(cw);
    if (*constants) return cmd_constants(pw, r);
    if (*run) return cmd_run(config, out, quiet);
    if (*list) return cmd_list();
    return config_error;
}
