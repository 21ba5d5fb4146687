#include "limlab/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "limlab/diagnostics.hpp"
#include "limlab/format.hpp"
#include "limlab/limits.hpp"
#include "limlab/rp.hpp"
#include "limlab/suites.hpp"

namespace limlab {

namespace {

constexpr const char* kConfigPrefix = "# run_config=";

QuadratureConfig quad_from(const Json& cfg) {
    QuadratureConfig q;
    q.seed = cfg.at("seed").get<std::uint64_t>();
    q.samples_per_region = cfg.at("samples").get<long>();
    q.validate();
    return q;
}

std::optional<double> opt_number(const Json& cfg, const char* key) {
    if (!cfg.contains(key) || cfg.at(key).is_null()) return std::nullopt;
    return cfg.at(key).get<double>();
}

std::optional<int> opt_int(const Json& cfg, const char* key) {
    if (!cfg.contains(key) || cfg.at(key).is_null()) return std::nullopt;
    return cfg.at(key).get<int>();
}

WeightSpec weight_of(const Json& cfg) {
    if (!cfg.contains("weight") || cfg.at("weight").is_null()) throw SpecError("--weight is required");
    WeightSpec w = weight_from_json(cfg.at("weight"));
    if (const auto d = opt_int(cfg, "d"); d && *d != w.dim())
        throw SpecError("--d " + std::to_string(*d) + " does not match the weight dimension " + std::to_string(w.dim()));
    return w;
}

Schedule schedule_of(const Json& cfg) {
    Schedule s;
    if (cfg.contains("t_grid") && !cfg.at("t_grid").is_null()) {
        const std::string spec = cfg.at("t_grid").get<std::string>();
        std::istringstream is(spec);
        std::string a, b, c;
        if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c) || a.empty() ||
            b.empty() || c.empty())
            throw SpecError("--t-grid must look like T0:RATIO:N, got '" + spec + "'");
        try {
            std::size_t pa = 0, pb = 0, pc = 0;
            s.t0 = std::stod(a, &pa);
            s.ratio = std::stod(b, &pb);
            s.n = std::stoi(c, &pc);
            if (pa != a.size() || pb != b.size() || pc != c.size()) throw std::invalid_argument("trailing");
        } catch (const std::logic_error&) {
            throw SpecError("--t-grid must look like T0:RATIO:N, got '" + spec + "'");
        }
    }
    s.validate();
    return s;
}

Json envelope(const Json& cfg, Json result) {
    return Json{{"schema_version", kSchemaVersion},
                {"artifact_version", kArtifactVersion},
                {"run_config", cfg},
                {"result", std::move(result)}};
}

std::string csv_header(const Json& cfg) {
    std::ostringstream os;
    os << "# schema_version=" << kSchemaVersion << " artifact_version=" << kArtifactVersion << "\n"
       << kConfigPrefix << cfg.dump() << "\n";
    return os.str();
}

std::string prediction_for_radial(const RpReport& rp, const ApMembership& ap) {
    if (rp.verdict == SeriesVerdict::Diverged) return "NO";
    if (rp.verdict == SeriesVerdict::Converged && ap.verdict == MembershipVerdict::Bounded) return "YES";
    return "NOT_GUARANTEED";
}

CommandOutput run_classify(const Json& cfg) {
    const WeightSpec w = weight_of(cfg);
    const double p = opt_number(cfg, "p").value_or(2.0);
    const int imax = cfg.at("imax").get<int>();
    const Json result = classify_weight(w, p, imax, quad_from(cfg));
    return {envelope(cfg, result).dump(2) + "\n", kExitOk};
}

CommandOutput run_trace(const Json& cfg) {
    if (!cfg.contains("function") || cfg.at("function").is_null()) throw SpecError("--function is required");
    const TestFunction fn = function_from_json(cfg.at("function"));
    const Schedule sched = schedule_of(cfg);
    const bool has_ray = !cfg.at("ray").is_null(), has_vertical = !cfg.at("vertical").is_null();
    const auto rays = opt_int(cfg, "rays");
    if (static_cast<int>(has_ray) + static_cast<int>(has_vertical) + static_cast<int>(rays.has_value()) != 1)
        throw SpecError("trace needs exactly one of --ray, --vertical, --rays");
    std::string text = csv_header(cfg);
    if (rays) {
        const LimitCensus census = radial_census(fn, *rays, sched, cfg.at("seed").get<std::uint64_t>());
        std::ostringstream os;
        os << "# converged_fraction=" << format_double(census.converged_fraction)
           << " divergent_fraction=" << format_double(census.divergent_fraction)
           << " oscillating_fraction=" << format_double(census.oscillating_fraction) << "\n";
        os << "ray,verdict,limit";
        for (int a = 0; a < fn.dim(); ++a) os << ",xi" << a + 1;
        os << "\n";
        for (std::size_t k = 0; k < census.lines.size(); ++k) {
            os << k << "," << to_string(census.verdicts[k]) << "," << format_double(census.limits[k]);
            for (int a = 0; a < fn.dim(); ++a) os << "," << format_double(census.lines[k][a]);
            os << "\n";
        }
        return {text + os.str(), kExitOk};
    }
    if (has_ray) {
        Vec xi = vec_from_json(cfg.at("ray"));
        if (xi.dim() != fn.dim()) throw SpecError("--ray must have d components");
        if (!(xi.norm() > 0.0)) throw SpecError("--ray must be a nonzero direction");
        xi *= 1.0 / xi.norm();
        return {text + trace_csv(trace_ray(fn, xi, sched)), kExitOk};
    }
    const Vec base = vec_from_json(cfg.at("vertical"));
    if (base.dim() != fn.dim() - 1) throw SpecError("--vertical must have d-1 components");
    return {text + trace_csv(trace_vertical(fn, base, sched)), kExitOk};
}

CommandOutput run_suite_command(const Json& cfg) {
    const std::string name = cfg.at("suite").get<std::string>();
    SuiteOptions opts;
    opts.seed = cfg.at("seed").get<std::uint64_t>();
    opts.samples = cfg.at("samples").get<long>();
    if (const auto r = opt_int(cfg, "rays")) opts.rays = *r;
    const bool overrides = !cfg.at("weight").is_null() || opt_number(cfg, "p") || opt_int(cfg, "imax");
    if (overrides && name != "lemma-3-5") throw SpecError("--weight, --p and --imax apply only to lemma-3-5");
    if (!cfg.at("weight").is_null()) opts.weight = weight_of(cfg);
    opts.p = opt_number(cfg, "p");
    opts.i_max = opt_int(cfg, "imax");
    const SuiteReport rep = run_suite(name, opts);
    return {envelope(cfg, to_json(rep)).dump(2) + "\n", rep.passed() ? kExitOk : kExitFailure};
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Json vec_option(const std::string& text) {
    if (text.empty()) return nullptr;
    Json out = Json::array();
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::logic_error&) {
            throw SpecError("expected comma-separated numbers, got '" + text + "'");
        }
    }
    return out;
}

void emit(const CommandOutput& result, const std::string& out_path, std::ostream& out) {
    if (out_path.empty())
        out << result.text;
    else
        write_file_atomic(out_path, result.text);
}

}  // namespace

Json classify_weight(const WeightSpec& w, double p, int i_max, const QuadratureConfig& quad) {
    if (!(p >= 1.0)) throw SpecError("p must be >= 1");
    const int d = w.dim();
    if (d < 2) throw SpecError("classification needs d >= 2");
    const RpReport rp = rp_terms(w, p, IndexRange{1, i_max}, quad);
    const ApMembership ap = ap_membership_sweep(w, p, 3, 16, quad);
    const double q = (p + d - 1.0) / d;
    const ApMembership aq = ap_membership_sweep(w, q, 3, 16, quad);
    BallSampling balls;
    balls.center_box = Cube{Vec::zeros(d), 4.0};
    const DoublingEstimate doubling = estimate_doubling(w, quad, balls);
    const InfimumReport cube = unit_cube_infimum(w, 1024.0, 1.0, quad.with_samples(std::min(quad.samples_per_region, 2048L)));
    const InfimumReport strip = strip_infimum(w, Cube{Vec::zeros(d - 1), 1.0}, 1024, quad);
    std::optional<InfimumReport> window;
    if (w.is_radial()) {
        try {
            window = radial_window_infimum(w, 1024.0);
        } catch (const SpecError&) {
        }
    }

    const std::string radial = prediction_for_radial(rp, ap);
    const std::string rough =
        p < d && cube.trend == InfimumTrend::BoundedBelow ? "YES" : "NOT_GUARANTEED";
    std::string vertical = "NOT_GUARANTEED";
    std::string vertical_reason;
    if (rp.verdict == SeriesVerdict::Diverged) {
        vertical = "NO";
        vertical_reason = "rp diverges";
    } else if (window) {
        const bool ok = rp.verdict == SeriesVerdict::Converged && window->trend == InfimumTrend::BoundedBelow;
        vertical = ok ? "YES" : "NOT_GUARANTEED";
        vertical_reason = "radial window infimum " + to_string(window->trend);
    } else if (strip.trend == InfimumTrend::Vanishing) {
        vertical_reason = "strip infimum Vanishing";
    } else if (aq.verdict == MembershipVerdict::Bounded && cube.trend == InfimumTrend::BoundedBelow) {
        vertical = "YES";
        vertical_reason = "A_q bounded and unit-cube infimum BoundedBelow";
    } else {
        vertical_reason = "A_q " + to_string(aq.verdict) + ", unit-cube infimum " + to_string(cube.trend);
    }
    if (vertical_reason.find("unit-cube") == std::string::npos && rp.verdict != SeriesVerdict::Diverged)
        vertical_reason += "; unit-cube infimum " + to_string(cube.trend);

    Json out{{"weight", weight_to_json(w)},
             {"p", p},
             {"q", q},
             {"rp", to_json(rp)},
             {"ap", to_json(ap)},
             {"aq", to_json(aq)},
             {"doubling", to_json(doubling)},
             {"unit_cube_infimum", to_json(cube)},
             {"strip_infimum", to_json(strip)},
             {"radial_window_infimum", window ? to_json(*window) : Json()}};
    out["predictions"] = Json{{"radial_limits", radial},
                              {"rough_cube_averages", rough},
                              {"vertical_limits", vertical},
                              {"vertical_reason", vertical_reason}};
    return out;
}

CommandOutput execute_run_config(const Json& config) {
    const std::string command = config.at("command").get<std::string>();
    if (command == "classify") return run_classify(config);
    if (command == "trace") return run_trace(config);
    if (command == "suite") return run_suite_command(config);
    throw SpecError("unknown command '" + command + "'");
}

Json embedded_run_config(const std::string& text) {
    const auto pos = text.find(kConfigPrefix);
    if (pos != std::string::npos && (pos == 0 || text[pos - 1] == '\n')) {
        const auto start = pos + std::char_traits<char>::length(kConfigPrefix);
        const auto end = text.find('\n', start);
        return Json::parse(text.substr(start, end - start));
    }
    const Json doc = Json::parse(text);
    if (!doc.is_object() || !doc.contains("run_config")) throw SpecError("report carries no run_config");
    return doc.at("run_config");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted Sobolev limits at infinity: diagnostics, traces and reproduction suites", "limlab"};
    app.require_subcommand(1);

    std::string weight_path, function_path, out_path, t_grid, ray, vertical, suite_name, report_path;
    double p = 2.0;
    int d = 0, imax = 30, rays = 0;
    long samples = 4096;
    std::uint64_t seed = 1;

    auto* classify = app.add_subcommand("classify", "Diagnostics and theorem predictions for a weight");
    classify->add_option("--weight", weight_path, "WeightSpec JSON file")->required();
    classify->add_option("--p", p, "Sobolev exponent (default 2)");
    auto* classify_d = classify->add_option("--d", d, "Expected dimension");
    classify->add_option("--imax", imax, "Largest annulus index (default 30)");
    classify->add_option("--samples", samples, "Monte Carlo samples per region");
    classify->add_option("--seed", seed, "Random seed");
    classify->add_option("--out", out_path, "Report path");

    auto* trace = app.add_subcommand("trace", "Sample a test function along rays or vertical lines (CSV)");
    trace->add_option("--function", function_path, "Function JSON file")->required();
    trace->add_option("--ray", ray, "Direction, comma separated");
    trace->add_option("--vertical", vertical, "Base point in R^{d-1}, comma separated");
    auto* trace_rays = trace->add_option("--rays", rays, "Radial census over N random rays");
    trace->add_option("--t-grid", t_grid, "Schedule T0:RATIO:N");
    trace->add_option("--seed", seed, "Random seed for the census");
    trace->add_option("--out", out_path, "CSV path");

    auto* suite = app.add_subcommand("suite", "Run a reproduction suite");
    suite->add_option("name", suite_name, "Suite name")->required();
    suite->add_option("--weight", weight_path, "Weight override (lemma-3-5)");
    auto* suite_p = suite->add_option("--p", p, "Exponent override (lemma-3-5)");
    auto* suite_imax = suite->add_option("--imax", imax, "Annulus budget override (lemma-3-5)");
    suite->add_option("--samples", samples, "Monte Carlo samples per region");
    suite->add_option("--seed", seed, "Random seed");
    auto* suite_rays = suite->add_option("--rays", rays, "Rays per census");
    suite->add_option("--out", out_path, "Report path");

    auto* replay = app.add_subcommand("replay", "Re-run a report's embedded configuration and compare");
    replay->add_option("report", report_path, "Report or CSV produced by this tool")->required();
    replay->add_option("--out", out_path, "Write the regenerated report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        CommandOutput result;
        std::string label;
        if (*replay) {
            const std::string original = read_text(report_path);
            Json cfg;
            try {
                cfg = embedded_run_config(original);
            } catch (const Json::exception& e) {
                throw SpecError("cannot parse report '" + report_path + "': " + e.what());
            }
            result = execute_run_config(cfg);
            if (!out_path.empty()) write_file_atomic(out_path, result.text);
            const bool same = result.text == original;
            err << "replay: " << (same ? "identical" : "differs") << "\n";
            return same ? kExitOk : kExitFailure;
        }
        Json cfg{{"command", nullptr}, {"weight", nullptr},  {"function", nullptr}, {"suite", nullptr},
                 {"p", nullptr},       {"d", nullptr},       {"imax", nullptr},     {"samples", samples},
                 {"seed", seed},       {"rays", nullptr},    {"t_grid", nullptr},   {"ray", nullptr},
                 {"vertical", nullptr}, {"out", out_path.empty() ? Json() : Json(out_path)}};
        if (!weight_path.empty()) cfg["weight"] = read_json_file(weight_path);
        if (*classify) {
            label = "classify";
            cfg["command"] = "classify";
            cfg["p"] = p;
            if (*classify_d) cfg["d"] = d;
            cfg["imax"] = imax;
        } else if (*trace) {
            label = "trace";
            cfg["command"] = "trace";
            cfg["function"] = read_json_file(function_path);
            if (!t_grid.empty()) cfg["t_grid"] = t_grid;
            cfg["ray"] = vec_option(ray);
            cfg["vertical"] = vec_option(vertical);
            if (*trace_rays) cfg["rays"] = rays;
        } else {
            label = "suite " + suite_name;
            cfg["command"] = "suite";
            cfg["suite"] = suite_name;
            if (*suite_p) cfg["p"] = p;
            if (*suite_imax) cfg["imax"] = imax;
            if (*suite_rays) cfg["rays"] = rays;
        }
        result = execute_run_config(cfg);
        emit(result, out_path, out);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        err << label << ": " << (result.exit_code == kExitOk ? "ok" : "criteria failed") << " in "
            << format_double(std::round(secs * 100.0) / 100.0) << " s\n";
        return result.exit_code;
    } catch (const NumericalError& e) {
        err << "numerical abort: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const SingularPointError& e) {
        err << "numerical abort: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const PreconditionError& e) {
        err << "precondition not met: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace limlab
