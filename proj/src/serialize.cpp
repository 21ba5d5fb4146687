#include "limlab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace limlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& field(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw SpecError(std::string("missing field '") + key + "'");
    return doc.at(key);
}

double number(const Json& doc, const char* key) {
    const Json& v = field(doc, key);
    if (!v.is_number()) throw SpecError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

double number_or(const Json& doc, const char* key, double fallback) {
    return doc.is_object() && doc.contains(key) ? number(doc, key) : fallback;
}

int integer(const Json& doc, const char* key) {
    const Json& v = field(doc, key);
    if (!v.is_number_integer()) throw SpecError(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

Json segment_to_json(const ProfileSegment& seg) {
    return std::visit(overloaded{[&](const PowerSegment& p) {
                                     return Json{{"start", seg.start}, {"type", "power"}, {"coef", p.coef},
                                                 {"exponent", p.exponent}};
                                 },
                                 [&](const SinusoidSegment& s) {
                                     return Json{{"start", seg.start}, {"type", "sinusoid"}, {"offset", s.offset},
                                                 {"amplitude", s.amplitude}, {"frequency", s.frequency}};
                                 }},
                      seg.shape);
}

ProfileSegment segment_from_json(const Json& doc) {
    const std::string type = field(doc, "type").get<std::string>();
    ProfileSegment seg;
    seg.start = number(doc, "start");
    if (type == "power")
        seg.shape = PowerSegment{number_or(doc, "coef", 1.0), number(doc, "exponent")};
    else if (type == "sinusoid")
        seg.shape = SinusoidSegment{number(doc, "offset"), number(doc, "amplitude"), number_or(doc, "frequency", 1.0)};
    else
        throw SpecError("unknown profile segment type '" + type + "'");
    return seg;
}

RadialProfile profile_from_json(const Json& params) {
    if (params.contains("segments")) {
        std::vector<ProfileSegment> segs;
        for (const auto& s : field(params, "segments")) segs.push_back(segment_from_json(s));
        return RadialProfile(std::move(segs));
    }
    const std::string shape = field(params, "profile").get<std::string>();
    if (shape == "capped_power") return RadialProfile::capped_power(number(params, "a"));
    if (shape == "sinusoid")
        return RadialProfile::sinusoid(number(params, "offset"), number(params, "amplitude"),
                                       number_or(params, "frequency", 1.0));
    if (shape == "constant") return RadialProfile::constant(number(params, "c"));
    throw SpecError("unknown profile shorthand '" + shape + "'");
}

}  // namespace

Json to_json(const Vec& v) {
    Json a = Json::array();
    for (double x : v.coords()) a.push_back(x);
    return a;
}

Vec vec_from_json(const Json& doc) {
    if (!doc.is_array() || doc.empty() || doc.size() > static_cast<std::size_t>(kMaxDim))
        throw SpecError("point must be an array of 1..6 numbers");
    std::vector<double> xs;
    for (const auto& x : doc) {
        if (!x.is_number()) throw SpecError("point coordinates must be numbers");
        xs.push_back(x.get<double>());
    }
    return Vec(std::span<const double>(xs));
}

Json to_json(const Cube& q) { return Json{{"center", to_json(q.center)}, {"edge", q.edge}}; }

Json weight_to_json(const WeightSpec& spec) {
    Json params = std::visit(
        overloaded{[](const ConstantWeight& c) { return Json{{"c", c.value}}; },
                   [](const PowerWeight& p) { return Json{{"alpha", p.alpha}}; },
                   [](const RadialProfileWeight& r) {
                       Json segs = Json::array();
                       for (const auto& s : r.profile.segments()) segs.push_back(segment_to_json(s));
                       return Json{{"segments", segs}};
                   },
                   [](const ProductWeight& p) {
                       return Json{{"horizontal", weight_to_json(*p.horizontal)},
                                   {"vertical", weight_to_json(*p.vertical)}};
                   },
                   [](const CorridorWeight& c) { return Json{{"alpha", c.alpha}, {"beta", c.beta}}; },
                   [](const BumpDepressionWeight& b) {
                       Json cs = Json::array();
                       for (const auto& c : b.centers) cs.push_back(to_json(c));
                       return Json{{"centers", cs}, {"alpha", b.alpha}};
                   },
                   [](const HalfLinePowerWeight& h) { return Json{{"alpha", h.alpha}}; }},
        spec.variant());
    if (spec.scale() != 1.0) params["scale"] = spec.scale();
    return Json{{"kind", spec.kind()}, {"d", spec.dim()}, {"params", params}};
}

WeightSpec weight_from_json(const Json& doc) {
    if (!doc.is_object()) throw SpecError("weight document must be an object");
    const Json& kind_field = field(doc, "kind");
    if (!kind_field.is_string()) throw SpecError("field 'kind' must be a string");
    const std::string kind = kind_field.get<std::string>();
    const int d = integer(doc, "d");
    const Json params = doc.contains("params") ? doc.at("params") : Json::object();
    if (!params.is_object()) throw SpecError("field 'params' must be an object");

    auto build = [&]() -> WeightSpec {
        if (kind == "constant") return WeightSpec::constant(d, number_or(params, "c", 1.0));
        if (kind == "power") return WeightSpec::power(d, number(params, "alpha"));
        if (kind == "radial_profile") return WeightSpec::radial(d, profile_from_json(params));
        if (kind == "product") {
            const WeightSpec h = weight_from_json(field(params, "horizontal"));
            const WeightSpec v = weight_from_json(field(params, "vertical"));
            if (h.dim() + v.dim() != d) throw SpecError("product factor dimensions must sum to d");
            return WeightSpec::product(h, v);
        }
        if (kind == "corridor") return WeightSpec::corridor(d, number(params, "alpha"), number(params, "beta"));
        if (kind == "bump_depression") {
            std::vector<Vec> centers;
            for (const auto& c : field(params, "centers")) centers.push_back(vec_from_json(c));
            return WeightSpec::bump_depression(d, std::move(centers), number(params, "alpha"));
        }
        if (kind == "half_line_power") return WeightSpec::half_line_power(d, number(params, "alpha"));
        throw SpecError("unknown weight kind '" + kind + "'");
    };
    WeightSpec w = build();
    const double scale = number_or(params, "scale", 1.0);
    return scale == 1.0 ? w : w.scaled(scale);
}

Json function_to_json(const TestFunction& fn) {
    Json params = std::visit(overloaded{[](const ConstantFunction& c) { return Json{{"c", c.value}}; },
                                        [](const LogLogFunction&) { return Json::object(); },
                                        [](const InverseRadiusFunction&) { return Json::object(); },
                                        [](const BumpChainFunction& c) {
                                            Json bumps = Json::array();
                                            for (const auto& b : c.bumps)
                                                bumps.push_back(Json{{"center", to_json(b.cube.center)},
                                                                     {"edge", b.cube.edge},
                                                                     {"amplitude", b.amplitude}});
                                            return Json{{"bumps", bumps}};
                                        },
                                        [](const RadialTableFunction& t) {
                                            return Json{{"radii", t.radii}, {"levels", t.levels}};
                                        }},
                             fn.variant());
    return Json{{"kind", fn.kind()}, {"d", fn.dim()}, {"params", params}};
}

TestFunction function_from_json(const Json& doc) {
    if (!doc.is_object()) throw SpecError("function document must be an object");
    const std::string kind = field(doc, "kind").get<std::string>();
    const int d = integer(doc, "d");
    if (d < 2 || d > kMaxDim) throw SpecError("function dimension must be in [2, 6]");
    const Json params = doc.contains("params") ? doc.at("params") : Json::object();
    if (kind == "constant") return TestFunction::constant(d, number_or(params, "c", 0.0));
    if (kind == "loglog") return loglog_function(d);
    if (kind == "inverse_radius") return TestFunction::inverse_radius(d);
    if (kind == "axis_chain") return axis_chain(d, integer(params, "i_min"), integer(params, "i_max"));
    if (kind == "bump_chain") {
        std::vector<Cube> cubes;
        std::vector<double> amps;
        for (const auto& b : field(params, "bumps")) {
            cubes.push_back(Cube{vec_from_json(field(b, "center")), number(b, "edge")});
            if (cubes.back().dim() != d) throw SpecError("bump center dimension must equal d");
            amps.push_back(number_or(b, "amplitude", 1.0));
        }
        if (cubes.empty()) return TestFunction::constant(d, 0.0);
        return bump_chain(cubes, amps);
    }
    if (kind == "radial_table")
        return TestFunction::radial_table(d, field(params, "radii").get<std::vector<double>>(),
                                          field(params, "levels").get<std::vector<double>>());
    throw SpecError("unknown function kind '" + kind + "'");
}

Json to_json(const MassEstimate& m) {
    return Json{{"value", m.value},           {"std_error", m.std_error}, {"n_samples", m.n_samples},
                {"method", to_string(m.method)}, {"target_met", m.target_met}, {"defects", m.defects}};
}

Json to_json(const RpReport& r) {
    return Json{{"p", r.p},
                {"i_min", r.range.min},
                {"i_max", r.range.max},
                {"center", to_json(r.center)},
                {"terms", r.terms},
                {"term_std_errors", r.term_std_errors},
                {"partial", r.partial},
                {"verdict", to_string(r.verdict)},
                {"trend_slope", r.trend_slope},
                {"too_short", r.too_short},
                {"all_closed_form", r.all_closed_form}};
}

Json to_json(const RpSweep& s) {
    Json rows = Json::array();
    for (const auto& [t, r] : s.reports)
        rows.push_back(Json{{"t", t}, {"total", r.total()}, {"verdict", to_string(r.verdict)}});
    return Json{{"verdict", to_string(s.verdict)},
                {"top_decade_growth", s.top_decade_growth},
                {"top_decade_sup_excess", s.top_decade_sup_excess},
                {"sweep", rows}};
}

Json to_json(const ApEstimate& a) {
    return Json{{"p", a.p},
                {"value", a.value},
                {"n_balls", a.n_balls},
                {"radius_range", {a.r_min, a.r_max}},
                {"center_box", to_json(a.center_box)},
                {"samples_per_ball", a.samples_per_ball},
                {"depth", a.depth},
                {"defects", a.defects},
                {"argmax_center", to_json(a.argmax_center)},
                {"argmax_radius", a.argmax_radius},
                {"caveat", a.p == 1.0 ? "ess inf estimated by the sampled minimum of w" : ""}};
}

Json to_json(const ApMembership& a) {
    Json levels = Json::array();
    for (const auto& e : a.levels) levels.push_back(to_json(e));
    return Json{{"p", a.p}, {"verdict", to_string(a.verdict)}, {"slope", a.slope}, {"levels", levels}};
}

Json to_json(const DoublingEstimate& d) {
    return Json{{"value", d.value}, {"n_balls", d.n_balls}, {"skipped", d.skipped}};
}

Json to_json(const InfimumReport& r) {
    return Json{{"value", r.value}, {"argmin", r.argmin}, {"trend", to_string(r.trend)},
                {"slope", r.slope}, {"scales", r.scales}, {"minima", r.minima}};
}

Json to_json(const TraceReport& r) {
    return Json{{"line", r.line},
                {"base", to_json(r.base)},
                {"verdict", to_string(r.verdict)},
                {"limit", r.limit},
                {"residual", r.residual},
                {"amplitude", r.amplitude},
                {"skipped", r.skipped},
                {"window",
                 {{"tolerance", r.config.tolerance},
                  {"oscillation_factor", r.config.oscillation_factor},
                  {"window_fraction", r.config.window_fraction},
                  {"levels", r.config.levels}}},
                {"t", r.t},
                {"u", r.u}};
}

Json to_json(const LimitCensus& c) {
    Json lines = Json::array();
    for (std::size_t k = 0; k < c.lines.size(); ++k)
        lines.push_back(Json{{"line", to_json(c.lines[k])}, {"verdict", to_string(c.verdicts[k])}, {"limit", c.limits[k]}});
    Json out{{"n", c.lines.size()},
             {"converged_fraction", c.converged_fraction},
             {"oscillating_fraction", c.oscillating_fraction},
             {"divergent_fraction", c.divergent_fraction},
             {"inconclusive_fraction", c.inconclusive_fraction},
             {"agreeing_fraction", c.agreeing_fraction},
             {"modal_limit", nullptr},
             {"lines", lines}};
    if (c.modal_limit) out["modal_limit"] = *c.modal_limit;
    return out;
}

Json to_json(const DivergenceWitness& w) {
    Json blocks = Json::array();
    for (std::size_t k = 0; k < w.blocks.size(); ++k)
        blocks.push_back(Json{{"first", w.blocks[k].first}, {"last", w.blocks[k].second}, {"sum", w.block_sums[k]},
                              {"threshold", std::ldexp(1.0, static_cast<int>(k) + 1)}});
    return Json{{"p", w.p},
                {"blocks", blocks},
                {"construction_bound", w.construction_bound},
                {"geometric_bound", w.geometric_bound},
                {"top_exponent", w.top_exponent},
                {"kappa", w.kappa},
                {"function", function_to_json(w.function)}};
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError("malformed JSON in '" + path + "': " + e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& text) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw SpecError("cannot write '" + tmp.string() + "'");
        out << text;
        if (!out) throw SpecError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace limlab
