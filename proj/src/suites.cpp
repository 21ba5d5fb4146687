#include "limlab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "limlab/diagnostics.hpp"
#include "limlab/limits.hpp"
#include "limlab/oracles.hpp"
#include "limlab/rng.hpp"
#include "limlab/rp.hpp"
#include "limlab/trend.hpp"
#include "limlab/witnesses.hpp"

namespace limlab {

bool CriterionResult::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

bool SuiteReport::passed() const {
    return !criteria.empty() &&
           std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed(); });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"remark-1-1", "uspenskii",  "lemma-3-5",
                                                "fefferman-product", "radial-thm", "estimators"};
    return names;
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kQuarterOctave = 1.189207115002721;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

QuadratureConfig base_quad(const SuiteOptions& o) {
    QuadratureConfig q;
    q.seed = o.seed;
    q.samples_per_region = o.samples;
    q.validate();
    return q;
}

Json mass_list(const std::vector<MassEstimate>& ms) {
    Json out = Json::array();
    for (const auto& m : ms) out.push_back(to_json(m));
    return out;
}

/// Largest ratio of consecutive entries.
double max_consecutive_ratio(const std::vector<double>& v) {
    double r = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) r = std::fmax(r, v[k] / v[k - 1]);
    return r;
}

/// 2^slope of log2 v against its index.
double fitted_ratio(const std::vector<double>& v) {
    std::vector<double> x, y;
    for (std::size_t k = 0; k < v.size(); ++k) {
        x.push_back(static_cast<double>(k));
        y.push_back(std::log2(v[k]));
    }
    return std::exp2(least_squares_slope(x, y));
}

std::vector<double> values_of(const std::vector<MassEstimate>& ms) {
    std::vector<double> v;
    for (const auto& m : ms) v.push_back(m.value);
    return v;
}

/// Value of a trace at an exact schedule point.
std::optional<double> trace_at(const TraceReport& r, double t) {
    const auto it = std::find(r.t.begin(), r.t.end(), t);
    if (it == r.t.end()) return std::nullopt;
    return r.u[static_cast<std::size_t>(it - r.t.begin())];
}

Json verdict_list(const std::vector<TraceReport>& traces) {
    Json out = Json::array();
    for (const auto& r : traces)
        out.push_back(Json{{"base", to_json(r.base)}, {"verdict", to_string(r.verdict)}, {"limit", r.limit},
                           {"amplitude", r.amplitude}});
    return out;
}

bool all_verdicts(const std::vector<TraceReport>& traces, TraceVerdict v) {
    return std::all_of(traces.begin(), traces.end(), [&](const TraceReport& r) { return r.verdict == v; });
}

/// Monotone decrease up to 3 sigma, ending below the threshold.
bool decreasing_to(const std::vector<AverageEstimate>& seq, double below) {
    for (std::size_t k = 1; k < seq.size(); ++k) {
        const double slack = 3.0 * std::hypot(seq[k].std_error, seq[k - 1].std_error);
        if (seq[k].value > seq[k - 1].value + slack) return false;
    }
    return !seq.empty() && seq.back().value < below;
}

Json average_list(const std::vector<double>& r, const std::vector<AverageEstimate>& seq) {
    Json out = Json::array();
    for (std::size_t k = 0; k < seq.size(); ++k)
        out.push_back(Json{{"r", r[k]}, {"value", seq[k].value}, {"std_error", seq[k].std_error}});
    return out;
}

std::vector<Vec> unit_ball_bases() {
    const double a = 0.5, b = 0.5 / std::numbers::sqrt2;
    return {Vec{0.0, 0.0}, Vec{a, 0.0}, Vec{-a, 0.0}, Vec{0.0, a}, Vec{0.0, -a},
            Vec{b, b},     Vec{-b, b},  Vec{b, -b},  Vec{-b, -b}};
}

// ---------------------------------------------------------------------------
// Criterion 1: power-weight classification grid.

CriterionResult power_grid(const SuiteOptions& o) {
    const auto start = Clock::now();
    const int d = 3;
    const double p = 2.0;
    const QuadratureConfig quad = base_quad(o);
    CriterionResult res{1, "power-weight classification grid, d=3, p=2", {}};
    Json rows = Json::array();
    bool rp_ok = true, inf_ok = true;
    for (double alpha : {-2.5, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
        const WeightSpec w = WeightSpec::power(d, alpha);
        const double exponent = (p - d - alpha) / (p - 1.0);
        const SeriesVerdict expected_rp = exponent >= 0.0 ? SeriesVerdict::Diverged : SeriesVerdict::Converged;
        const RpReport rp = rp_terms(w, p, IndexRange{1, 30}, quad);
        const InfimumTrend expected_inf = alpha < 0.0 ? InfimumTrend::Vanishing : InfimumTrend::BoundedBelow;
        const InfimumReport inf = unit_cube_infimum(w, 1024.0, 1.0, quad.with_samples(std::min(o.samples, 2048L)));
        rp_ok = rp_ok && rp.verdict == expected_rp;
        inf_ok = inf_ok && inf.trend == expected_inf;
        rows.push_back(Json{{"alpha", alpha},
                            {"term_exponent", exponent},
                            {"rp_verdict", to_string(rp.verdict)},
                            {"rp_expected", to_string(expected_rp)},
                            {"rp_trend_slope", rp.trend_slope},
                            {"infimum_trend", to_string(inf.trend)},
                            {"infimum_expected", to_string(expected_inf)},
                            {"infimum_slope", inf.slope},
                            {"infimum_value", inf.value}});
    }
    res.checks.push_back({"rp verdicts match the closed-form term exponent", rp_ok, rows});
    res.checks.push_back({"unit-cube infimum trends", inf_ok, Json::object()});
    res.checks.push_back({"runtime under 120 s", seconds_since(start) < 120.0, Json{{"budget_s", 120}}});
    return res;
}

// ---------------------------------------------------------------------------
// Criteria 3 and 8: axis chain under Power{-0.5}.

Schedule axis_schedule() {
    Schedule s;
    for (int i = 2; i <= 59; ++i) {
        s.anchors.push_back(std::ldexp(1.0, i));
        s.anchors.push_back(1.5 * std::ldexp(1.0, i));
    }
    return s;
}

/// Oracle: the ray is predicted to fail Converged(0) iff it meets a chain cube inside the final window.
double predicted_exception_fraction(const LimitCensus& census, const std::vector<Cube>& cubes,
                                    const std::vector<double>& t, const TraceConfig& cfg) {
    const std::size_t n = t.size();
    const std::size_t window =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(cfg.window_fraction * static_cast<double>(n))));
    const double t_lo = t[n - window], t_hi = t.back();
    int hits = 0;
    for (const Vec& xi : census.lines) {
        bool hit = false;
        for (const auto& q : cubes) hit = hit || oracle::ray_meets_box(xi, q.box(), t_lo, t_hi);
        hits += hit ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(census.lines.size());
}

CriterionResult axis_chain_criterion(const SuiteOptions& o) {
    const int d = 3;
    const double p = 2.0;
    const QuadratureConfig quad = base_quad(o);
    const WeightSpec w = WeightSpec::power(d, -0.5);
    const TestFunction chain = axis_chain(d, 2, 60);
    CriterionResult res{3, "radial limits exist, vertical limit fails: axis chain under Power{-0.5}", {}};

    auto energies = bump_energies(chain, w, p, quad);
    energies.resize(20);
    const auto e = values_of(energies);
    const double bound = std::exp2(-0.5) * 1.1;
    const double worst = max_consecutive_ratio(e);
    res.checks.push_back({"bump energies geometric with ratio <= 2^-0.5 * 1.1", worst <= bound,
                          Json{{"max_ratio", worst}, {"fitted_ratio", fitted_ratio(e)}, {"bound", bound},
                               {"energies", mass_list(energies)}}});

    const Schedule sched = axis_schedule();
    const TraceReport vert = trace_vertical(chain, Vec::zeros(d - 1), sched);
    bool exact = true;
    Json samples = Json::array();
    for (int i = 3; i <= 12; ++i) {
        const auto on = trace_at(vert, std::ldexp(1.0, i));
        const auto off = trace_at(vert, 1.5 * std::ldexp(1.0, i));
        exact = exact && on && off && *on == 1.0 && *off == 0.0;
        samples.push_back(Json{{"i", i}, {"u_at_2^i", on ? Json(*on) : Json()}, {"u_at_1.5*2^i", off ? Json(*off) : Json()}});
    }
    res.checks.push_back({"vertical trace at the origin oscillates", vert.verdict == TraceVerdict::Oscillating,
                          Json{{"verdict", to_string(vert.verdict)}, {"amplitude", vert.amplitude}}});
    res.checks.push_back({"trace equals 1 at 2^i and 0 at 1.5*2^i, i=3..12", exact, samples});

    const Schedule plain;
    const LimitCensus census = radial_census(chain, o.rays, plain, derive_seed(o.seed, 3));
    double at_zero = 0.0;
    for (std::size_t k = 0; k < census.lines.size(); ++k)
        if (census.verdicts[k] == TraceVerdict::Converged && census.limits[k] == 0.0) at_zero += 1.0;
    at_zero /= static_cast<double>(census.lines.size());
    std::vector<Cube> cubes;
    for (const auto& b : std::get<BumpChainFunction>(chain.variant()).bumps) cubes.push_back(b.cube);
    const double predicted = predicted_exception_fraction(census, cubes, plain.points(), TraceConfig{});
    const double observed = 1.0 - at_zero;
    res.checks.push_back({"radial census converges to 0 on >= 95% of rays", at_zero >= 0.95,
                          Json{{"converged_to_zero", at_zero}, {"census", to_json(census)}}});
    res.checks.push_back({"exception fraction matches the ray-cube oracle within 2 points",
                          std::fabs(observed - predicted) <= 0.02,
                          Json{{"observed", observed}, {"predicted", predicted}}});
    return res;
}

CriterionResult averages_criterion(const SuiteOptions& o) {
    const int d = 3;
    const QuadratureConfig quad = base_quad(o);
    const TestFunction chain = axis_chain(d, 2, 60);
    CriterionResult res{8, "sphere, annulus and off-centre averages tend to the radial limit 0", {}};
    std::vector<double> radii;
    std::vector<AverageEstimate> sphere, annulus, offcenter;
    for (int k = 4; k <= 12; ++k) {
        const double r = std::ldexp(1.0, k);
        radii.push_back(r);
        sphere.push_back(sphere_average(chain, r, 0.0, 100000, derive_seed(o.seed, 8)));
        annulus.push_back(annulus_average(chain, r, 0.0, quad));
        offcenter.push_back(offcenter_average(chain, r * Vec::unit(d, d - 1), 0.0, quad));
    }
    res.checks.push_back({"sphere averages decrease below 1e-2", decreasing_to(sphere, 1e-2), average_list(radii, sphere)});
    res.checks.push_back(
        {"annulus averages decrease below 1e-2", decreasing_to(annulus, 1e-2), average_list(radii, annulus)});
    res.checks.push_back({"off-centre averages decrease below 1e-2", decreasing_to(offcenter, 1e-2),
                          average_list(radii, offcenter)});
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 2: loglog under Power{-1}.

CriterionResult loglog_criterion(const SuiteOptions& o) {
    const auto start = Clock::now();
    const int d = 3;
    const double p = 2.0;
    const QuadratureConfig quad = base_quad(o);
    const WeightSpec w = WeightSpec::power(d, -1.0);
    const TestFunction fn = loglog_function(d);
    CriterionResult res{2, "loglog has finite energy under Power{-1} yet diverges along every ray", {}};

    const auto nested = nested_energies(fn, w, p, quad, 14);
    Json rows = Json::array();
    bool increasing = true;
    for (int j = 5; j <= 14; ++j) {
        rows.push_back(Json{{"radius", std::ldexp(1.0, j)}, {"energy", to_json(nested[j])}});
        if (j > 5) increasing = increasing && nested[j].value > nested[j - 1].value;
    }
    const double last_ratio = nested[14].value / nested[13].value;
    res.checks.push_back({"energies over B(0,2^j), j=5..14, increase", increasing, rows});
    res.checks.push_back({"last-shell ratio below 1.05", last_ratio < 1.05, Json{{"ratio", last_ratio}}});

    const LimitCensus census = radial_census(fn, o.rays, Schedule{}, derive_seed(o.seed, 2));
    res.checks.push_back({"every ray diverges to infinity", census.divergent_fraction == 1.0,
                          Json{{"divergent_fraction", census.divergent_fraction}, {"n_rays", census.lines.size()}}});
    res.checks.push_back({"runtime under 60 s", seconds_since(start) < 60.0, Json{{"budget_s", 60}}});
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 4: divergence witness.

Json dijkstra_comparison(const QuadratureConfig& quad, bool& ok) {
    const WeightSpec w2 = WeightSpec::power(2, -0.5);
    const DivergenceWitness wit = divergence_witness(w2, 2.0, 40, quad);
    const int n = 512;
    const auto dist =
        oracle::grid_geodesic_2d([&](double x, double y) { return wit.function.grad_norm(Vec{x, y}); }, n, 1.0);
    Json rows = Json::array();
    ok = true;
    for (int k = 6; k <= 9; ++k) {
        const int r = 1 << k;
        const int m = static_cast<int>(std::lround(r / std::numbers::sqrt2));
        for (const auto& [i, j] : {std::pair{r, 0}, std::pair{m, m}}) {
            if (i > n || j > n) continue;
            const double grid = dist[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * (n + 1)];
            const double exact = wit.function.value(Vec{static_cast<double>(i), static_cast<double>(j)});
            const double rel = exact > 0.0 ? std::fabs(grid - exact) / exact : std::fabs(grid);
            ok = ok && rel <= 0.02;
            rows.push_back(Json{{"node", {i, j}}, {"grid", grid}, {"radial_u", exact}, {"relative_error", rel}});
        }
    }
    return rows;
}

CriterionResult witness_criterion(const SuiteOptions& o) {
    const QuadratureConfig quad = base_quad(o);
    const WeightSpec w = o.weight ? *o.weight : WeightSpec::power(3, -1.5);
    const double p = o.p.value_or(2.0);
    const int i_max = o.i_max.value_or(40);
    CriterionResult res{4, "divergence witness for R_p(w) = infinity", {}};
    const DivergenceWitness wit = divergence_witness(w, p, i_max, quad);

    res.checks.push_back({"at least 3 blocks", wit.blocks.size() >= 3, Json{{"blocks", wit.blocks.size()}}});

    bool sums_ok = true;
    Json blocks = Json::array();
    for (std::size_t k = 0; k < wit.blocks.size(); ++k) {
        const auto [lo, hi] = wit.blocks[k];
        double sum = 0.0;
        if (p > 1.0) {
            for (int i = lo; i <= hi; ++i) sum += wit.rp.terms[static_cast<std::size_t>(i - wit.rp.range.min)];
        } else {
            sum = wit.rp.terms[static_cast<std::size_t>(lo - wit.rp.range.min)];
        }
        const double threshold = std::ldexp(1.0, static_cast<int>(k) + 1);
        sums_ok = sums_ok && sum == wit.block_sums[k] && sum > threshold;
        blocks.push_back(Json{{"annuli", {lo, hi}}, {"sum", sum}, {"threshold", threshold}});
    }
    res.checks.push_back({"block k sums exceed 2^k", sums_ok, blocks});

    const double r_top = std::ldexp(1.0, wit.top_exponent);
    const MassEstimate e = energy(wit.function, w, p, quad, r_top);
    const double limit = wit.geometric_bound + 3.0 * e.std_error;
    res.checks.push_back({"energy within the geometric bound + 3 sigma", e.value <= limit,
                          Json{{"energy", to_json(e)}, {"construction_bound", wit.construction_bound},
                               {"geometric_bound", wit.geometric_bound}}});

    Rng rng(derive_seed(o.seed, 4));
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 64; ++k) worst = std::fmin(worst, wit.function.value(r_top * rng.direction(w.dim())) / r_top);
    res.checks.push_back({"u(2^m xi)/2^m >= kappa > 0 at the top block", wit.kappa > 0.0 && worst >= wit.kappa,
                          Json{{"top_exponent", wit.top_exponent}, {"kappa", wit.kappa}, {"min_over_directions", worst}}});

    bool dijkstra_ok = false;
    Json rows = dijkstra_comparison(quad, dijkstra_ok);
    res.checks.push_back({"d=2 grid geodesic agrees with radial u within 2%", dijkstra_ok, rows});
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 5: product weights.

Schedule tower_schedule(int n_cubes) {
    Schedule s;
    s.t0 = 1.0;
    s.ratio = kQuarterOctave;
    s.n = 4 * (n_cubes + 2) + 1;
    for (int i = 2; i < 2 + n_cubes; ++i) {
        s.anchors.push_back(std::ldexp(1.0, i));
        s.anchors.push_back(1.5 * std::ldexp(1.0, i));
    }
    return s;
}

CriterionResult product_criterion(const SuiteOptions& o) {
    const int d = 3;
    const double p = 2.0;
    const QuadratureConfig quad = base_quad(o);
    CriterionResult res{5, "product weights: vertical limits need more than R_p", {}};

    std::vector<double> grid;
    for (int k = 0; k <= 12; ++k) grid.push_back(std::ldexp(1.0, k));
    const WeightSpec hl = WeightSpec::half_line_power(d, 0.5);
    const RpSweep sweep = sup_rp_sweep(hl, p, grid, IndexRange{1, 30}, quad);
    res.checks.push_back({"half-line weight: sup over translates grows", sweep.verdict == SweepVerdict::Growing,
                          Json{{"verdict", to_string(sweep.verdict)}, {"top_decade_growth", sweep.top_decade_growth}}});

    const Cube base{Vec::zeros(d - 1), 1.0};
    const InfimumReport strip = strip_infimum(hl, base, 1024, quad);
    std::vector<double> x, y;
    double worst_rel = 0.0;
    for (std::size_t k = 0; k < strip.scales.size(); ++k) {
        const double z = strip.scales[k];
        const double exact = 2.0 * (std::sqrt(z + 1.0) - std::sqrt(z));
        worst_rel = std::fmax(worst_rel, std::fabs(strip.minima[k] - exact) / exact);
        if (k >= strip.scales.size() / 2) {
            x.push_back(std::log(z));
            y.push_back(std::log(exact));
        }
    }
    const double oracle_slope = least_squares_slope(x, y);
    const bool strip_ok = strip.trend == InfimumTrend::Vanishing && std::fabs(strip.slope + 0.5) <= 0.1 &&
                          std::fabs(strip.slope - oracle_slope) <= 1e-6 && worst_rel <= 1e-9;
    res.checks.push_back({"strip infimum vanishes with slope -0.5 +- 0.1", strip_ok,
                          Json{{"trend", to_string(strip.trend)}, {"slope", strip.slope},
                               {"oracle_slope", oracle_slope}, {"max_relative_error", worst_rel}}});

    const int n_cubes = 40;
    const double alpha = 0.6, beta = 0.1;
    const TowerFamily ex = tower_family(TowerWeight::Product, d, p, alpha, beta, n_cubes);
    auto energies = bump_energies(ex.chain, ex.weight, p, quad);
    energies.resize(20);
    const auto e = values_of(energies);
    const double derived = std::exp2(beta * (d - p) - alpha);
    const double worst = max_consecutive_ratio(e);
    res.checks.push_back({"chain energies geometric", worst <= derived * 1.1,
                          Json{{"max_ratio", worst}, {"fitted_ratio", fitted_ratio(e)}, {"derived_ratio", derived},
                               {"energies", mass_list(energies)}}});

    const Schedule sched = tower_schedule(n_cubes);
    std::vector<TraceReport> traces;
    for (const Vec& b : unit_ball_bases()) traces.push_back(trace_vertical(ex.chain, b, sched));
    res.checks.push_back({"vertical traces oscillate at 9 of 9 base points",
                          all_verdicts(traces, TraceVerdict::Oscillating), verdict_list(traces)});

    const WeightSpec pw = WeightSpec::product(WeightSpec::power(d - 1, 0.3), WeightSpec::constant(1, 1.0));
    const RpSweep bounded = sup_rp_sweep(pw, p, grid, IndexRange{1, 30}, quad);
    res.checks.push_back({"power-times-constant weight: sup over translates bounded",
                          bounded.verdict == SweepVerdict::UniformlyBounded,
                          Json{{"verdict", to_string(bounded.verdict)},
                               {"top_decade_sup_excess", bounded.top_decade_sup_excess}}});

    const TowerFamily damped = tower_family(TowerWeight::Product, d, p, alpha, beta, n_cubes, 0.25);
    std::vector<TraceReport> conv;
    for (const Vec& b : unit_ball_bases()) conv.push_back(trace_vertical(damped.chain, b, sched));
    const MassEstimate damped_energy = energy(damped.chain, pw, p, quad, std::ldexp(1.0, n_cubes + 3));
    res.checks.push_back({"finite-energy witnesses converge", all_verdicts(conv, TraceVerdict::Converged),
                          Json{{"energy", to_json(damped_energy)}, {"traces", verdict_list(conv)}}});
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 6: radial weights.

CriterionResult radial_criterion(const SuiteOptions& o) {
    const int d = 3;
    const QuadratureConfig quad = base_quad(o);
    CriterionResult res{6, "radial weights: window infimum decides vertical limits", {}};

    const WeightSpec sinw = WeightSpec::radial(d, RadialProfile::sinusoid(2.0, 1.0, 1.0));
    const InfimumReport window = radial_window_infimum(sinw, 1024.0);
    const double oracle_value = 2.0 - 2.0 * std::sin(0.5);
    res.checks.push_back({"2+sin(s): window infimum bounded below",
                          window.trend == InfimumTrend::BoundedBelow && window.value >= oracle_value - 1e-6,
                          Json{{"trend", to_string(window.trend)}, {"value", window.value}, {"oracle", oracle_value}}});

    std::vector<Cube> dyadic, quartic;
    std::vector<double> dyadic_amp, quartic_amp;
    for (int i = 1; i <= 52; ++i) {
        dyadic.push_back(Cube{Vec::join(Vec::zeros(d - 1), std::ldexp(1.0, i)), 1.0});
        dyadic_amp.push_back(std::pow(0.25, i));
    }
    for (int i = 1; i <= 26; ++i) {
        quartic.push_back(Cube{Vec::join(Vec::zeros(d - 1), std::ldexp(1.0, 2 * i) + 0.5), 1.0});
        quartic_amp.push_back(std::pow(0.5, i));
    }
    const std::vector<Vec> inner_bases{Vec{0.0, 0.0}, Vec{0.2, 0.2}, Vec{-0.2, 0.1}};
    Schedule within;
    within.n = 201;
    Json chains = Json::array();
    bool converged = true;
    for (const auto& [cubes, amps] : {std::pair{dyadic, dyadic_amp}, std::pair{quartic, quartic_amp}}) {
        const TestFunction chain = bump_chain(cubes, amps);
        double weighted = 0.0;
        for (std::size_t k = 0; k < cubes.size(); ++k) weighted += amps[k] * region_mass(sinw, cubes[k], quad).value;
        std::vector<TraceReport> traces;
        for (const Vec& b : inner_bases) traces.push_back(trace_vertical(chain, b, within));
        converged = converged && std::isfinite(weighted) && all_verdicts(traces, TraceVerdict::Converged);
        chains.push_back(Json{{"sum_amplitude_mass", weighted}, {"traces", verdict_list(traces)}});
    }
    res.checks.push_back({"chains with finite amplitude-mass sums converge", converged, chains});

    const WeightSpec capped = WeightSpec::radial(d, RadialProfile::capped_power(0.5));
    const InfimumReport vanishing = radial_window_infimum(capped, 1024.0);
    res.checks.push_back({"min(1,s^-1/2): window infimum vanishes", vanishing.trend == InfimumTrend::Vanishing,
                          Json{{"trend", to_string(vanishing.trend)}, {"slope", vanishing.slope}}});

    const StripChain strips = strip_chain(capped, 16, quad, 40);
    Schedule sched;
    sched.ratio = std::numbers::sqrt2;
    sched.n = 2 * static_cast<int>(std::ceil(std::log2(strips.strips.back().center.last() + 1.0))) + 3;
    for (const auto& s : strips.strips) sched.anchors.push_back(s.center.last());
    std::vector<TraceReport> traces;
    for (const Vec& b : inner_bases) traces.push_back(trace_vertical(strips.chain, b, sched));
    Json heights = Json::array();
    for (const auto& s : strips.strips) heights.push_back(s.center.last() - 0.5);
    res.checks.push_back({"strip chain oscillates on its base cube", all_verdicts(traces, TraceVerdict::Oscillating),
                          Json{{"strip_heights", heights}, {"traces", verdict_list(traces)}}});
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 7: estimator sanity.

struct MassCase {
    std::string name;
    WeightSpec weight;
    Region region;
};

std::vector<MassCase> mass_cases() {
    const Vec o3 = Vec::zeros(3);
    return {
        {"constant d=2 annulus A_0", WeightSpec::constant(2, 1.0), Region{DyadicAnnulus(0, 2).shell()}},
        {"power -1.5 d=3 annulus A_2", WeightSpec::power(3, -1.5), Region{DyadicAnnulus(2, 3).shell()}},
        {"power 1 d=3 annulus A_0", WeightSpec::power(3, 1.0), Region{DyadicAnnulus(0, 3).shell()}},
        {"power -1 d=3 ball B(0,2)", WeightSpec::power(3, -1.0), Region{ball(o3, 2.0)}},
        {"2+sin d=3 annulus A_3", WeightSpec::radial(3, RadialProfile::sinusoid(2.0, 1.0, 1.0)),
         Region{DyadicAnnulus(3, 3).shell()}},
        {"capped power d=3 annulus A_0", WeightSpec::radial(3, RadialProfile::capped_power(0.5)),
         Region{DyadicAnnulus(0, 3).shell()}},
        {"half-line power d=2 box", WeightSpec::half_line_power(2, 0.5), Region{Box{Vec{0.0, 4.0}, Vec{1.0, 9.0}}}},
        {"product d=3 box", WeightSpec::product(WeightSpec::constant(2, 2.0), WeightSpec::power(1, 0.5)),
         Region{Box{Vec{-1.0, -1.0, 1.0}, Vec{1.0, 1.0, 3.0}}}},
    };
}

CriterionResult estimator_criterion(const SuiteOptions& o) {
    const QuadratureConfig quad = base_quad(o);
    CriterionResult res{7, "estimator sanity", {}};

    Json ap = Json::array();
    bool ap_ok = true;
    for (double p : {1.0, 2.0, 3.0}) {
        BallSampling balls;
        balls.center_box = Cube{Vec::zeros(3), 4.0};
        const ApEstimate est = estimate_ap_constant(WeightSpec::constant(3, 1.0), p, quad, balls);
        ap_ok = ap_ok && std::fabs(est.value - 1.0) <= 1e-9;
        ap.push_back(Json{{"p", p}, {"value", est.value}});
    }
    res.checks.push_back({"constant weight: A_p constant is 1", ap_ok, ap});

    Json dbl = Json::array();
    bool dbl_ok = true;
    for (int d : {2, 3}) {
        QuadratureConfig mc = quad;
        mc.force_monte_carlo = true;
        BallSampling balls;
        balls.center_box = Cube{Vec::zeros(d), 4.0};
        const DoublingEstimate est = estimate_doubling(WeightSpec::constant(d, 1.0), mc, balls);
        const double target = std::ldexp(1.0, d);
        dbl_ok = dbl_ok && std::fabs(est.value - target) <= 0.02 * target;
        dbl.push_back(Json{{"d", d}, {"value", est.value}, {"target", target}});
    }
    res.checks.push_back({"constant weight: doubling constant is 2^d within 2%", dbl_ok, dbl});

    Json cases = Json::array();
    bool cover_ok = true;
    const int trials = 1000;
    for (const auto& c : mass_cases()) {
        const auto exact = closed_form_mass(c.weight, c.region);
        if (!exact) {
            cover_ok = false;
            cases.push_back(Json{{"case", c.name}, {"error", "no closed form"}});
            continue;
        }
        int covered = 0;
        for (int k = 0; k < trials; ++k) {
            QuadratureConfig mc = quad;
            mc.seed = derive_seed(o.seed, 7, static_cast<std::uint64_t>(k));
            mc.force_monte_carlo = true;
            mc.relative_error_target = 0.0;
            const MassEstimate m = region_mass(c.weight, c.region, mc);
            if (std::fabs(m.value - *exact) <= 3.0 * m.std_error + 1e-12 * std::fabs(*exact)) ++covered;
        }
        const double rate = static_cast<double>(covered) / trials;
        cover_ok = cover_ok && rate >= 0.99;
        cases.push_back(Json{{"case", c.name}, {"closed_form", *exact}, {"coverage", rate}});
    }
    res.checks.push_back({"Monte Carlo within 3 sigma of the closed form in >= 99% of 1000 trials", cover_ok, cases});
    return res;
}

}  // namespace

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
    SuiteReport rep;
    rep.suite = name;
    if (name == "remark-1-1") {
        rep.criteria.push_back(power_grid(options));
        rep.criteria.push_back(axis_chain_criterion(options));
        rep.criteria.push_back(averages_criterion(options));
    } else if (name == "uspenskii") {
        rep.criteria.push_back(loglog_criterion(options));
    } else if (name == "lemma-3-5") {
        rep.criteria.push_back(witness_criterion(options));
    } else if (name == "fefferman-product") {
        rep.criteria.push_back(product_criterion(options));
    } else if (name == "radial-thm") {
        rep.criteria.push_back(radial_criterion(options));
    } else if (name == "estimators") {
        rep.criteria.push_back(estimator_criterion(options));
    } else {
        throw SpecError("unknown suite '" + name + "'");
    }
    return rep;
}

Json to_json(const SuiteReport& report) {
    Json criteria = Json::array();
    for (const auto& c : report.criteria) {
        Json checks = Json::array();
        for (const auto& ch : c.checks)
            checks.push_back(Json{{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
        criteria.push_back(Json{{"id", c.id}, {"title", c.title}, {"passed", c.passed()}, {"checks", checks}});
    }
    return Json{{"suite", report.suite}, {"passed", report.passed()}, {"criteria", criteria}};
}

}  // namespace limlab
