#include "limlab/limits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "limlab/format.hpp"
#include "limlab/integrate.hpp"
#include "limlab/rng.hpp"

namespace limlab {

namespace {

constexpr std::uint64_t kSphereSalt = 0x5e4e;
constexpr std::uint64_t kAverageSalt = 0xa7e;
constexpr std::uint64_t kCubeAverageSalt = 0xc0be;

bool nondecreasing(const std::vector<double>& u, std::size_t from) {
    for (std::size_t k = from + 1; k < u.size(); ++k)
        if (u[k] < u[k - 1]) return false;
    return true;
}

bool nonincreasing(const std::vector<double>& u, std::size_t from) {
    for (std::size_t k = from + 1; k < u.size(); ++k)
        if (u[k] > u[k - 1]) return false;
    return true;
}

template <class Eval>
TraceReport run_trace(std::string line, const Vec& base, const Schedule& schedule, const TraceConfig& cfg,
                      Eval&& at) {
    schedule.validate();
    TraceReport rep;
    rep.line = std::move(line);
    rep.base = base;
    rep.config = cfg;
    for (double t : schedule.points()) {
        try {
            const double u = at(t);
            rep.t.push_back(t);
            rep.u.push_back(u);
        } catch (const SingularPointError&) {
            ++rep.skipped;
        }
    }
    classify_trace(rep);
    return rep;
}

LimitCensus summarize(std::vector<TraceReport> reports, const TraceConfig& cfg) {
    LimitCensus out;
    const double n = static_cast<double>(reports.size());
    std::vector<double> converged;
    for (auto& r : reports) {
        out.lines.push_back(r.base);
        out.verdicts.push_back(r.verdict);
        out.limits.push_back(r.limit);
        switch (r.verdict) {
            case TraceVerdict::Converged:
                out.converged_fraction += 1.0 / n;
                converged.push_back(r.limit);
                break;
            case TraceVerdict::Oscillating: out.oscillating_fraction += 1.0 / n; break;
            case TraceVerdict::DivergentToInfinity: out.divergent_fraction += 1.0 / n; break;
            case TraceVerdict::Inconclusive: out.inconclusive_fraction += 1.0 / n; break;
        }
    }
    if (2 * converged.size() < reports.size() || converged.empty()) return out;
    std::sort(converged.begin(), converged.end());
    std::size_t best = 0, best_count = 0;
    for (std::size_t i = 0; i < converged.size(); ++i) {
        std::size_t j = i;
        while (j < converged.size() && converged[j] - converged[i] <= cfg.tolerance) ++j;
        if (j - i > best_count) {
            best_count = j - i;
            best = i;
        }
    }
    out.modal_limit = converged[best];
    std::size_t agree = 0;
    for (double c : converged)
        if (std::fabs(c - *out.modal_limit) <= cfg.tolerance) ++agree;
    out.agreeing_fraction = static_cast<double>(agree) / n;
    return out;
}

AverageEstimate region_average(const TestFunction& fn, const Region& region, double c, const QuadratureConfig& quad) {
    auto f = [&](const Vec& x) -> std::optional<double> {
        if (fn.is_singular(x)) return std::nullopt;
        return std::fabs(fn.value(x) - c);
    };
    const auto m = integrate_scalar(region, f, quad, region_salt(region) ^ kAverageSalt);
    const double vol = region_volume(region);
    return AverageEstimate{m.value / vol, m.std_error / vol};
}

}  // namespace

std::vector<double> Schedule::points() const {
    std::vector<double> pts;
    for (int j = 0; j < n; ++j) pts.push_back(t0 * std::pow(ratio, j));
    pts.insert(pts.end(), anchors.begin(), anchors.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

void Schedule::validate() const {
    if (!(t0 > 0.0) || !(ratio > 1.0)) throw SpecError("schedule needs t0 > 0 and ratio > 1");
    for (double a : anchors)
        if (!(a > 0.0) || !std::isfinite(a)) throw SpecError("schedule anchors must be positive and finite");
    const auto pts = points();
    if (pts.size() < 50) throw SpecError("schedule needs at least 50 points");
    if (pts.back() / pts.front() < 1e6) throw SpecError("schedule must span at least 6 decades");
}

std::string to_string(TraceVerdict v) {
    switch (v) {
        case TraceVerdict::Converged: return "Converged";
        case TraceVerdict::Oscillating: return "Oscillating";
        case TraceVerdict::DivergentToInfinity: return "DivergentToInfinity";
        case TraceVerdict::Inconclusive: break;
    }
    return "Inconclusive";
}

void classify_trace(TraceReport& rep) {
    const auto& u = rep.u;
    const auto& cfg = rep.config;
    rep.verdict = TraceVerdict::Inconclusive;
    rep.limit = rep.residual = rep.amplitude = 0.0;
    const std::size_t n = u.size();
    if (n < 8) return;

    const std::size_t window =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(cfg.window_fraction * static_cast<double>(n))));
    const double c = u.back();
    double residual = 0.0;
    for (std::size_t k = n - window; k < n; ++k) residual = std::max(residual, std::fabs(u[k] - c));
    if (std::isfinite(c) && residual < cfg.tolerance) {
        rep.verdict = TraceVerdict::Converged;
        rep.limit = c;
        rep.residual = residual;
        return;
    }

    const std::size_t mid = n / 2;
    if (nondecreasing(u, mid)) {
        bool crosses = true;
        for (double level : cfg.levels) crosses = crosses && u.back() >= u[mid] + level;
        if (crosses) {
            rep.verdict = TraceVerdict::DivergentToInfinity;
            return;
        }
    }

    const std::size_t len = n - mid;
    int active = 0;
    double amplitude = 0.0;
    for (int b = 0; b < 4; ++b) {
        const std::size_t lo = mid + len * b / 4, hi = mid + len * (b + 1) / 4;
        if (hi <= lo) continue;
        const auto [mn, mx] = std::minmax_element(u.begin() + lo, u.begin() + hi);
        const double range = *mx - *mn;
        amplitude = std::max(amplitude, range);
        if (range >= cfg.oscillation_factor * cfg.tolerance) ++active;
    }
    if (active >= 3 && !nondecreasing(u, mid) && !nonincreasing(u, mid)) {
        rep.verdict = TraceVerdict::Oscillating;
        rep.amplitude = amplitude;
    }
}

TraceReport trace_ray(const TestFunction& fn, const Vec& direction, const Schedule& schedule, const TraceConfig& cfg) {
    if (direction.dim() != fn.dim()) throw SpecError("direction dimension does not match test function");
    const double n = direction.norm();
    if (!(n > 0.0)) throw SpecError("direction must be nonzero");
    const Vec xi = direction * (1.0 / n);
    return run_trace("ray", xi, schedule, cfg, [&](double t) { return fn.value(t * xi); });
}

TraceReport trace_vertical(const TestFunction& fn, const Vec& base, const Schedule& schedule, const TraceConfig& cfg) {
    if (base.dim() != fn.dim() - 1) throw SpecError("vertical base must have dimension d-1");
    return run_trace("vertical", base, schedule, cfg, [&](double t) { return fn.value(Vec::join(base, t)); });
}

std::string trace_csv(const TraceReport& rep) {
    std::string out = "# line=" + rep.line + " base=";
    for (int i = 0; i < rep.base.dim(); ++i) out += (i ? ";" : "") + format_double(rep.base[i]);
    out += " verdict=" + to_string(rep.verdict) + " limit=" + format_double(rep.limit) +
           " residual=" + format_double(rep.residual) + " amplitude=" + format_double(rep.amplitude) +
           " skipped=" + std::to_string(rep.skipped) + "\n";
    out += "t,u\n";
    for (std::size_t k = 0; k < rep.t.size(); ++k) out += format_double(rep.t[k]) + "," + format_double(rep.u[k]) + "\n";
    return out;
}

LimitCensus radial_census(const TestFunction& fn, int n_rays, const Schedule& schedule, std::uint64_t seed,
                          const TraceConfig& cfg) {
    if (n_rays < 16) throw SpecError("radial census needs at least 16 rays");
    std::vector<TraceReport> reports;
    for (int k = 0; k < n_rays; ++k) {
        Rng rng(derive_seed(seed, kSphereSalt, static_cast<std::uint64_t>(k)));
        reports.push_back(trace_ray(fn, rng.direction(fn.dim()), schedule, cfg));
    }
    return summarize(std::move(reports), cfg);
}

LimitCensus vertical_census(const TestFunction& fn, const std::vector<Vec>& bases, const Schedule& schedule,
                            const TraceConfig& cfg) {
    if (bases.empty()) throw SpecError("vertical census needs base points");
    std::vector<TraceReport> reports;
    for (const auto& b : bases) reports.push_back(trace_vertical(fn, b, schedule, cfg));
    return summarize(std::move(reports), cfg);
}

AverageEstimate sphere_average(const TestFunction& fn, double r, double c, int n_dirs, std::uint64_t seed) {
    if (!(r > 0.0)) throw SpecError("sphere radius must be positive");
    if (n_dirs < 2) throw SpecError("need at least 2 directions");
    Rng rng(derive_seed(seed, kSphereSalt, std::bit_cast<std::uint64_t>(r)));
    double s = 0.0, s2 = 0.0;
    long n = 0;
    while (n < n_dirs) {
        const Vec x = r * rng.direction(fn.dim());
        if (fn.is_singular(x)) continue;
        const double v = std::fabs(fn.value(x) - c);
        s += v;
        s2 += v * v;
        ++n;
    }
    const double mean = s / n;
    const double var = std::fmax(0.0, (s2 - n * mean * mean) / (n - 1.0));
    return AverageEstimate{mean, std::sqrt(var / n)};
}

AverageEstimate annulus_average(const TestFunction& fn, double t, double c, const QuadratureConfig& quad) {
    if (!(t > 0.0)) throw SpecError("annulus radius must be positive");
    return region_average(fn, Region{Shell{Vec::zeros(fn.dim()), 0.5 * t, t}}, c, quad);
}

AverageEstimate offcenter_average(const TestFunction& fn, const Vec& x, double c, const QuadratureConfig& quad) {
    if (x.dim() != fn.dim()) throw SpecError("point dimension does not match test function");
    const double r = x.norm();
    if (!(r > 0.0)) throw SpecError("off-center ball needs x != 0");
    return region_average(fn, Region{ball(x, 0.5 * r)}, c, quad);
}

std::vector<CubeAverage> cube_average_sequence(const TestFunction& fn, const WeightSpec& spec,
                                               const std::vector<Cube>& cubes, const QuadratureConfig& quad) {
    if (fn.dim() != spec.dim()) throw SpecError("test function and weight dimensions differ");
    std::vector<CubeAverage> out;
    for (const auto& q : cubes) {
        if (q.dim() != spec.dim()) throw SpecError("cube dimension does not match weight");
        const Region region{q.box()};
        auto f = [&](const Vec& x) -> std::optional<std::array<double, 2>> {
            const double w = spec(x);
            if (!(w > 0.0) || !std::isfinite(w) || fn.is_singular(x)) return std::nullopt;
            return std::array<double, 2>{fn.value(x) * w, w};
        };
        const auto est = integrate_vector<2>(region, f, quad, region_salt(region) ^ kCubeAverageSalt, 1);
        CubeAverage a;
        a.mass = est.value[1];
        if (!(a.mass > 2.0 * est.std_error(1)) || !(a.mass > 0.0)) {
            a.flagged = true;
            out.push_back(a);
            continue;
        }
        a.value = est.value[0] / a.mass;
        const double var =
            est.cov[0][0] - 2.0 * a.value * est.cov[0][1] + a.value * a.value * est.cov[1][1];
        a.std_error = std::sqrt(std::fmax(var, 0.0)) / a.mass;
        out.push_back(a);
    }
    return out;
}

std::vector<DecayRow> decay_ratio_check(const TestFunction& fn, const WeightSpec& spec, double p,
                                        const std::vector<double>& r_grid, double c, const QuadratureConfig& quad,
                                        double r_max, int n_dirs) {
    const auto rp = rp_terms(spec, p, IndexRange{1, 30}, quad);
    if (rp.verdict != SeriesVerdict::Converged)
        throw PreconditionError("decay bound needs R_p(w) < infinity; rp verdict is " + to_string(rp.verdict));
    std::vector<DecayRow> rows;
    for (double r : r_grid) {
        if (!(r < r_max)) throw SpecError("decay grid radii must stay below r_max");
        DecayRow row;
        row.r = r;
        row.lhs = sphere_average(fn, r, c, n_dirs, quad.seed).value * sphere_area(fn.dim());
        row.rhs = std::pow(tail_energy(fn, spec, p, quad, r, r_max).value, 1.0 / p);
        row.ratio = row.lhs == 0.0 ? 0.0 : row.lhs / row.rhs;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace limlab
