#include "limlab/rp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "limlab/format.hpp"
#include "limlab/trend.hpp"

namespace limlab {

namespace {

// Floating-point slack for "ratio >= 1" and "running maximum is flat".
constexpr double kUnitRatioSlack = 1e-9;

}  // namespace

std::string to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Converged: return "Converged";
        case SeriesVerdict::Diverged: return "Diverged";
        case SeriesVerdict::Inconclusive: break;
    }
    return "Inconclusive";
}

std::string to_string(SweepVerdict v) {
    switch (v) {
        case SweepVerdict::UniformlyBounded: return "UniformlyBounded";
        case SweepVerdict::Growing: return "Growing";
        case SweepVerdict::Inconclusive: break;
    }
    return "Inconclusive";
}

SeriesClassification classify_series(std::span<const double> terms, double p) {
    SeriesClassification out;
    if (terms.size() < 8) {
        out.too_short = true;
        return out;
    }
    for (double t : terms)
        if (!(t >= 0.0)) throw std::invalid_argument("series terms must be nonnegative");

    const std::size_t mid = terms.size() / 2;
    const auto tail = terms.subspan(mid);

    if (std::any_of(tail.begin(), tail.end(), [](double t) { return std::isinf(t); })) {
        out.verdict = SeriesVerdict::Diverged;
        out.trend_slope = std::numeric_limits<double>::infinity();
        out.ratio = out.trend_slope;
        return out;
    }
    const bool tail_has_zero = std::any_of(tail.begin(), tail.end(), [](double t) { return t == 0.0; });
    if (!tail_has_zero) {
        std::vector<double> xs, ys;
        for (std::size_t k = 0; k < tail.size(); ++k) {
            xs.push_back(static_cast<double>(mid + k));
            ys.push_back(std::log2(tail[k]));
        }
        out.trend_slope = least_squares_slope(xs, ys);
        out.ratio = std::exp2(out.trend_slope);
    } else {
        out.trend_slope = -std::numeric_limits<double>::infinity();
        out.ratio = 0.0;
    }

    if (p > 1.0) {
        if (out.ratio <= 0.9)
            out.verdict = SeriesVerdict::Converged;
        else if (out.ratio >= 1.0 - kUnitRatioSlack && !tail_has_zero)
            out.verdict = SeriesVerdict::Diverged;
        return out;
    }

    // p = 1: behaviour of the running maximum over the last half.
    std::vector<double> running(terms.size());
    double m = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) running[k] = m = std::max(m, terms[k]);
    if (running.back() <= running[mid - 1] * (1.0 + kUnitRatioSlack)) {
        out.verdict = SeriesVerdict::Converged;
        return out;
    }
    bool strictly = true;
    for (std::size_t k = mid; k < running.size(); ++k)
        if (!(running[k] > running[k - 1] * (1.0 + kUnitRatioSlack))) strictly = false;
    if (strictly) out.verdict = SeriesVerdict::Diverged;
    return out;
}

namespace {

RpReport rp_on_center(const WeightSpec& spec, double p, const Vec& center, IndexRange range,
                      const QuadratureConfig& quad) {
    if (!(p >= 1.0)) throw SpecError("R_p needs p >= 1");
    if (range.min > range.max) throw SpecError("empty annulus index range");
    if (range.max > 60) throw SpecError("i_max must be <= 60");
    if (range.min < -60) throw SpecError("i_min must be >= -60");

    RpReport rep;
    rep.p = p;
    rep.range = range;
    rep.center = center;
    double running = 0.0;
    for (int i = range.min; i <= range.max; ++i) {
        const DyadicAnnulus annulus(i, center);
        const MassEstimate mass = annulus_mass(spec, annulus, quad);
        std::ostringstream what;
        what << "annulus A_" << i;
        double scale_log2, power;
        if (p > 1.0) {
            scale_log2 = i * p / (p - 1.0);
            power = 1.0 / (1.0 - p);
        } else {
            scale_log2 = i;
            power = -1.0;
        }
        const MassEstimate dual = mass_power(mass, power, what.str());
        const double scale = std::exp2(scale_log2);
        const double term = scale * dual.value;
        rep.terms.push_back(term);
        rep.term_std_errors.push_back(scale * dual.std_error);
        running = p > 1.0 ? running + term : std::max(running, term);
        rep.partial.push_back(running);
        rep.all_closed_form = rep.all_closed_form && mass.method == MassMethod::ClosedForm;
    }
    const auto cls = classify_series(rep.terms, p);
    rep.verdict = cls.verdict;
    rep.trend_slope = cls.trend_slope;
    rep.too_short = cls.too_short;
    return rep;
}

}  // namespace

RpReport rp_terms(const WeightSpec& spec, double p, IndexRange range, const QuadratureConfig& quad) {
    return rp_on_center(spec, p, Vec::zeros(spec.dim()), range, quad);
}

RpReport rp_translated(const WeightSpec& spec, double p, double t, IndexRange range, const QuadratureConfig& quad) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw SpecError("translation t must be finite and >= 0");
    Vec center = Vec::zeros(spec.dim());
    center[spec.dim() - 1] = t;
    return rp_on_center(spec, p, center, range, quad);
}

RpSweep sup_rp_sweep(const WeightSpec& spec, double p, std::span<const double> t_grid, IndexRange range,
                     const QuadratureConfig& quad) {
    if (t_grid.size() < 6) throw SpecError("t grid needs at least 6 points");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1])) throw SpecError("t grid must be strictly increasing");
    const double t_min = t_grid.front(), t_max = t_grid.back();
    if (!(t_min > 0.0) || t_max / t_min < 1e3) throw SpecError("t grid must be positive and span >= 3 decades");

    RpSweep out;
    for (double t : t_grid) out.reports.emplace_back(t, rp_translated(spec, p, t, range, quad));

    const double top_start = t_max / 10.0;
    std::size_t first_top = 0;
    while (t_grid[first_top] < top_start) ++first_top;
    double sup_before = 0.0, sup_top = 0.0;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        const double v = out.reports[k].second.total();
        (k < first_top ? sup_before : sup_top) = std::max(k < first_top ? sup_before : sup_top, v);
    }
    out.top_decade_growth = out.reports.back().second.total() / out.reports[first_top].second.total();
    out.top_decade_sup_excess = sup_top / sup_before - 1.0;
    if (out.top_decade_growth >= 2.0)
        out.verdict = SweepVerdict::Growing;
    else if (out.top_decade_sup_excess < 0.10)
        out.verdict = SweepVerdict::UniformlyBounded;
    return out;
}

std::string rp_table_csv(const RpReport& report) {
    std::string out = "i,term\n";
    for (std::size_t k = 0; k < report.terms.size(); ++k) {
        out += std::to_string(report.range.min + static_cast<int>(k));
        out += ',';
        out += format_double(report.terms[k]);
        out += '\n';
    }
    return out;
}

}  // namespace limlab
