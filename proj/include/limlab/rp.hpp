#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "limlab/weights.hpp"

namespace limlab {

enum class SeriesVerdict { Converged, Diverged, Inconclusive };
std::string to_string(SeriesVerdict v);

/// Inclusive annulus index range; indices start at 1 by default.
struct IndexRange {
    int min = 1;
    int max = 30;
    int count() const { return max - min + 1; }
};

struct SeriesClassification {
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
    /// Least-squares slope of log2(term) per index over the last half.
    double trend_slope = 0.0;
    /// 2^trend_slope.
    double ratio = 1.0;
    /// Set when fewer than 8 terms were supplied.
    bool too_short = false;
};

/// Tail-trend classification of a nonnegative series.
///
/// p > 1 (sums): geometric fit on the last half; ratio <= 0.9 is Converged, ratio >= 1 with
/// terms bounded away from 0 is Diverged, anything else Inconclusive.
/// p = 1 (suprema): a running maximum that is flat across the last half is Converged ("finite"),
/// one still strictly increasing at every step of the last half is Diverged.
SeriesClassification classify_series(std::span<const double> terms, double p = 2.0);

/// Per-annulus terms of R_p(w): (2^i)^{p/(p-1)} (∫_{A_i} w)^{1/(1-p)} for p > 1, 2^i (∫_{A_i} w)^{-1} for p = 1.
struct RpReport {
    double p = 2.0;
    IndexRange range;
    /// Annulus center; (0̄, t) for translated weights.
    Vec center;
    std::vector<double> terms;
    std::vector<double> term_std_errors;
    /// Running sums (p > 1) or running maxima (p = 1).
    std::vector<double> partial;
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
    double trend_slope = 0.0;
    bool too_short = false;
    bool all_closed_form = true;

    double total() const { return partial.empty() ? 0.0 : partial.back(); }
};

RpReport rp_terms(const WeightSpec& spec, double p, IndexRange range, const QuadratureConfig& quad);

/// R_p of the vertically translated weight, realized on annuli centered at (0̄, t).
RpReport rp_translated(const WeightSpec& spec, double p, double t, IndexRange range, const QuadratureConfig& quad);

enum class SweepVerdict { UniformlyBounded, Growing, Inconclusive };
std::string to_string(SweepVerdict v);

struct RpSweep {
    std::vector<std::pair<double, RpReport>> reports;
    SweepVerdict verdict = SweepVerdict::Inconclusive;
    /// total(t_max) / total(first t in the top decade).
    double top_decade_growth = 1.0;
    /// sup of totals over the top decade / sup over the earlier grid, minus 1.
    double top_decade_sup_excess = 0.0;
};

/// sup_t R_p(w_t) over an increasing grid (>= 6 points spanning >= 3 decades).
/// Growing when totals at least double across the top decade; UniformlyBounded when the running
/// supremum rises by less than 10% across it.
RpSweep sup_rp_sweep(const WeightSpec& spec, double p, std::span<const double> t_grid, IndexRange range,
                     const QuadratureConfig& quad);

/// Two-column (i, term) table with a header line.
std::string rp_table_csv(const RpReport& report);

}  // namespace limlab
