#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "limlab/weights.hpp"
#include "limlab/witnesses.hpp"

namespace limlab {

/// Increasing sample parameters t_j = t0 * ratio^j, j = 0..n-1, merged with optional anchor points.
struct Schedule {
    double t0 = 1.0;
    double ratio = 1.189207115002721;  // 2^{1/4}
    int n = 241;
    std::vector<double> anchors;

    /// Sorted, de-duplicated sample points.
    std::vector<double> points() const;
    /// Throws SpecError unless there are >= 50 points spanning >= 6 decades.
    void validate() const;
};

struct TraceConfig {
    double tolerance = 1e-6;
    double oscillation_factor = 10.0;
    /// Fraction of samples (from the end) used for the convergence test.
    double window_fraction = 0.25;
    /// Rises above the value at the start of the last half that a divergent trace must cross.
    std::array<double, 3> levels{0.1, 0.2, 0.3};
};

enum class TraceVerdict { Converged, Oscillating, DivergentToInfinity, Inconclusive };
std::string to_string(TraceVerdict v);

struct TraceReport {
    /// "ray" (u(t xi)) or "vertical" (u(x̄, t)).
    std::string line;
    /// xi for rays, x̄ for vertical lines.
    Vec base;
    std::vector<double> t;
    std::vector<double> u;
    TraceVerdict verdict = TraceVerdict::Inconclusive;
    double limit = 0.0;
    double residual = 0.0;
    double amplitude = 0.0;
    /// Schedule points skipped because they hit the function's singular set.
    long skipped = 0;
    TraceConfig config;
};

/// Verdict from samples alone, checked in order:
///  Converged: max |u - c| over the last window < tolerance, c the final sample.
///  DivergentToInfinity: the last half is nondecreasing and crosses all preset levels.
///  Oscillating: >= 3 of 4 disjoint blocks of the last half have range >= factor * tolerance and the
///  last half is not monotone.
void classify_trace(TraceReport& report);

TraceReport trace_ray(const TestFunction& fn, const Vec& direction, const Schedule& schedule,
                      const TraceConfig& cfg = {});
TraceReport trace_vertical(const TestFunction& fn, const Vec& base, const Schedule& schedule,
                           const TraceConfig& cfg = {});

/// CSV with a leading "# verdict=..." line then "t,u" rows at round-trip precision.
std::string trace_csv(const TraceReport& report);

struct LimitCensus {
    std::vector<Vec> lines;
    std::vector<TraceVerdict> verdicts;
    std::vector<double> limits;
    double converged_fraction = 0.0;
    double oscillating_fraction = 0.0;
    double divergent_fraction = 0.0;
    double inconclusive_fraction = 0.0;
    /// Most common converged limit; set only when >= 50% of the lines converge.
    std::optional<double> modal_limit;
    /// Fraction of lines converging to modal_limit within tolerance.
    double agreeing_fraction = 0.0;
};

LimitCensus radial_census(const TestFunction& fn, int n_rays, const Schedule& schedule, std::uint64_t seed,
                          const TraceConfig& cfg = {});
LimitCensus vertical_census(const TestFunction& fn, const std::vector<Vec>& bases, const Schedule& schedule,
                            const TraceConfig& cfg = {});

struct AverageEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Mean of |u(r xi) - c| over n_dirs uniform directions.
AverageEstimate sphere_average(const TestFunction& fn, double r, double c, int n_dirs, std::uint64_t seed);
/// Lebesgue average of |u - c| over B(0,t) \ B(0,t/2).
AverageEstimate annulus_average(const TestFunction& fn, double t, double c, const QuadratureConfig& quad);
/// Lebesgue average of |u - c| over B(x, |x|/2).
AverageEstimate offcenter_average(const TestFunction& fn, const Vec& x, double c, const QuadratureConfig& quad);

struct CubeAverage {
    double value = 0.0;
    double std_error = 0.0;
    double mass = 0.0;
    /// Mass indistinguishable from zero; value is meaningless.
    bool flagged = false;
};

/// Weighted averages ∫_Q u w / ∫_Q w from shared samples.
std::vector<CubeAverage> cube_average_sequence(const TestFunction& fn, const WeightSpec& spec,
                                               const std::vector<Cube>& cubes, const QuadratureConfig& quad);

struct DecayRow {
    double r = 0.0;
    /// |S^{d-1}| times the sphere average of |u(r xi) - c|.
    double lhs = 0.0;
    /// (∫_{B(0,R_max) \ B(0,r)} g^p w)^{1/p}.
    double rhs = 0.0;
    double ratio = 0.0;
};

/// Requires an rp verdict of Converged for (spec, p) over annuli 1..30.
std::vector<DecayRow> decay_ratio_check(const TestFunction& fn, const WeightSpec& spec, double p,
                                        const std::vector<double>& r_grid, double c, const QuadratureConfig& quad,
                                        double r_max, int n_dirs = 100000);

}  // namespace limlab
