#pragma once

#include <string>
#include <vector>

#include "limlab/weights.hpp"

namespace limlab {

/// How test balls are drawn: log-uniform radii in [r_min, r_max], centers uniform in center_box,
/// except every `origin_every`-th ball (starting with the first), which is centered at the origin.
/// Each ball is split into `depth` dyadic shells around its center plus a core ball of radius r 2^-depth,
/// sampled equally and weighted by volume, so singular behaviour at the center is resolved.
struct BallSampling {
    int n_balls = 64;
    double r_min = 0.1;
    double r_max = 10.0;
    Cube center_box{Vec::zeros(2), 4.0};
    int origin_every = 4;
    int depth = 8;

    void validate(int d) const;
};

struct ApEstimate {
    double p = 2.0;
    /// Largest sampled A_p product (p > 1) or ratio avg w * sup 1/w (p = 1).
    double value = 1.0;
    int n_balls = 0;
    double r_min = 0.0;
    double r_max = 0.0;
    Cube center_box;
    long samples_per_ball = 0;
    int depth = 0;
    long defects = 0;
    /// The ball that attained the maximum.
    Vec argmax_center;
    double argmax_radius = 0.0;
};

/// Sampled sup over balls of (avg_B w)(avg_B w^{-1/(p-1)})^{p-1}, or (avg_B w)(sup_B 1/w) for p = 1.
/// Averages are Lebesgue-uniform in-ball sample means; ball k draws from its own stream, so adding
/// balls never lowers the estimate.
ApEstimate estimate_ap_constant(const WeightSpec& spec, double p, const QuadratureConfig& quad,
                                const BallSampling& balls);

enum class MembershipVerdict { Bounded, Growing };
std::string to_string(MembershipVerdict v);

struct ApMembership {
    double p = 2.0;
    std::vector<ApEstimate> levels;
    /// Least-squares slope of log2(estimate) per level.
    double slope = 0.0;
    MembershipVerdict verdict = MembershipVerdict::Bounded;
};

/// A_p estimates over nested configurations: level k uses radii [2^{-k}, 2^k], a center box of edge
/// 2^k and 4^k times the base sample count. Growing when log2(estimate) rises by more than 0.1 per level.
ApMembership ap_membership_sweep(const WeightSpec& spec, double p, int levels, int n_balls,
                                 const QuadratureConfig& quad);

struct DoublingEstimate {
    double value = 0.0;
    int n_balls = 0;
    /// Balls skipped because the inner mass was indistinguishable from zero.
    int skipped = 0;
};

/// Sampled sup over balls of w(B(x,2r)) / w(B(x,r)).
DoublingEstimate estimate_doubling(const WeightSpec& spec, const QuadratureConfig& quad, const BallSampling& balls);

enum class InfimumTrend { BoundedBelow, Vanishing, Inconclusive };
std::string to_string(InfimumTrend t);

struct InfimumReport {
    double value = 0.0;
    /// Human-readable description of the minimizing region.
    std::string argmin;
    InfimumTrend trend = InfimumTrend::Inconclusive;
    /// Fitted slope of log(min) against log(scale) over the last half.
    double slope = 0.0;
    std::vector<double> scales;
    std::vector<double> minima;
};

/// Trend rule shared by the infimum searches. A slope below -0.05 with terminal value under a tenth
/// of the initial one is Vanishing; any slope >= -0.05 is BoundedBelow; the rest is Inconclusive.
void classify_infimum_trend(InfimumReport& report);

/// Minimum mass of unit cubes centered on lattice points (step grid_step) in B(0, R).
/// Per dyadic shell {2^{j-1} <= |c| < 2^j} the search visits lattice points on the axes, the
/// diagonals and `extra_directions` seeded random directions at three radii.
InfimumReport unit_cube_infimum(const WeightSpec& spec, double search_radius, double grid_step,
                                const QuadratureConfig& quad, int extra_directions = 8);

/// Minimum over z = 1..z_max of w(Q x [z, z+1]) for a cube Q in the first d-1 coordinates.
InfimumReport strip_infimum(const WeightSpec& spec, const Cube& base, int z_max, const QuadratureConfig& quad);

/// Minimum over r in {0, step, 2 step, ...} <= r_max of ∫_r^{r+1} v(s) ds, by adaptive Gauss-Kronrod.
InfimumReport radial_window_infimum(const WeightSpec& spec, double r_max, double step = 1.0 / 16.0);

}  // namespace limlab
