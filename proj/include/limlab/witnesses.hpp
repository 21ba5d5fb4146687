#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "limlab/rp.hpp"
#include "limlab/weights.hpp"

namespace limlab {

// ---------------------------------------------------------------------------
// Test functions: u together with an explicit gradient-norm field g >= |∇u|.

struct ConstantFunction {
    double value = 0.0;
};
/// u = log log(2 + |x|^2).
struct LogLogFunction {};
/// u = 1/|x|, singular at the origin.
struct InverseRadiusFunction {};

/// Plateau-pyramid bump: psi_Q(y) = clamp(2 - 4 |y - c|_inf / l, 0, 1).
/// Equals 1 on Q/2, vanishes off Q, and |∇psi_Q| = 4/l on Q \ Q/2 (<= 2d/l).
struct Bump {
    Cube cube;
    double amplitude = 1.0;
};
struct BumpChainFunction {
    std::vector<Bump> bumps;
};

/// Radial u(x) = ∫_0^{|x|} g(s) ds with g piecewise constant on [radii[k], radii[k+1]).
struct RadialTableFunction {
    std::vector<double> radii;
    std::vector<double> levels;
    /// u at radii[k].
    std::vector<double> base;
};

class TestFunction {
public:
    using Variant =
        std::variant<ConstantFunction, LogLogFunction, InverseRadiusFunction, BumpChainFunction, RadialTableFunction>;

    TestFunction(int d, Variant v);

    static TestFunction constant(int d, double c);
    static TestFunction loglog(int d);
    static TestFunction inverse_radius(int d);
    /// levels[k] on [radii[k], radii[k+1]); zero below radii[0] and beyond radii.back().
    static TestFunction radial_table(int d, std::vector<double> radii, std::vector<double> levels);

    int dim() const { return dim_; }
    const Variant& variant() const { return variant_; }
    std::string kind() const;

    /// u(x); throws SingularPointError on the declared singular set.
    double value(const Vec& x) const;
    /// g(x) >= |∇u(x)|, exact off the kinks.
    double grad_norm(const Vec& x) const;
    bool is_singular(const Vec& x) const;

private:
    int dim_;
    Variant variant_;
};

/// u = log log(2 + |x|^2), g = 2|x| / ((2 + |x|^2) log(2 + |x|^2)).
TestFunction loglog_function(int d);

/// Single bump of amplitude 1 on Q.
TestFunction hat_bump(const Cube& q);

/// Sum of amplitude_i psi_{Q_i}; cubes must have pairwise disjoint interiors.
TestFunction bump_chain(const std::vector<Cube>& cubes, const std::vector<double>& amplitudes);

/// Q(2^i e_d, 2) for i = i_min..i_max with unit amplitudes.
TestFunction axis_chain(int d, int i_min, int i_max);

// ---------------------------------------------------------------------------
// Energies ∫ g^p w.

/// Per-bump energies amplitude^p (4/l)^p w(Q \ Q/2).
std::vector<MassEstimate> bump_energies(const TestFunction& fn, const WeightSpec& spec, double p,
                                        const QuadratureConfig& quad);

/// Cumulative energies over B(0, 2^j), j = 0..j_max, accumulated shell by shell.
std::vector<MassEstimate> nested_energies(const TestFunction& fn, const WeightSpec& spec, double p,
                                          const QuadratureConfig& quad, int j_max);

/// ∫_{B(0,R)} g^p w dx. Bump chains sum the per-bump energies of bumps centered inside B(0,R);
/// other functions integrate shell by shell over dyadic shells clipped at R.
MassEstimate energy(const TestFunction& fn, const WeightSpec& spec, double p, const QuadratureConfig& quad,
                    double truncation_radius);

/// ∫_{B(0,R_max) \ B(0,r)} g^p w dx (bump chains: bumps centered in that shell).
MassEstimate tail_energy(const TestFunction& fn, const WeightSpec& spec, double p, const QuadratureConfig& quad,
                         double r, double r_max);

// ---------------------------------------------------------------------------
// Divergence witness for R_p(w) = ∞.

struct DivergenceWitness {
    double p = 2.0;
    /// Inclusive annulus index ranges of the completed blocks (p = 1: single annuli b_k).
    std::vector<std::pair<int, int>> blocks;
    /// Block sums of R_p terms (p = 1: the selected term 2^b / w(A_b)).
    std::vector<double> block_sums;
    /// g on annulus A_i for i = first_index..; zero outside the completed blocks.
    int first_index = 1;
    std::vector<double> levels;
    /// Energy bound realized by the construction: sum_k S_k^{1-p} (p = 1: sum_k w(A_{b_k}) 2^{-b_k}).
    double construction_bound = 0.0;
    /// sum_{k=1}^{K} 2^{-k(p-1)}.
    double geometric_bound = 0.0;
    /// Outer radius exponent m of the last completed block and u(2^m) / 2^m there.
    int top_exponent = 0;
    double kappa = 0.0;
    RpReport rp;
    TestFunction function{2, ConstantFunction{}};
};

/// Greedy block selection over annuli 1..i_max of a radial weight with R_p(w) = ∞.
/// Throws PreconditionError unless the rp verdict is Diverged and the weight is radial, and
/// NumericalError when fewer than 3 blocks complete within the budget.
DivergenceWitness divergence_witness(const WeightSpec& spec, double p, int i_max, const QuadratureConfig& quad);

// ---------------------------------------------------------------------------
// Constructions.

struct GaussianCubeFamily {
    std::vector<Vec> centers;
    std::vector<Cube> cubes;
    WeightSpec weight;
};

/// Cubes Q((x̄_i, 4i), 1/(2 i^{1/(d-1)})) with x̄_i standard Gaussian and the depression weight
/// min{1, min_i |x - x̂_i|^alpha}; requires p, q in (1, d), (p+d-1)/d < q <= p, alpha in (p-1, d(q-1)).
GaussianCubeFamily gaussian_cube_family(std::uint64_t seed, int n, int d, double alpha, double p, double q);

/// Partial sums of w(2Q_i) l(Q_i)^{-p} over the family.
std::vector<double> gaussian_family_series(const GaussianCubeFamily& family, double p, const QuadratureConfig& quad);

enum class TowerWeight { Product, Radial };

struct TowerFamily {
    WeightSpec weight;
    /// Q_i = Q((0̄, 2^i), 2^{beta i}), i = 2..n+1; the chain carries bumps on 2Q_i.
    std::vector<Cube> cubes;
    TestFunction chain;
};

TowerFamily tower_family(TowerWeight kind, int d, double p, double alpha, double beta, int n_cubes = 20,
                           double amplitude_decay = 1.0);

/// Corridor weight with the admissible parameter ranges enforced.
WeightSpec corridor_counterexample(int d, double p, double q, double alpha, double beta);

struct StripChain {
    /// All selected strips Q x [n_i, n_i + 1]; bumps sit on the even-indexed ones (i = 2, 4, ...).
    std::vector<Cube> strips;
    std::vector<double> masses;
    TestFunction chain;
};

/// Strips over the unit base cube at heights 4^j, each with mass <= 1/i^2 and pairwise disjoint
/// doubles; u = sum of bumps on the even-indexed strips.
StripChain strip_chain(const WeightSpec& spec, int n_strips, const QuadratureConfig& quad, int max_exponent = 30);

}  // namespace limlab
