#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "limlab/errors.hpp"
#include "limlab/geometry.hpp"

namespace limlab {

// ---------------------------------------------------------------------------
// Radial profiles v(s), s >= 0, used by RadialProfile weights w(x) = v(|x|).

/// c * s^exponent
struct PowerSegment {
    double coef = 1.0;
    double exponent = 0.0;
};

/// offset + amplitude * sin(frequency * s), offset > |amplitude|
struct SinusoidSegment {
    double offset = 2.0;
    double amplitude = 1.0;
    double frequency = 1.0;
};

struct ProfileSegment {
    double start = 0.0;
    std::variant<PowerSegment, SinusoidSegment> shape;
};

/// Piecewise profile; segment k covers [start_k, start_{k+1}), the last one extends to infinity.
class RadialProfile {
public:
    RadialProfile() = default;
    explicit RadialProfile(std::vector<ProfileSegment> segments);

    static RadialProfile constant(double c);
    /// min(1, s^{-a}) for a > 0.
    static RadialProfile capped_power(double a);
    static RadialProfile sinusoid(double offset, double amplitude, double frequency);

    double operator()(double s) const;
    /// ∫_a^b v(s) s^n ds in closed form, 0 <= a <= b.
    double moment(double a, double b, int n) const;
    /// Exponent of the segment touching s = 0 (0 for sinusoids).
    double exponent_at_zero() const;
    const std::vector<ProfileSegment>& segments() const { return segments_; }

private:
    std::vector<ProfileSegment> segments_;
};

// ---------------------------------------------------------------------------
// Weight families.

class WeightSpec;

struct ConstantWeight {
    double value = 1.0;
};
/// |x|^alpha, alpha > -d.
struct PowerWeight {
    double alpha = 0.0;
};
struct RadialProfileWeight {
    RadialProfile profile;
};
/// w1(x̄) * w2(t) with w1 on R^{d-1}, w2 on R.
struct ProductWeight {
    std::shared_ptr<const WeightSpec> horizontal;
    std::shared_ptr<const WeightSpec> vertical;
};
/// Piecewise corridor weight: 2^{-(a+b)i-1}(1+|x̄|^a) on {2^i <= t <= 2^{i+1}, |x̄| <= 2^i}, else min(|x|^{-b}, 1).
struct CorridorWeight {
    double alpha = 0.0;
    double beta = 0.0;
};
/// min{1, min_i |x - c_i|^alpha}.
struct BumpDepressionWeight {
    std::vector<Vec> centers;
    double alpha = 1.0;
};
/// min(1, y^{-alpha}) for y > 0 and 1 otherwise, y the last coordinate.
struct HalfLinePowerWeight {
    double alpha = 0.5;
};

/// Immutable description of a weight on R^d. Constructors validate local integrability ranges.
class WeightSpec {
public:
    using Variant = std::variant<ConstantWeight, PowerWeight, RadialProfileWeight, ProductWeight, CorridorWeight,
                                 BumpDepressionWeight, HalfLinePowerWeight>;

    static WeightSpec constant(int d, double c = 1.0);
    static WeightSpec power(int d, double alpha);
    static WeightSpec radial(int d, RadialProfile profile);
    static WeightSpec product(const WeightSpec& horizontal, const WeightSpec& vertical);
    static WeightSpec corridor(int d, double alpha, double beta);
    static WeightSpec bump_depression(int d, std::vector<Vec> centers, double alpha);
    static WeightSpec half_line_power(int d, double alpha);

    /// lambda * w, lambda > 0.
    WeightSpec scaled(double lambda) const;

    int dim() const { return dim_; }
    double scale() const { return scale_; }
    const Variant& variant() const { return variant_; }
    std::string kind() const;

    /// Raw pointwise value. Returns a non-positive or non-finite number on the singular set.
    double operator()(const Vec& x) const;

    /// True when w depends on |x| only (about the origin).
    bool is_radial() const;
    /// v(r) for radial specs.
    double radial_value(double r) const;

private:
    WeightSpec(int d, Variant v) : dim_(d), variant_(std::move(v)) {}

    int dim_ = 1;
    double scale_ = 1.0;
    Variant variant_;
};

/// Pointwise w(x); throws SpecError on dimension mismatch and SingularPointError on the singular set.
double eval_weight(const WeightSpec& spec, const Vec& x);

// ---------------------------------------------------------------------------
// Quadrature.

enum class MassMethod { ClosedForm, StratifiedMC };

std::string to_string(MassMethod m);

struct MassEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long n_samples = 0;
    MassMethod method = MassMethod::ClosedForm;
    /// False when the sample budget ran out before relative_error_target was reached.
    bool target_met = true;
    /// Samples that landed on a singular set and were redrawn.
    long defects = 0;

    static MassEstimate exact(double v) { return MassEstimate{v, 0.0, 0, MassMethod::ClosedForm, true, 0}; }
};

struct QuadratureConfig {
    std::uint64_t seed = 1;
    long samples_per_region = 4096;
    int radial_strata = 8;
    /// Stop refining once std_error <= target * value; <= 0 disables refinement (a single round).
    double relative_error_target = 1e-3;
    /// Refinement doublings allowed beyond the first round.
    int max_doublings = 4;
    /// Skip closed forms (used to cross-check Monte Carlo against them).
    bool force_monte_carlo = false;

    void validate() const;
    QuadratureConfig derive(std::uint64_t salt) const;
    QuadratureConfig with_samples(long n) const {
        QuadratureConfig q = *this;
        q.samples_per_region = n;
        return q;
    }
};

/// Closed-form ∫_R w dx when the variant/region combination has one.
std::optional<double> closed_form_mass(const WeightSpec& spec, const Region& region);

MassEstimate region_mass(const WeightSpec& spec, const Region& region, const QuadratureConfig& quad);
MassEstimate region_mass(const WeightSpec& spec, const Cube& cube, const QuadratureConfig& quad);
MassEstimate annulus_mass(const WeightSpec& spec, const DyadicAnnulus& annulus, const QuadratureConfig& quad);

/// (∫_R w)^{1/(1-p)}, p > 1, with first-order error propagation.
MassEstimate dual_mass(const WeightSpec& spec, const Region& region, double p, const QuadratureConfig& quad);
/// (∫_R w)^{-1}, the p = 1 branch.
MassEstimate inv_ess_sup(const WeightSpec& spec, const Region& region, const QuadratureConfig& quad);

/// Raise a mass estimate to the power s with first-order error propagation.
/// Throws NumericalError when the mass is indistinguishable from zero.
MassEstimate mass_power(const MassEstimate& mass, double s, const std::string& what);

}  // namespace limlab
