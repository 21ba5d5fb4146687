#include "limlab/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "limlab/integrate.hpp"
#include "limlab/rng.hpp"

namespace limlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::uint64_t kEnergySalt = 0xe4e;
constexpr std::uint64_t kGaussianSalt = 0x6a55;

double bump_value(const Bump& b, const Vec& x) {
    const double s = (x - b.cube.center).norm_inf();
    return b.amplitude * std::clamp(2.0 - 4.0 * s / b.cube.edge, 0.0, 1.0);
}

double bump_grad(const Bump& b, const Vec& x) {
    const double s = (x - b.cube.center).norm_inf();
    const double l = b.cube.edge;
    return (s > 0.25 * l && s < 0.5 * l) ? b.amplitude * 4.0 / l : 0.0;
}

bool interiors_overlap(const Box& a, const Box& b) {
    for (int i = 0; i < a.dim(); ++i)
        if (std::fmin(a.hi[i], b.hi[i]) - std::fmax(a.lo[i], b.lo[i]) <= 0.0) return false;
    return true;
}

/// Index k with radii[k] <= r < radii[k+1], or -1 below, or levels.size() beyond.
std::ptrdiff_t table_slot(const RadialTableFunction& t, double r) {
    const auto it = std::upper_bound(t.radii.begin(), t.radii.end(), r);
    return (it - t.radii.begin()) - 1;
}

MassEstimate add(MassEstimate acc, const MassEstimate& m) {
    acc.value += m.value;
    acc.std_error = std::hypot(acc.std_error, m.std_error);
    acc.n_samples += m.n_samples;
    acc.defects += m.defects;
    acc.target_met = acc.target_met && m.target_met;
    if (m.method == MassMethod::StratifiedMC) acc.method = MassMethod::StratifiedMC;
    return acc;
}

MassEstimate shell_energy(const TestFunction& fn, const WeightSpec& spec, double p, const QuadratureConfig& quad,
                          const Shell& shell) {
    auto f = [&](const Vec& x) -> std::optional<double> {
        if (fn.is_singular(x)) return std::nullopt;
        const double w = spec(x);
        if (!(w > 0.0) || !std::isfinite(w)) return std::nullopt;
        const double g = fn.grad_norm(x);
        return g == 0.0 ? 0.0 : std::pow(g, p) * w;
    };
    return integrate_scalar(Region{shell}, f, quad, region_salt(Region{shell}) ^ kEnergySalt);
}

MassEstimate bump_energy(const Bump& b, const WeightSpec& spec, double p, const QuadratureConfig& quad) {
    const double l = b.cube.edge;
    const double scale = std::pow(b.amplitude * 4.0 / l, p);
    const Box outer = b.cube.box();
    const Box inner = b.cube.scaled(0.5).box();
    MassEstimate ring;
    const auto co = quad.force_monte_carlo ? std::nullopt : closed_form_mass(spec, Region{outer});
    const auto ci = quad.force_monte_carlo ? std::nullopt : closed_form_mass(spec, Region{inner});
    if (co && ci) {
        ring = MassEstimate::exact(*co - *ci);
    } else {
        auto f = [&](const Vec& x) -> std::optional<double> {
            if (inner.contains(x)) return 0.0;
            const double w = spec(x);
            if (!(w > 0.0) || !std::isfinite(w)) return std::nullopt;
            return w;
        };
        ring = integrate_scalar(Region{outer}, f, quad, region_salt(Region{outer}) ^ kEnergySalt);
    }
    ring.value *= scale;
    ring.std_error *= scale;
    return ring;
}

}  // namespace

// ---------------------------------------------------------------------------
// TestFunction

TestFunction::TestFunction(int d, Variant v) : dim_(d), variant_(std::move(v)) {
    if (d < 1 || d > kMaxDim) throw SpecError("test function dimension out of range");
}

TestFunction TestFunction::constant(int d, double c) { return TestFunction(d, ConstantFunction{c}); }
TestFunction TestFunction::loglog(int d) { return TestFunction(d, LogLogFunction{}); }
TestFunction TestFunction::inverse_radius(int d) { return TestFunction(d, InverseRadiusFunction{}); }

TestFunction TestFunction::radial_table(int d, std::vector<double> radii, std::vector<double> levels) {
    if (radii.size() != levels.size() + 1 || levels.empty())
        throw SpecError("radial table needs one more radius than levels");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] > radii[k - 1])) throw SpecError("radial table radii must increase");
    if (!(radii.front() >= 0.0)) throw SpecError("radial table radii must be nonnegative");
    RadialTableFunction t{std::move(radii), std::move(levels), {}};
    t.base.push_back(0.0);
    for (std::size_t k = 0; k < t.levels.size(); ++k) {
        if (!(t.levels[k] >= 0.0)) throw SpecError("radial table levels must be nonnegative");
        t.base.push_back(t.base.back() + t.levels[k] * (t.radii[k + 1] - t.radii[k]));
    }
    return TestFunction(d, std::move(t));
}

std::string TestFunction::kind() const {
    return std::visit(overloaded{[](const ConstantFunction&) { return "constant"; },
                                 [](const LogLogFunction&) { return "loglog"; },
                                 [](const InverseRadiusFunction&) { return "inverse_radius"; },
                                 [](const BumpChainFunction&) { return "bump_chain"; },
                                 [](const RadialTableFunction&) { return "radial_table"; }},
                      variant_);
}

bool TestFunction::is_singular(const Vec& x) const {
    return std::holds_alternative<InverseRadiusFunction>(variant_) && x.norm2() == 0.0;
}

double TestFunction::value(const Vec& x) const {
    if (x.dim() != dim_) throw SpecError("point dimension does not match test function dimension");
    if (is_singular(x)) throw SingularPointError("test function '" + kind() + "' is singular at the origin");
    return std::visit(overloaded{[](const ConstantFunction& c) { return c.value; },
                                 [&](const LogLogFunction&) { return std::log(std::log(2.0 + x.norm2())); },
                                 [&](const InverseRadiusFunction&) { return 1.0 / x.norm(); },
                                 [&](const BumpChainFunction& c) {
                                     double u = 0.0;
                                     for (const auto& b : c.bumps) u += bump_value(b, x);
                                     return u;
                                 },
                                 [&](const RadialTableFunction& t) {
                                     const double r = x.norm();
                                     const auto k = table_slot(t, r);
                                     if (k < 0) return 0.0;
                                     if (k >= static_cast<std::ptrdiff_t>(t.levels.size())) return t.base.back();
                                     return t.base[k] + t.levels[k] * (r - t.radii[k]);
                                 }},
                      variant_);
}

double TestFunction::grad_norm(const Vec& x) const {
    if (x.dim() != dim_) throw SpecError("point dimension does not match test function dimension");
    if (is_singular(x)) throw SingularPointError("test function '" + kind() + "' is singular at the origin");
    return std::visit(overloaded{[](const ConstantFunction&) { return 0.0; },
                                 [&](const LogLogFunction&) {
                                     const double r2 = x.norm2();
                                     return 2.0 * std::sqrt(r2) / ((2.0 + r2) * std::log(2.0 + r2));
                                 },
                                 [&](const InverseRadiusFunction&) { return 1.0 / x.norm2(); },
                                 [&](const BumpChainFunction& c) {
                                     double g = 0.0;
                                     for (const auto& b : c.bumps) g += bump_grad(b, x);
                                     return g;
                                 },
                                 [&](const RadialTableFunction& t) {
                                     const auto k = table_slot(t, x.norm());
                                     if (k < 0 || k >= static_cast<std::ptrdiff_t>(t.levels.size())) return 0.0;
                                     return t.levels[k];
                                 }},
                      variant_);
}

TestFunction loglog_function(int d) {
    if (d < 2) throw SpecError("loglog needs d >= 2");
    return TestFunction::loglog(d);
}

TestFunction hat_bump(const Cube& q) { return bump_chain({q}, {1.0}); }

TestFunction bump_chain(const std::vector<Cube>& cubes, const std::vector<double>& amplitudes) {
    if (cubes.size() != amplitudes.size()) throw SpecError("bump chain needs one amplitude per cube");
    if (cubes.empty()) return TestFunction::constant(2, 0.0);
    const int d = cubes.front().dim();
    BumpChainFunction chain;
    std::vector<Box> boxes;
    for (std::size_t k = 0; k < cubes.size(); ++k) {
        if (cubes[k].dim() != d) throw SpecError("bump chain cubes differ in dimension");
        cubes[k].validate();
        if (!(amplitudes[k] > 0.0)) throw SpecError("bump amplitudes must be positive");
        const Box b = cubes[k].box();
        for (std::size_t j = 0; j < boxes.size(); ++j)
            if (interiors_overlap(b, boxes[j])) {
                std::ostringstream os;
                os << "bump chain cubes " << j << " and " << k << " overlap";
                throw SpecError(os.str());
            }
        boxes.push_back(b);
        chain.bumps.push_back(Bump{cubes[k], amplitudes[k]});
    }
    return TestFunction(d, std::move(chain));
}

TestFunction axis_chain(int d, int i_min, int i_max) {
    std::vector<Cube> cubes;
    for (int i = i_min; i <= i_max; ++i) cubes.push_back(Cube{std::ldexp(1.0, i) * Vec::unit(d, d - 1), 2.0});
    return bump_chain(cubes, std::vector<double>(cubes.size(), 1.0));
}

// ---------------------------------------------------------------------------
// Energies

std::vector<MassEstimate> bump_energies(const TestFunction& fn, const WeightSpec& spec, double p,
                                        const QuadratureConfig& quad) {
    if (!(p >= 1.0)) throw SpecError("energy needs p >= 1");
    const auto* chain = std::get_if<BumpChainFunction>(&fn.variant());
    if (!chain) throw SpecError("bump energies need a bump chain");
    if (fn.dim() != spec.dim()) throw SpecError("test function and weight dimensions differ");
    std::vector<MassEstimate> out;
    for (const auto& b : chain->bumps) out.push_back(bump_energy(b, spec, p, quad));
    return out;
}

std::vector<MassEstimate> nested_energies(const TestFunction& fn, const WeightSpec& spec, double p,
                                          const QuadratureConfig& quad, int j_max) {
    if (!(p >= 1.0)) throw SpecError("energy needs p >= 1");
    if (fn.dim() != spec.dim()) throw SpecError("test function and weight dimensions differ");
    std::vector<MassEstimate> out;
    MassEstimate acc = MassEstimate::exact(0.0);
    for (int j = 0; j <= j_max; ++j) {
        const double inner = j == 0 ? 0.0 : std::ldexp(1.0, j - 1);
        acc = add(acc, tail_energy(fn, spec, p, quad, inner, std::ldexp(1.0, j)));
        out.push_back(acc);
    }
    return out;
}

MassEstimate energy(const TestFunction& fn, const WeightSpec& spec, double p, const QuadratureConfig& quad,
                    double truncation_radius) {
    if (!(truncation_radius > 0.0)) throw SpecError("truncation radius must be positive");
    return tail_energy(fn, spec, p, quad, 0.0, truncation_radius);
}

MassEstimate tail_energy(const TestFunction& fn, const WeightSpec& spec, double p, const QuadratureConfig& quad,
                         double r, double r_max) {
    if (!(p >= 1.0)) throw SpecError("energy needs p >= 1");
    if (fn.dim() != spec.dim()) throw SpecError("test function and weight dimensions differ");
    if (!(r >= 0.0) || !(r_max > r)) throw SpecError("need 0 <= r < r_max");
    if (std::holds_alternative<ConstantFunction>(fn.variant())) return MassEstimate::exact(0.0);
    if (const auto* chain = std::get_if<BumpChainFunction>(&fn.variant())) {
        MassEstimate acc = MassEstimate::exact(0.0);
        for (const auto& b : chain->bumps) {
            const double c = b.cube.center.norm();
            if (c >= r && c < r_max) acc = add(acc, bump_energy(b, spec, p, quad));
        }
        return acc;
    }
    // Dyadic shells {2^{j-1} <= |x| < 2^j} clipped to [r, r_max).
    MassEstimate acc = MassEstimate::exact(0.0);
    double a = r;
    while (a < r_max) {
        double b;
        if (a < 1.0) {
            b = 1.0;
        } else {
            int e = 0;
            std::frexp(a, &e);
            b = std::ldexp(1.0, e);
        }
        b = std::fmin(b, r_max);
        acc = add(acc, shell_energy(fn, spec, p, quad, Shell{Vec::zeros(spec.dim()), a, b}));
        a = b;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Divergence witness

DivergenceWitness divergence_witness(const WeightSpec& spec, double p, int i_max, const QuadratureConfig& quad) {
    if (!spec.is_radial()) throw PreconditionError("divergence witness needs a radial weight");
    DivergenceWitness w;
    w.p = p;
    w.rp = rp_terms(spec, p, IndexRange{1, i_max}, quad);
    if (w.rp.verdict != SeriesVerdict::Diverged)
        throw PreconditionError("divergence witness needs R_p(w) = infinity; rp verdict is " +
                                to_string(w.rp.verdict));
    const auto& terms = w.rp.terms;
    const int n = static_cast<int>(terms.size());
    std::vector<double> levels(n, 0.0);
    int last_end = -1;
    if (p > 1.0) {
        int k = 1, start = 0;
        double sum = 0.0;
        for (int idx = 0; idx < n; ++idx) {
            sum += terms[idx];
            if (sum > std::ldexp(1.0, k)) {
                w.blocks.emplace_back(start + 1, idx + 1);
                w.block_sums.push_back(sum);
                for (int j = start; j <= idx; ++j) levels[j] = terms[j] / std::ldexp(1.0, j + 1) / sum;
                w.construction_bound += std::pow(sum, 1.0 - p);
                w.geometric_bound += std::exp2(-k * (p - 1.0));
                last_end = idx;
                ++k;
                start = idx + 1;
                sum = 0.0;
            }
        }
    } else {
        int k = 1;
        for (int idx = 0; idx < n; ++idx) {
            if (terms[idx] > std::ldexp(1.0, k)) {
                w.blocks.emplace_back(idx + 1, idx + 1);
                w.block_sums.push_back(terms[idx]);
                levels[idx] = std::ldexp(1.0, -(idx + 1));
                w.construction_bound += 1.0 / terms[idx];
                w.geometric_bound += 1.0;
                last_end = idx;
                ++k;
            }
        }
    }
    if (w.blocks.size() < 3) {
        std::ostringstream os;
        os << "insufficient divergence within budget: " << w.blocks.size() << " blocks up to i_max=" << i_max;
        throw NumericalError(os.str());
    }
    levels.resize(last_end + 1);
    std::vector<double> radii;
    for (int idx = 0; idx <= last_end + 1; ++idx) radii.push_back(std::ldexp(1.0, idx + 1));
    w.first_index = 1;
    w.levels = levels;
    w.function = TestFunction::radial_table(spec.dim(), radii, levels);
    w.top_exponent = last_end + 2;
    const double top = std::ldexp(1.0, w.top_exponent);
    Vec x = Vec::zeros(spec.dim());
    x[0] = top;
    w.kappa = w.function.value(x) / top;
    return w;
}

// ---------------------------------------------------------------------------
// Constructions

GaussianCubeFamily gaussian_cube_family(std::uint64_t seed, int n, int d, double alpha, double p, double q) {
    if (d < 2 || d > kMaxDim) throw SpecError("gaussian cube family needs 2 <= d <= 6");
    if (n < 1) throw SpecError("gaussian cube family needs n >= 1");
    if (!(p > 1.0 && p < d && q > 1.0 && q < d)) throw SpecError("need p, q in (1, d)");
    if (!((p + d - 1.0) / d < q && q <= p)) throw SpecError("need (p+d-1)/d < q <= p");
    if (!(alpha > p - 1.0 && alpha < d * (q - 1.0))) throw SpecError("alpha must lie in (p-1, d(q-1))");
    Rng rng(derive_seed(seed, kGaussianSalt));
    GaussianCubeFamily fam{{}, {}, WeightSpec::constant(d)};
    for (int i = 1; i <= n; ++i) {
        Vec c(d);
        for (int a = 0; a < d - 1; ++a) c[a] = rng.normal();
        c[d - 1] = 4.0 * i;
        fam.centers.push_back(c);
        fam.cubes.push_back(Cube{c, 0.5 / std::pow(static_cast<double>(i), 1.0 / (d - 1))});
    }
    fam.weight = WeightSpec::bump_depression(d, fam.centers, alpha);
    return fam;
}

std::vector<double> gaussian_family_series(const GaussianCubeFamily& family, double p, const QuadratureConfig& quad) {
    std::vector<double> partial;
    double s = 0.0;
    for (const auto& q : family.cubes) {
        s += region_mass(family.weight, q.scaled(2.0), quad).value * std::pow(q.edge, -p);
        partial.push_back(s);
    }
    return partial;
}

TowerFamily tower_family(TowerWeight kind, int d, double p, double alpha, double beta, int n_cubes,
                           double amplitude_decay) {
    if (d < 2 || d > kMaxDim) throw SpecError("dimension out of range");
    if (!(p >= 1.0 && p < d)) throw SpecError("need p in [1, d)");
    const double alpha_max = kind == TowerWeight::Product ? std::fmin(1.0, d - p) : d - p;
    if (!(alpha > 0.0 && alpha < alpha_max)) throw SpecError("alpha outside the admissible interval");
    if (!(beta > 0.0 && beta < std::fmin(alpha / (d + p), 1.0))) throw SpecError("need beta in (0, min(alpha/(d+p), 1))");
    if (n_cubes < 1) throw SpecError("need at least one cube");
    if (!(amplitude_decay > 0.0 && amplitude_decay <= 1.0)) throw SpecError("amplitude decay must lie in (0, 1]");
    WeightSpec w = kind == TowerWeight::Product ? WeightSpec::half_line_power(d, alpha)
                                                  : WeightSpec::radial(d, RadialProfile::capped_power(alpha));
    std::vector<Cube> cubes, doubled;
    std::vector<double> amps;
    for (int i = 2; i < 2 + n_cubes; ++i) {
        const Cube q{Vec::join(Vec::zeros(d - 1), std::ldexp(1.0, i)), std::exp2(beta * i)};
        cubes.push_back(q);
        doubled.push_back(q.scaled(2.0));
        amps.push_back(std::pow(amplitude_decay, i));
    }
    return TowerFamily{w, cubes, bump_chain(doubled, amps)};
}

WeightSpec corridor_counterexample(int d, double p, double q, double alpha, double beta) {
    if (!(q >= 1.0 && p >= q && p < d)) throw SpecError("need 1 <= q <= p < d");
    if (q > 1.0) {
        if (!(alpha >= 0.0 && alpha < (d - 1) * (q - 1.0))) throw SpecError("need alpha in [0, (d-1)(q-1))");
        if (!(beta >= 0.0 && beta < d - p)) throw SpecError("need beta in [0, d-p)");
    } else {
        if (alpha != 0.0) throw SpecError("q = 1 requires alpha = 0");
        if (!(beta >= 0.0 && beta < d - 1.0)) throw SpecError("need beta in [0, d-1) for q = 1");
    }
    return WeightSpec::corridor(d, alpha, beta);
}

StripChain strip_chain(const WeightSpec& spec, int n_strips, const QuadratureConfig& quad, int max_exponent) {
    const int d = spec.dim();
    if (n_strips < 2) throw SpecError("strip chain needs at least 2 strips");
    StripChain out{{}, {}, TestFunction::constant(d, 0.0)};
    int j = 0;
    for (int i = 1; i <= n_strips; ++i) {
        for (;; ++j) {
            if (j > max_exponent) throw NumericalError("no strip light enough within the height budget");
            const double z = std::ldexp(1.0, 2 * j);
            const Cube strip{Vec::join(Vec::zeros(d - 1), z + 0.5), 1.0};
            const double m = region_mass(spec, strip, quad).value;
            if (m <= 1.0 / (static_cast<double>(i) * i)) {
                out.strips.push_back(strip);
                out.masses.push_back(m);
                ++j;
                break;
            }
        }
    }
    std::vector<Cube> bumps;
    for (std::size_t k = 1; k < out.strips.size(); k += 2) bumps.push_back(out.strips[k]);
    out.chain = bump_chain(bumps, std::vector<double>(bumps.size(), 1.0));
    return out;
}

}  // namespace limlab
