#include "limlab/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "limlab/integrate.hpp"

namespace limlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Antiderivatives of s^n sin(ws) and s^n cos(ws), by the usual reduction.
void trig_moment_antiderivative(int n, double w, double s, double& sin_part, double& cos_part) {
    double is = -std::cos(w * s) / w;  // ∫ sin
    double ic = std::sin(w * s) / w;   // ∫ cos
    double sk = 1.0;
    for (int k = 1; k <= n; ++k) {
        sk *= s;
        const double next_is = -sk * std::cos(w * s) / w + (k / w) * ic;
        const double next_ic = sk * std::sin(w * s) / w - (k / w) * is;
        is = next_is;
        ic = next_ic;
    }
    sin_part = is;
    cos_part = ic;
}

double power_moment(double coef, double exponent, double a, double b, int n) {
    const double k = exponent + n + 1.0;
    if (std::fabs(k) < 1e-14) return coef * std::log(b / a);
    return coef * (std::pow(b, k) - std::pow(a, k)) / k;
}

/// ∫_a^b |t|^alpha dt, alpha > -1.
double abs_power_integral(double alpha, double a, double b) {
    auto F = [alpha](double x) { return std::copysign(std::pow(std::fabs(x), alpha + 1.0) / (alpha + 1.0), x); };
    return F(b) - F(a);
}

/// ∫_a^b min(1, y^{-alpha}) (with value 1 for y <= 0) dy.
double half_line_integral(double alpha, double a, double b) {
    double total = 0.0;
    const double flat_hi = std::min(b, 1.0);
    if (flat_hi > a) total += flat_hi - a;
    const double lo = std::max(a, 1.0);
    if (b > lo) {
        const double k = 1.0 - alpha;
        total += (std::pow(b, k) - std::pow(lo, k)) / k;
    }
    return total;
}

bool origin_centered(const Shell& s) {
    for (int i = 0; i < s.dim(); ++i)
        if (s.center[i] != 0.0) return false;
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile::RadialProfile(std::vector<ProfileSegment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw SpecError("radial profile needs at least one segment");
    if (segments_.front().start != 0.0) throw SpecError("radial profile must start at s = 0");
    for (std::size_t k = 1; k < segments_.size(); ++k)
        if (!(segments_[k].start > segments_[k - 1].start))
            throw SpecError("radial profile breakpoints must be strictly increasing");
    for (const auto& seg : segments_) {
        std::visit(overloaded{[](const PowerSegment& p) {
                                  if (!(p.coef > 0.0) || !std::isfinite(p.exponent))
                                      throw SpecError("power segment needs coef > 0 and finite exponent");
                              },
                              [](const SinusoidSegment& s) {
                                  if (!(s.offset > std::fabs(s.amplitude)) || !(s.frequency > 0.0))
                                      throw SpecError("sinusoid segment needs offset > |amplitude| and frequency > 0");
                              }},
                   seg.shape);
    }
}

RadialProfile RadialProfile::constant(double c) { return RadialProfile({{0.0, PowerSegment{c, 0.0}}}); }

RadialProfile RadialProfile::capped_power(double a) {
    return RadialProfile({{0.0, PowerSegment{1.0, 0.0}}, {1.0, PowerSegment{1.0, -a}}});
}

RadialProfile RadialProfile::sinusoid(double offset, double amplitude, double frequency) {
    return RadialProfile({{0.0, SinusoidSegment{offset, amplitude, frequency}}});
}

double RadialProfile::operator()(double s) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), s,
                               [](double v, const ProfileSegment& seg) { return v < seg.start; });
    const auto& seg = *std::prev(it);
    return std::visit(overloaded{[s](const PowerSegment& p) { return p.coef * std::pow(s, p.exponent); },
                                 [s](const SinusoidSegment& q) {
                                     return q.offset + q.amplitude * std::sin(q.frequency * s);
                                 }},
                      seg.shape);
}

double RadialProfile::moment(double a, double b, int n) const {
    double total = 0.0;
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const double lo = std::max(a, segments_[k].start);
        const double hi = k + 1 < segments_.size() ? std::min(b, segments_[k + 1].start) : b;
        if (!(hi > lo)) continue;
        total += std::visit(overloaded{[&](const PowerSegment& p) { return power_moment(p.coef, p.exponent, lo, hi, n); },
                                       [&](const SinusoidSegment& q) {
                                           double sb, cb, sa, ca;
                                           trig_moment_antiderivative(n, q.frequency, hi, sb, cb);
                                           trig_moment_antiderivative(n, q.frequency, lo, sa, ca);
                                           return q.offset * (std::pow(hi, n + 1) - std::pow(lo, n + 1)) / (n + 1) +
                                                  q.amplitude * (sb - sa);
                                       }},
                            segments_[k].shape);
    }
    return total;
}

double RadialProfile::exponent_at_zero() const {
    if (const auto* p = std::get_if<PowerSegment>(&segments_.front().shape)) return p->exponent;
    return 0.0;
}

// ---------------------------------------------------------------------------
// WeightSpec

namespace {
void check_dim(int d) {
    if (d < 1 || d > kMaxDim) throw SpecError("weight dimension must be in [1, 6]");
}
}  // namespace

WeightSpec WeightSpec::constant(int d, double c) {
    check_dim(d);
    if (!(c > 0.0) || !std::isfinite(c)) throw SpecError("constant weight must be positive");
    return WeightSpec(d, ConstantWeight{c});
}

WeightSpec WeightSpec::power(int d, double alpha) {
    check_dim(d);
    if (!(alpha > -d) || !std::isfinite(alpha))
        throw SpecError("power weight |x|^alpha needs alpha > -d for local integrability");
    return WeightSpec(d, PowerWeight{alpha});
}

WeightSpec WeightSpec::radial(int d, RadialProfile profile) {
    check_dim(d);
    if (!(profile.exponent_at_zero() > -d))
        throw SpecError("radial profile is not locally integrable at the origin");
    return WeightSpec(d, RadialProfileWeight{std::move(profile)});
}

WeightSpec WeightSpec::product(const WeightSpec& horizontal, const WeightSpec& vertical) {
    if (vertical.dim() != 1) throw SpecError("product weight: vertical factor must live on R");
    const int d = horizontal.dim() + 1;
    check_dim(d);
    return WeightSpec(d, ProductWeight{std::make_shared<const WeightSpec>(horizontal),
                                       std::make_shared<const WeightSpec>(vertical)});
}

WeightSpec WeightSpec::corridor(int d, double alpha, double beta) {
    check_dim(d);
    if (d < 2) throw SpecError("corridor weight needs d >= 2");
    if (!(alpha >= 0.0) || !(beta >= 0.0)) throw SpecError("corridor weight needs alpha, beta >= 0");
    return WeightSpec(d, CorridorWeight{alpha, beta});
}

WeightSpec WeightSpec::bump_depression(int d, std::vector<Vec> centers, double alpha) {
    check_dim(d);
    if (!(alpha > 0.0)) throw SpecError("bump-depression weight needs alpha > 0");
    if (centers.empty()) throw SpecError("bump-depression weight needs at least one center");
    for (const auto& c : centers)
        if (c.dim() != d) throw SpecError("bump-depression center has wrong dimension");
    return WeightSpec(d, BumpDepressionWeight{std::move(centers), alpha});
}

WeightSpec WeightSpec::half_line_power(int d, double alpha) {
    check_dim(d);
    if (!(alpha > 0.0 && alpha < 1.0)) throw SpecError("half-line power weight needs alpha in (0, 1)");
    return WeightSpec(d, HalfLinePowerWeight{alpha});
}

WeightSpec WeightSpec::scaled(double lambda) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw SpecError("scale factor must be positive");
    WeightSpec w = *this;
    w.scale_ *= lambda;
    return w;
}

std::string WeightSpec::kind() const {
    return std::visit(overloaded{[](const ConstantWeight&) { return "constant"; },
                                 [](const PowerWeight&) { return "power"; },
                                 [](const RadialProfileWeight&) { return "radial_profile"; },
                                 [](const ProductWeight&) { return "product"; },
                                 [](const CorridorWeight&) { return "corridor"; },
                                 [](const BumpDepressionWeight&) { return "bump_depression"; },
                                 [](const HalfLinePowerWeight&) { return "half_line_power"; }},
                      variant_);
}

double WeightSpec::operator()(const Vec& x) const {
    const double v = std::visit(
        overloaded{
            [](const ConstantWeight& c) { return c.value; },
            [&](const PowerWeight& p) { return p.alpha == 0.0 ? 1.0 : std::pow(x.norm(), p.alpha); },
            [&](const RadialProfileWeight& r) { return r.profile(x.norm()); },
            [&](const ProductWeight& p) {
                return (*p.horizontal)(x.head()) * (*p.vertical)(Vec{x.last()});
            },
            [&](const CorridorWeight& c) {
                const double t = x.last();
                const double rbar = x.head().norm();
                if (t >= 1.0) {
                    int e = 0;
                    std::frexp(t, &e);
                    const int i = e - 1;  // floor(log2 t)
                    if (rbar <= std::ldexp(1.0, i))
                        return std::exp2(-(c.alpha + c.beta) * i - 1.0) * (1.0 + std::pow(rbar, c.alpha));
                }
                return std::fmin(std::pow(x.norm(), -c.beta), 1.0);
            },
            [&](const BumpDepressionWeight& b) {
                double m2 = std::numeric_limits<double>::infinity();
                for (const auto& c : b.centers) m2 = std::fmin(m2, (x - c).norm2());
                return std::fmin(1.0, std::pow(m2, 0.5 * b.alpha));
            },
            [&](const HalfLinePowerWeight& h) {
                const double y = x.last();
                return y > 1.0 ? std::pow(y, -h.alpha) : 1.0;
            }},
        variant_);
    return scale_ * v;
}

bool WeightSpec::is_radial() const {
    return std::holds_alternative<ConstantWeight>(variant_) || std::holds_alternative<PowerWeight>(variant_) ||
           std::holds_alternative<RadialProfileWeight>(variant_);
}

double WeightSpec::radial_value(double r) const {
    if (!is_radial()) throw SpecError("radial_value on a non-radial weight (" + kind() + ")");
    Vec x(dim_);
    x[0] = r;
    return (*this)(x);
}

double eval_weight(const WeightSpec& spec, const Vec& x) {
    if (x.dim() != spec.dim())
        throw SpecError("point dimension " + std::to_string(x.dim()) + " does not match weight dimension " +
                        std::to_string(spec.dim()));
    const double v = spec(x);
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "weight '" << spec.kind() << "' is singular at the requested point";
        throw SingularPointError(os.str());
    }
    return v;
}

// ---------------------------------------------------------------------------
// Quadrature

std::string to_string(MassMethod m) { return m == MassMethod::ClosedForm ? "ClosedForm" : "StratifiedMC"; }

void QuadratureConfig::validate() const {
    if (samples_per_region <= 0) throw SpecError("samples_per_region must be positive");
    if (radial_strata <= 0) throw SpecError("radial_strata must be positive");
    if (max_doublings < 0 || max_doublings > 20) throw SpecError("max_doublings must be in [0, 20]");
    if (!std::isfinite(relative_error_target)) throw SpecError("relative_error_target must be finite");
}

QuadratureConfig QuadratureConfig::derive(std::uint64_t salt) const {
    QuadratureConfig q = *this;
    q.seed = derive_seed(seed, salt);
    return q;
}

std::optional<double> closed_form_mass(const WeightSpec& spec, const Region& region) {
    if (region_dim(region) != spec.dim()) throw SpecError("region dimension does not match weight dimension");
    const Shell* shell = std::get_if<Shell>(&region);
    const Box* box = std::get_if<Box>(&region);
    const int d = spec.dim();
    const std::optional<double> raw = std::visit(
        overloaded{
            [&](const ConstantWeight& c) -> std::optional<double> { return c.value * region_volume(region); },
            [&](const PowerWeight& p) -> std::optional<double> {
                if (p.alpha == 0.0) return region_volume(region);
                if (shell && origin_centered(*shell)) {
                    const double k = p.alpha + d;
                    return sphere_area(d) * (std::pow(shell->outer, k) - std::pow(shell->inner, k)) / k;
                }
                if (box && d == 1) return abs_power_integral(p.alpha, box->lo[0], box->hi[0]);
                return std::nullopt;
            },
            [&](const RadialProfileWeight& r) -> std::optional<double> {
                if (shell && origin_centered(*shell))
                    return sphere_area(d) * r.profile.moment(shell->inner, shell->outer, d - 1);
                if (box && d == 1) {
                    // v(|t|) on an interval: split at 0.
                    const double a = box->lo[0], b = box->hi[0];
                    if (a >= 0.0) return r.profile.moment(a, b, 0);
                    if (b <= 0.0) return r.profile.moment(-b, -a, 0);
                    return r.profile.moment(0.0, -a, 0) + r.profile.moment(0.0, b, 0);
                }
                return std::nullopt;
            },
            [&](const ProductWeight& p) -> std::optional<double> {
                if (!box) return std::nullopt;
                const Box bar{box->lo.head(), box->hi.head()};
                const Box line{Vec{box->lo.last()}, Vec{box->hi.last()}};
                const auto h = closed_form_mass(*p.horizontal, bar);
                const auto v = closed_form_mass(*p.vertical, line);
                if (!h || !v) return std::nullopt;
                return *h * *v;
            },
            [&](const CorridorWeight&) -> std::optional<double> { return std::nullopt; },
            [&](const BumpDepressionWeight&) -> std::optional<double> { return std::nullopt; },
            [&](const HalfLinePowerWeight& h) -> std::optional<double> {
                if (!box) return std::nullopt;
                double bar_volume = 1.0;
                for (int i = 0; i + 1 < d; ++i) bar_volume *= box->hi[i] - box->lo[i];
                return bar_volume * half_line_integral(h.alpha, box->lo.last(), box->hi.last());
            }},
        spec.variant());
    if (!raw) return std::nullopt;
    return spec.scale() * *raw;
}

MassEstimate region_mass(const WeightSpec& spec, const Region& region, const QuadratureConfig& quad) {
    if (region_dim(region) != spec.dim()) throw SpecError("region dimension does not match weight dimension");
    std::visit([](const auto& r) { r.validate(); }, region);
    if (!quad.force_monte_carlo) {
        if (auto cf = closed_form_mass(spec, region)) return MassEstimate::exact(*cf);
    }
    auto integrand = [&spec](const Vec& x) -> std::optional<double> {
        const double v = spec(x);
        if (!(v > 0.0) || !std::isfinite(v)) return std::nullopt;
        return v;
    };
    return integrate_scalar(region, integrand, quad, region_salt(region));
}

MassEstimate region_mass(const WeightSpec& spec, const Cube& cube, const QuadratureConfig& quad) {
    cube.validate();
    return region_mass(spec, Region{cube.box()}, quad);
}

MassEstimate annulus_mass(const WeightSpec& spec, const DyadicAnnulus& annulus, const QuadratureConfig& quad) {
    return region_mass(spec, Region{annulus.shell()}, quad);
}

MassEstimate mass_power(const MassEstimate& mass, double s, const std::string& what) {
    if (!(mass.value > 0.0) || mass.value < 2.0 * mass.std_error) {
        std::ostringstream os;
        os << "mass indistinguishable from zero on " << what << " (value " << mass.value << ", std_error "
           << mass.std_error << ")";
        throw NumericalError(os.str());
    }
    MassEstimate out = mass;
    out.value = s == -1.0 ? 1.0 / mass.value : std::pow(mass.value, s);
    out.std_error = std::fabs(s) * std::pow(mass.value, s - 1.0) * mass.std_error;
    return out;
}

MassEstimate dual_mass(const WeightSpec& spec, const Region& region, double p, const QuadratureConfig& quad) {
    if (!(p > 1.0)) throw SpecError("dual_mass needs p > 1");
    return mass_power(region_mass(spec, region, quad), 1.0 / (1.0 - p), "region");
}

MassEstimate inv_ess_sup(const WeightSpec& spec, const Region& region, const QuadratureConfig& quad) {
    return mass_power(region_mass(spec, region, quad), -1.0, "region");
}

// ---------------------------------------------------------------------------
// Strata

std::vector<Stratum> make_strata(const Region& region, int strata) {
    std::vector<Stratum> out;
    if (const auto* s = std::get_if<Shell>(&region)) {
        std::vector<double> radii;
        if (s->inner > 0.0) {
            const double ratio = s->outer / s->inner;
            for (int k = 0; k <= strata; ++k) radii.push_back(s->inner * std::pow(ratio, double(k) / strata));
            radii.back() = s->outer;
        } else {
            radii.push_back(0.0);
            for (int k = strata - 1; k >= 0; --k) radii.push_back(std::ldexp(s->outer, -k));
        }
        for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
            Shell sub{s->center, radii[k], radii[k + 1]};
            out.push_back({Region{sub}, sub.volume()});
        }
        return out;
    }
    const Box& b = std::get<Box>(region);
    const int d = b.dim();
    const int m = std::max(1, static_cast<int>(std::floor(std::pow(double(strata), 1.0 / d) + 1e-9)));
    long total = 1;
    for (int i = 0; i < d; ++i) total *= m;
    for (long idx = 0; idx < total; ++idx) {
        Vec lo(d), hi(d);
        long rem = idx;
        for (int i = 0; i < d; ++i) {
            const int k = static_cast<int>(rem % m);
            rem /= m;
            const double h = (b.hi[i] - b.lo[i]) / m;
            lo[i] = b.lo[i] + k * h;
            hi[i] = k + 1 == m ? b.hi[i] : b.lo[i] + (k + 1) * h;
        }
        Box sub{lo, hi};
        out.push_back({Region{sub}, sub.volume()});
    }
    return out;
}

std::uint64_t region_salt(const Region& region) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    auto feed = [&h](double v) { h = mix64(h ^ std::bit_cast<std::uint64_t>(v)); };
    if (const auto* s = std::get_if<Shell>(&region)) {
        feed(1.0);
        for (double c : s->center.coords()) feed(c);
        feed(s->inner);
        feed(s->outer);
    } else {
        const Box& b = std::get<Box>(region);
        feed(2.0);
        for (double c : b.lo.coords()) feed(c);
        for (double c : b.hi.coords()) feed(c);
    }
    return h;
}

}  // namespace limlab
