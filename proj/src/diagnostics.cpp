#include "limlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "limlab/rng.hpp"
#include "limlab/trend.hpp"

namespace limlab {

namespace {

constexpr std::uint64_t kApSalt = 0xa9;
constexpr std::uint64_t kDoublingSalt = 0xd0;
constexpr std::uint64_t kCubeSearchSalt = 0xc5;
constexpr long kSupSamples = 10000;

std::string describe(const Cube& q) {
    std::ostringstream os;
    os << "cube(center=(";
    for (int i = 0; i < q.dim(); ++i) os << (i ? "," : "") << q.center[i];
    os << "),edge=" << q.edge << ")";
    return os.str();
}

Vec ball_center(Rng& rng, const BallSampling& b, int k, int d) {
    if (k % b.origin_every == 0) return Vec::zeros(d);
    return rng.in_box(b.center_box.box());
}

double ball_radius(Rng& rng, const BallSampling& b) {
    return std::exp(rng.uniform(std::log(b.r_min), std::log(b.r_max)));
}

}  // namespace

void BallSampling::validate(int d) const {
    if (n_balls < 1) throw SpecError("n_balls must be >= 1");
    if (!(r_min > 0.0) || !(r_max >= r_min) || !std::isfinite(r_max)) throw SpecError("need 0 < r_min <= r_max");
    if (center_box.dim() != d) throw SpecError("center box dimension does not match weight dimension");
    center_box.validate();
    if (origin_every < 1) throw SpecError("origin_every must be >= 1");
    if (depth < 0 || depth > 40) throw SpecError("depth must be in [0, 40]");
}

std::string to_string(MembershipVerdict v) { return v == MembershipVerdict::Bounded ? "Bounded" : "Growing"; }

std::string to_string(InfimumTrend t) {
    switch (t) {
        case InfimumTrend::BoundedBelow: return "BoundedBelow";
        case InfimumTrend::Vanishing: return "Vanishing";
        case InfimumTrend::Inconclusive: break;
    }
    return "Inconclusive";
}

ApEstimate estimate_ap_constant(const WeightSpec& spec, double p, const QuadratureConfig& quad,
                                const BallSampling& balls) {
    if (!(p >= 1.0)) throw SpecError("A_p needs p >= 1");
    quad.validate();
    const int d = spec.dim();
    balls.validate(d);

    ApEstimate est;
    est.p = p;
    est.n_balls = balls.n_balls;
    est.r_min = balls.r_min;
    est.r_max = balls.r_max;
    est.center_box = balls.center_box;
    est.depth = balls.depth;
    est.samples_per_ball = p == 1.0 ? std::max(quad.samples_per_region, kSupSamples) : quad.samples_per_region;
    est.value = 0.0;

    const double dual_exp = p > 1.0 ? -1.0 / (p - 1.0) : 0.0;
    for (int k = 0; k < balls.n_balls; ++k) {
        Rng rng(derive_seed(quad.seed, kApSalt, static_cast<std::uint64_t>(k)));
        const Vec c = ball_center(rng, balls, k, d);
        const double r = ball_radius(rng, balls);
        double avg_w = 0.0, avg_dual = 0.0, sup_inv = 0.0;
        const long per_stratum = (est.samples_per_ball + balls.depth) / (balls.depth + 1);
        for (int s = 0; s <= balls.depth; ++s) {
            const double outer = std::ldexp(r, s - balls.depth);
            const double inner = s == 0 ? 0.0 : 0.5 * outer;
            const double fraction = std::pow(outer / r, d) * (s == 0 ? 1.0 : 1.0 - std::ldexp(1.0, -d));
            const Shell stratum{c, inner, outer};
            double sum_w = 0.0, sum_dual = 0.0;
            long n = 0;
            while (n < per_stratum) {
                const double w = spec(rng.in_shell(stratum));
                if (!(w > 0.0) || !std::isfinite(w)) {
                    ++est.defects;
                    continue;
                }
                ++n;
                sum_w += w;
                if (p > 1.0)
                    sum_dual += std::pow(w, dual_exp);
                else
                    sup_inv = std::max(sup_inv, 1.0 / w);
            }
            avg_w += fraction * sum_w / static_cast<double>(n);
            avg_dual += fraction * sum_dual / static_cast<double>(n);
        }
        const double product = p > 1.0 ? avg_w * std::pow(avg_dual, p - 1.0) : avg_w * sup_inv;
        if (product > est.value || k == 0) {
            est.value = std::max(est.value, product);
            est.argmax_center = c;
            est.argmax_radius = r;
        }
    }
    return est;
}

ApMembership ap_membership_sweep(const WeightSpec& spec, double p, int levels, int n_balls,
                                 const QuadratureConfig& quad) {
    if (levels < 2) throw SpecError("membership sweep needs >= 2 levels");
    ApMembership out;
    out.p = p;
    std::vector<double> xs, ys;
    for (int k = 0; k < levels; ++k) {
        BallSampling b;
        b.n_balls = n_balls;
        b.r_min = std::ldexp(1.0, -k);
        b.r_max = std::ldexp(1.0, k);
        b.center_box = Cube{Vec::zeros(spec.dim()), std::ldexp(1.0, k)};
        b.depth = 8 + 2 * k;
        const auto q = quad.with_samples(quad.samples_per_region << (2 * k));
        out.levels.push_back(estimate_ap_constant(spec, p, q, b));
        xs.push_back(k);
        ys.push_back(std::log2(out.levels.back().value));
    }
    out.slope = least_squares_slope(xs, ys);
    out.verdict = out.slope > 0.1 ? MembershipVerdict::Growing : MembershipVerdict::Bounded;
    return out;
}

DoublingEstimate estimate_doubling(const WeightSpec& spec, const QuadratureConfig& quad, const BallSampling& balls) {
    quad.validate();
    const int d = spec.dim();
    balls.validate(d);
    DoublingEstimate out;
    out.n_balls = balls.n_balls;
    for (int k = 0; k < balls.n_balls; ++k) {
        Rng rng(derive_seed(quad.seed, kDoublingSalt, static_cast<std::uint64_t>(k)));
        const Vec c = ball_center(rng, balls, k, d);
        const double r = ball_radius(rng, balls);
        const MassEstimate inner = region_mass(spec, Region{ball(c, r)}, quad);
        if (!(inner.value > 2.0 * inner.std_error) || !(inner.value > 0.0)) {
            ++out.skipped;
            continue;
        }
        // Disjoint pieces so the ratio is 1 + w(outer shell)/w(inner ball).
        const MassEstimate ring = region_mass(spec, Region{Shell{c, r, 2.0 * r}}, quad);
        out.value = std::max(out.value, 1.0 + ring.value / inner.value);
    }
    return out;
}

void classify_infimum_trend(InfimumReport& rep) {
    const std::size_t n = rep.minima.size();
    rep.trend = InfimumTrend::Inconclusive;
    if (n < 2) return;
    const std::size_t mid = n >= 4 ? n / 2 : 0;
    std::vector<double> xs, ys;
    for (std::size_t k = mid; k < n; ++k) {
        if (!(rep.minima[k] > 0.0)) {
            rep.slope = -std::numeric_limits<double>::infinity();
            rep.trend = InfimumTrend::Vanishing;
            return;
        }
        xs.push_back(std::log(rep.scales[k]));
        ys.push_back(std::log(rep.minima[k]));
    }
    rep.slope = least_squares_slope(xs, ys);
    if (rep.slope >= -0.05)
        rep.trend = InfimumTrend::BoundedBelow;
    else if (rep.minima.back() < 0.1 * rep.minima.front())
        rep.trend = InfimumTrend::Vanishing;
}

InfimumReport unit_cube_infimum(const WeightSpec& spec, double search_radius, double grid_step,
                                const QuadratureConfig& quad, int extra_directions) {
    if (!(search_radius >= 1.0)) throw SpecError("search radius must be >= 1");
    if (!(grid_step > 0.0)) throw SpecError("grid step must be positive");
    const int d = spec.dim();

    // Candidate directions: coordinate axes, the main diagonals and a few seeded random ones.
    std::vector<Vec> dirs;
    for (int a = 0; a < d; ++a) {
        dirs.push_back(Vec::unit(d, a));
        dirs.push_back(-1.0 * Vec::unit(d, a));
    }
    for (int mask = 0; mask < (1 << d); ++mask) {
        Vec v(d);
        for (int a = 0; a < d; ++a) v[a] = (mask >> a & 1) ? -1.0 : 1.0;
        dirs.push_back(v * (1.0 / std::sqrt(static_cast<double>(d))));
    }
    Rng rng(derive_seed(quad.seed, kCubeSearchSalt));
    for (int k = 0; k < extra_directions; ++k) dirs.push_back(rng.direction(d));

    auto snap = [&](const Vec& x) {
        Vec y(d);
        for (int a = 0; a < d; ++a) y[a] = std::round(x[a] / grid_step) * grid_step;
        return y;
    };

    InfimumReport rep;
    rep.value = std::numeric_limits<double>::infinity();
    std::set<std::vector<double>> seen;
    // Shell j covers {2^{j-1} <= |c| < 2^j}; j = 0 is the core {|c| < 1}.
    for (int j = 0; std::ldexp(1.0, j - 1) < search_radius || j == 0; ++j) {
        const double inner = j == 0 ? 0.0 : std::ldexp(1.0, j - 1);
        const double outer = std::min(std::ldexp(1.0, j), search_radius);
        std::vector<Vec> centers;
        if (j == 0) centers.push_back(Vec::zeros(d));
        for (const double frac : {0.0, 0.5, 0.999}) {
            const double rho = j == 0 ? std::max(frac, grid_step) * outer : inner + frac * (outer - inner);
            for (const auto& xi : dirs) centers.push_back(snap(rho * xi));
        }
        double shell_min = std::numeric_limits<double>::infinity();
        for (const auto& c : centers) {
            const double rc = c.norm();
            if (rc < inner || rc >= outer) continue;
            const std::vector<double> key(c.coords().begin(), c.coords().end());
            if (!seen.insert(key).second) continue;
            const Cube q{c, 1.0};
            const double m = region_mass(spec, q, quad).value;
            shell_min = std::min(shell_min, m);
            if (m < rep.value) {
                rep.value = m;
                rep.argmin = describe(q);
            }
        }
        if (std::isfinite(shell_min)) {
            rep.scales.push_back(std::ldexp(1.0, j));
            rep.minima.push_back(shell_min);
        }
    }
    classify_infimum_trend(rep);
    return rep;
}

InfimumReport strip_infimum(const WeightSpec& spec, const Cube& base, int z_max, const QuadratureConfig& quad) {
    const int d = spec.dim();
    if (base.dim() != d - 1) throw SpecError("strip base must live in the first d-1 coordinates");
    base.validate();
    if (z_max < 2) throw SpecError("z_max must be >= 2");
    InfimumReport rep;
    rep.value = std::numeric_limits<double>::infinity();
    const Box bar = base.box();
    for (int z = 1; z <= z_max; ++z) {
        const double m = region_mass(spec, Region{box_product(bar, z, z + 1.0)}, quad).value;
        rep.scales.push_back(z);
        rep.minima.push_back(m);
        if (m < rep.value) {
            rep.value = m;
            rep.argmin = describe(base) + "x[" + std::to_string(z) + "," + std::to_string(z + 1) + "]";
        }
    }
    classify_infimum_trend(rep);
    return rep;
}

InfimumReport radial_window_infimum(const WeightSpec& spec, double r_max, double step) {
    if (!spec.is_radial()) throw SpecError("radial window infimum needs a radial weight");
    if (!(r_max >= 1.0) || !(step > 0.0)) throw SpecError("need r_max >= 1 and a positive step");
    std::vector<double> breaks;
    if (const auto* rp = std::get_if<RadialProfileWeight>(&spec.variant())) {
        for (const auto& seg : rp->profile.segments()) breaks.push_back(seg.start);
        if (rp->profile.exponent_at_zero() <= -1.0) throw SpecError("profile is not integrable at 0");
    } else if (const auto* pw = std::get_if<PowerWeight>(&spec.variant())) {
        if (pw->alpha <= -1.0) throw SpecError("profile is not integrable at 0");
    }

    using boost::math::quadrature::gauss_kronrod;
    auto v = [&](double s) { return spec.radial_value(s); };
    auto window = [&](double r) {
        double total = 0.0, a = r;
        for (double b : breaks) {
            if (b > a && b < r + 1.0) {
                total += gauss_kronrod<double, 31>::integrate(v, a, b, 15, 1e-12);
                a = b;
            }
        }
        return total + gauss_kronrod<double, 31>::integrate(v, a, r + 1.0, 15, 1e-12);
    };

    InfimumReport rep;
    rep.value = std::numeric_limits<double>::infinity();
    double shell_min = std::numeric_limits<double>::infinity();
    int shell = 0;
    const long n = static_cast<long>(std::floor(r_max / step));
    for (long k = 0; k <= n; ++k) {
        const double r = static_cast<double>(k) * step;
        // Shell j covers [2^{j-1}, 2^j) and is labelled by its lower end; j = 0 is [0, 1).
        int j = 0;
        if (r >= 1.0) {
            std::frexp(r, &j);
        }
        if (j != shell) {
            if (std::isfinite(shell_min)) {
                rep.scales.push_back(std::ldexp(1.0, shell - 1));
                rep.minima.push_back(shell_min);
            }
            shell = j;
            shell_min = std::numeric_limits<double>::infinity();
        }
        const double m = window(r);
        shell_min = std::min(shell_min, m);
        if (m < rep.value) {
            rep.value = m;
            rep.argmin = "window[" + std::to_string(r) + "," + std::to_string(r + 1.0) + "]";
        }
    }
    if (std::isfinite(shell_min)) {
        rep.scales.push_back(std::ldexp(1.0, shell - 1));
        rep.minima.push_back(shell_min);
    }
    classify_infimum_trend(rep);
    return rep;
}

}  // namespace limlab
