#pragma once

// Stratified Monte Carlo over shells and boxes.
//
// Shells are split into log-spaced radial strata (radii drawn volume-uniformly inside each
// stratum, directions from normalized Gaussians); boxes into a tensor grid of sub-boxes.
// Every (stratum, round) pair owns a stream seeded from (seed, salt, stratum, round), so
// results are bit-identical for identical inputs whatever order strata are visited in.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "limlab/geometry.hpp"
#include "limlab/rng.hpp"
#include "limlab/weights.hpp"

namespace limlab {

struct Stratum {
    Region region;
    double volume = 0.0;
};

/// Partition of a shell into log-spaced sub-shells (inner == 0 gets a dyadic core), or of a
/// box into a grid of about `strata` sub-boxes.
std::vector<Stratum> make_strata(const Region& region, int strata);

template <std::size_t N>
struct VectorEstimate {
    std::array<double, N> value{};
    std::array<std::array<double, N>, N> cov{};
    long n_samples = 0;
    long defects = 0;
    bool target_met = true;

    double std_error(std::size_t k) const { return std::sqrt(std::fmax(cov[k][k], 0.0)); }
};

namespace detail {

template <std::size_t N>
struct StratumAccumulator {
    long n = 0;
    std::array<double, N> sum{};
    std::array<std::array<double, N>, N> cross{};
};

inline Vec draw(Rng& rng, const Region& r) {
    if (const auto* s = std::get_if<Shell>(&r)) return rng.in_shell(*s);
    return rng.in_box(std::get<Box>(r));
}

}  // namespace detail

/// ∫_region f dx for a vector integrand. `f` returns std::nullopt on its singular set; such draws
/// are redrawn and counted as defects. Refinement doubles the per-stratum sample count until the
/// relative error of component `tracked` meets the target or the budget is spent.
template <std::size_t N, class F>
VectorEstimate<N> integrate_vector(const Region& region, F&& f, const QuadratureConfig& quad, std::uint64_t salt,
                                   std::size_t tracked = 0) {
    quad.validate();
    const auto strata = make_strata(region, quad.radial_strata);
    const long per_stratum0 =
        std::max<long>(2, quad.samples_per_region / static_cast<long>(strata.size()));
    std::vector<detail::StratumAccumulator<N>> acc(strata.size());
    VectorEstimate<N> out;
    constexpr int kMaxRedraws = 64;

    const int rounds = quad.relative_error_target > 0.0 ? quad.max_doublings + 1 : 1;
    for (int round = 0; round < rounds; ++round) {
        const long batch = round == 0 ? per_stratum0 : per_stratum0 << (round - 1);
        for (std::size_t s = 0; s < strata.size(); ++s) {
            Rng rng(derive_seed(quad.seed, salt, (static_cast<std::uint64_t>(s) << 8) | static_cast<unsigned>(round)));
            auto& a = acc[s];
            for (long j = 0; j < batch; ++j) {
                std::optional<std::array<double, N>> y;
                for (int attempt = 0; attempt < kMaxRedraws && !y; ++attempt) {
                    y = f(detail::draw(rng, strata[s].region));
                    if (!y) ++out.defects;
                }
                if (!y) throw NumericalError("integrand singular on an entire stratum");
                ++a.n;
                for (std::size_t k = 0; k < N; ++k) {
                    a.sum[k] += (*y)[k];
                    for (std::size_t l = 0; l < N; ++l) a.cross[k][l] += (*y)[k] * (*y)[l];
                }
            }
        }

        out.value = {};
        out.cov = {};
        out.n_samples = 0;
        for (std::size_t s = 0; s < strata.size(); ++s) {
            const auto& a = acc[s];
            const double n = static_cast<double>(a.n);
            const double v = strata[s].volume;
            out.n_samples += a.n;
            for (std::size_t k = 0; k < N; ++k) {
                const double mk = a.sum[k] / n;
                out.value[k] += v * mk;
                for (std::size_t l = 0; l < N; ++l) {
                    const double ml = a.sum[l] / n;
                    const double c = (a.cross[k][l] - n * mk * ml) / (n - 1.0);
                    out.cov[k][l] += v * v * c / n;
                }
            }
        }
        const double se = out.std_error(tracked);
        out.target_met = quad.relative_error_target <= 0.0 || se <= quad.relative_error_target * std::fabs(out.value[tracked]);
        if (out.target_met) break;
    }
    return out;
}

/// Scalar ∫_region f dx as a MassEstimate (StratifiedMC).
template <class F>
MassEstimate integrate_scalar(const Region& region, F&& f, const QuadratureConfig& quad, std::uint64_t salt) {
    auto wrapped = [&](const Vec& x) -> std::optional<std::array<double, 1>> {
        const std::optional<double> y = f(x);
        if (!y) return std::nullopt;
        return std::array<double, 1>{*y};
    };
    const auto est = integrate_vector<1>(region, wrapped, quad, salt);
    MassEstimate m;
    m.value = est.value[0];
    m.std_error = est.std_error(0);
    m.n_samples = est.n_samples;
    m.method = MassMethod::StratifiedMC;
    m.target_met = est.target_met;
    m.defects = est.defects;
    return m;
}

/// Stable salt for a region so distinct regions draw from distinct streams.
std::uint64_t region_salt(const Region& region);

}  // namespace limlab
