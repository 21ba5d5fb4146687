#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "limlab/geometry.hpp"

namespace limlab {

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return mix64(seed ^ mix64(salt + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

/// Thin wrapper over mt19937_64 with the few draws the samplers need.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    double uniform() { return unif_(engine_); }
    double uniform(double a, double b) { return a + (b - a) * unif_(engine_); }
    double normal() { return normal_(engine_); }

    /// Uniform direction on S^{d-1}: a normalized standard Gaussian vector.
    Vec direction(int d) {
        for (;;) {
            Vec v(d);
            for (int i = 0; i < d; ++i) v[i] = normal();
            const double n = v.norm();
            if (n > 0.0) return v * (1.0 / n);
        }
    }

    /// Radius distributed ∝ r^{d-1} on [a, b] (volume-uniform within the shell).
    double shell_radius(int d, double a, double b) {
        const double ad = std::pow(a, d), bd = std::pow(b, d);
        return std::pow(ad + uniform() * (bd - ad), 1.0 / d);
    }

    Vec in_shell(const Shell& s) { return s.center + shell_radius(s.dim(), s.inner, s.outer) * direction(s.dim()); }

    Vec in_box(const Box& b) {
        Vec x(b.dim());
        for (int i = 0; i < b.dim(); ++i) x[i] = uniform(b.lo[i], b.hi[i]);
        return x;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace limlab
