#pragma once

// Closed forms and brute-force integrators used as test oracles.

#include <cmath>
#include <functional>
#include <numbers>

#include "limlab/geometry.hpp"

namespace ref {

inline double sphere_measure(int d) { return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0); }

/// ∫_{a<|x|<b} |x|^alpha dx.
inline double power_shell_mass(int d, double alpha, double a, double b) {
    const double e = d + alpha;
    if (e == 0.0) return sphere_measure(d) * std::log(b / a);
    return sphere_measure(d) * (std::pow(b, e) - std::pow(a, e)) / e;
}

inline double power_annulus_mass(int d, double alpha, int i) {
    return power_shell_mass(d, alpha, std::ldexp(1.0, i), std::ldexp(1.0, i + 1));
}

/// ∫_z^{z+1} s^{-1/2} ds.
inline double inverse_sqrt_window(double z) { return 2.0 * (std::sqrt(z + 1.0) - std::sqrt(z)); }

/// Midpoint rule on an n^d grid over a box.
inline double grid_integral(const std::function<double(const limlab::Vec&)>& f, const limlab::Box& box, int n) {
    const int d = box.dim();
    double cell = 1.0;
    for (int a = 0; a < d; ++a) cell *= (box.hi[a] - box.lo[a]) / n;
    long total = 1;
    for (int a = 0; a < d; ++a) total *= n;
    double sum = 0.0;
    for (long k = 0; k < total; ++k) {
        limlab::Vec x(d);
        long rest = k;
        for (int a = 0; a < d; ++a) {
            const long idx = rest % n;
            rest /= n;
            x[a] = box.lo[a] + (idx + 0.5) * (box.hi[a] - box.lo[a]) / n;
        }
        sum += f(x);
    }
    return sum * cell;
}

}  // namespace ref
