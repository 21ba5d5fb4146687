#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>

namespace limlab {

inline constexpr int kMaxDim = 6;

/// Fixed-capacity point/vector in R^d, 1 <= d <= kMaxDim.
class Vec {
public:
    Vec() = default;
    explicit Vec(int dim) : dim_(checked(dim)) {}
    Vec(std::initializer_list<double> xs) : dim_(checked(static_cast<int>(xs.size()))) {
        int i = 0;
        for (double x : xs) c_[i++] = x;
    }
    explicit Vec(std::span<const double> xs) : dim_(checked(static_cast<int>(xs.size()))) {
        for (int i = 0; i < dim_; ++i) c_[i] = xs[i];
    }

    static Vec zeros(int dim) { return Vec(dim); }
    static Vec unit(int dim, int axis) {
        Vec v(dim);
        v[axis] = 1.0;
        return v;
    }

    int dim() const { return dim_; }
    double& operator[](int i) { return c_[i]; }
    double operator[](int i) const { return c_[i]; }
    double last() const { return c_[dim_ - 1]; }
    std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

    double norm2() const {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }
    double norm_inf() const {
        double m = 0.0;
        for (int i = 0; i < dim_; ++i) m = std::fmax(m, std::fabs(c_[i]));
        return m;
    }

    /// Drop the last coordinate: x = (x̄, t) -> x̄.
    Vec head() const {
        Vec h(dim_ - 1);
        for (int i = 0; i + 1 < dim_; ++i) h[i] = c_[i];
        return h;
    }
    /// (x̄, t) from a (d-1)-point and a last coordinate.
    static Vec join(const Vec& bar, double t) {
        Vec v(bar.dim() + 1);
        for (int i = 0; i < bar.dim(); ++i) v[i] = bar[i];
        v[bar.dim()] = t;
        return v;
    }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < dim_; ++i) c_[i] *= s;
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.dim_ != b.dim_) return false;
        for (int i = 0; i < a.dim_; ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }

private:
    static int checked(int dim) {
        if (dim < 1 || dim > kMaxDim)
            throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                                        std::to_string(dim));
        return dim;
    }

    std::array<double, kMaxDim> c_{};
    int dim_ = 1;
};

/// Surface measure of the unit sphere S^{d-1}.
inline double sphere_area(int d) {
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

/// Lebesgue measure of the unit ball in R^d.
inline double ball_volume(int d) { return sphere_area(d) / d; }

/// {x : inner <= |x - center| < outer}; inner == 0 gives a ball.
struct Shell {
    Vec center;
    double inner = 0.0;
    double outer = 1.0;

    int dim() const { return center.dim(); }
    double volume() const {
        const int d = dim();
        return ball_volume(d) * (std::pow(outer, d) - std::pow(inner, d));
    }
    bool contains(const Vec& x) const {
        const double r = (x - center).norm();
        return r >= inner && r < outer;
    }
    void validate() const {
        if (!(inner >= 0.0) || !(outer > inner) || !std::isfinite(outer))
            throw std::invalid_argument("shell radii must satisfy 0 <= inner < outer < inf");
    }
};

/// A_i = {2^i <= |x - center| < 2^{i+1}}.
struct DyadicAnnulus {
    int index = 0;
    Vec center;

    DyadicAnnulus(int i, Vec c) : index(i), center(std::move(c)) {}
    DyadicAnnulus(int i, int dim) : index(i), center(Vec::zeros(dim)) {}

    double inner() const { return std::ldexp(1.0, index); }
    double outer() const { return std::ldexp(1.0, index + 1); }
    Shell shell() const { return Shell{center, inner(), outer()}; }
};

inline Shell ball(const Vec& center, double radius) { return Shell{center, 0.0, radius}; }

/// Axis-aligned box prod [lo_i, hi_i].
struct Box {
    Vec lo;
    Vec hi;

    int dim() const { return lo.dim(); }
    double volume() const {
        double v = 1.0;
        for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
        return v;
    }
    Vec center() const { return 0.5 * (lo + hi); }
    bool contains(const Vec& x) const {
        for (int i = 0; i < dim(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }
    void validate() const {
        if (lo.dim() != hi.dim()) throw std::invalid_argument("box corners differ in dimension");
        for (int i = 0; i < dim(); ++i)
            if (!(hi[i] > lo[i])) throw std::invalid_argument("box must have positive extent in every axis");
    }
};

/// Axis-aligned cube Q(center, edge) = prod [c_i - edge/2, c_i + edge/2].
struct Cube {
    Vec center;
    double edge = 1.0;

    int dim() const { return center.dim(); }
    Box box() const {
        Vec lo = center, hi = center;
        for (int i = 0; i < dim(); ++i) {
            lo[i] -= 0.5 * edge;
            hi[i] += 0.5 * edge;
        }
        return Box{lo, hi};
    }
    Cube scaled(double a) const { return Cube{center, a * edge}; }
    double volume() const { return std::pow(edge, dim()); }
    void validate() const {
        if (!(edge > 0.0) || !std::isfinite(edge)) throw std::invalid_argument("cube edge must be positive");
    }
};

/// Euclidean distance between two boxes (0 when they intersect).
inline double box_distance(const Box& a, const Box& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        const double gap = std::fmax(0.0, std::fmax(a.lo[i] - b.hi[i], b.lo[i] - a.hi[i]));
        s += gap * gap;
    }
    return std::sqrt(s);
}

/// Q × [z0, z1] with Q a box in R^{d-1}.
inline Box box_product(const Box& bar, double z0, double z1) {
    return Box{Vec::join(bar.lo, z0), Vec::join(bar.hi, z1)};
}

using Region = std::variant<Shell, Box>;

inline int region_dim(const Region& r) {
    return std::visit([](const auto& x) { return x.dim(); }, r);
}
inline double region_volume(const Region& r) {
    return std::visit([](const auto& x) { return x.volume(); }, r);
}

}  // namespace limlab
