#include "limlab/oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace limlab::oracle {

bool ray_meets_box(const Vec& xi, const Box& box, double t_lo, double t_hi) {
    double enter = t_lo, exit = t_hi;
    for (int a = 0; a < xi.dim(); ++a) {
        if (xi[a] == 0.0) {
            if (!(box.lo[a] < 0.0 && 0.0 < box.hi[a])) return false;
            continue;
        }
        double t0 = box.lo[a] / xi[a], t1 = box.hi[a] / xi[a];
        if (t0 > t1) std::swap(t0, t1);
        enter = std::fmax(enter, t0);
        exit = std::fmin(exit, t1);
        if (!(enter < exit)) return false;
    }
    return enter < exit;
}

std::vector<double> grid_geodesic_2d(const std::function<double(double, double)>& g, int n, double h) {
    const int side = n + 1;
    std::vector<double> dist(static_cast<std::size_t>(side) * side, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[0] = 0.0;
    pq.emplace(0.0, 0);
    static constexpr int di[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    while (!pq.empty()) {
        const auto [d, node] = pq.top();
        pq.pop();
        if (d > dist[node]) continue;
        const int i = node % side, j = node / side;
        for (int k = 0; k < 8; ++k) {
            const int a = i + di[k], b = j + dj[k];
            if (a < 0 || b < 0 || a >= side || b >= side) continue;
            const double len = h * std::hypot(di[k], dj[k]);
            const double cost = len * g(h * (i + 0.5 * di[k]), h * (j + 0.5 * dj[k]));
            const int next = a + b * side;
            if (d + cost < dist[next]) {
                dist[next] = d + cost;
                pq.emplace(dist[next], next);
            }
        }
    }
    return dist;
}

double sphere_cap_average_3d(const std::function<double(const Vec&)>& f, double r, double theta_max, int n_theta,
                             int n_phi) {
    const double dt = theta_max / n_theta, dp = 2.0 * std::numbers::pi / n_phi;
    double sum = 0.0;
    for (int a = 0; a < n_theta; ++a) {
        const double th = (a + 0.5) * dt;
        const double st = std::sin(th), ct = std::cos(th);
        double ring = 0.0;
        for (int b = 0; b < n_phi; ++b) {
            const double ph = (b + 0.5) * dp;
            ring += f(Vec{r * st * std::cos(ph), r * st * std::sin(ph), r * ct});
        }
        sum += ring * st;
    }
    return sum * dt * dp / (4.0 * std::numbers::pi);
}

}  // namespace limlab::oracle
