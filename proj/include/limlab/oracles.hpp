#pragma once

// Independent reference computations used to cross-check the estimators.

#include <functional>
#include <vector>

#include "limlab/geometry.hpp"

namespace limlab::oracle {

/// Whether the ray {t xi : t_lo <= t <= t_hi} meets the interior of the box (slab test).
bool ray_meets_box(const Vec& xi, const Box& box, double t_lo, double t_hi);

/// Shortest-path distances from the origin on the grid {0, h, ..., n h}^2 with 8-neighbour edges,
/// each edge costing its length times g at the edge midpoint. Row-major (i + j (n+1)).
std::vector<double> grid_geodesic_2d(const std::function<double(double, double)>& g, int n, double h);

/// (1/|S^2|) ∫ f over the polar cap {angle to e_3 <= theta_max} of the sphere of radius r,
/// midpoint rule on an n_theta x n_phi grid.
double sphere_cap_average_3d(const std::function<double(const Vec&)>& f, double r, double theta_max, int n_theta,
                             int n_phi);

}  // namespace limlab::oracle
