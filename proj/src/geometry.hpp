#pragma once

// Geometry of relay chains: sum-squared hop distances, the tridiagonal
// quadratic forms behind them, and the Lebesgue measure of their sublevel
// sets (2m-dimensional ellipsoids). Source sits at (-R/2, 0), destination at
// (R/2, 0) throughout.

#include <array>
#include <cstdint>
#include <vector>

namespace mhtc::geom {

struct RelayChain {
    std::vector<std::array<double, 2>> relays; // ordered; size m (0 = direct hop)
    double R = 0.0;                            // source-destination distance
};

// Per-hop attempt counts, all entries >= 1; size m+1.
using AttemptVector = std::vector<int>;

// (x1+R/2)^2 + sum (x_{i+1}-x_i)^2 + (x_m-R/2)^2 + y-part; R^2 for m = 0.
double sum_squared_distance(const RelayChain& chain);

// R^2/(m+1), attained by m relays equidistant on the S-D segment.
double min_sum_squared(double R, int m);

// det of the m x m tridiagonal matrix with 2 on the diagonal and -1 off it,
// by the recurrence det(A_m) = 2 det(A_{m-1}) - det(A_{m-2}); equals m+1.
int64_t tridiag_det_uniform(int m);

// det of the weighted form with diagonal n_i + n_{i+1}, off-diagonal -n_{i+1}
// (n has m+1 entries), by fraction-free elimination; equals (prod n)(sum 1/n).
int64_t tridiag_det_weighted(const AttemptVector& n);

// The closed form (prod n_i)(sum 1/n_i) = sum_i prod_{j != i} n_j, exact in
// integers. Kept separate so tests can pit it against the elimination route.
int64_t weighted_det_closed_form(const AttemptVector& n);

// V_m(a) = pi^m (a - R^2/(m+1))^m / (m+1)!
double ellipsoid_volume(int m, double a, double R);

// V_m^*(a) = pi^m (a - R^2/sum(1/n_i))^m / (m! (prod n_i)(sum 1/n_i))
double ellipsoid_volume_weighted(const AttemptVector& n, double a, double R);

} // namespace mhtc::geom
