#pragma once

#include <cstdint>
#include <functional>

#include "ropg/exact.hpp"

namespace ropg {

// Closed-form limit objects for the rescaled rank of the equilibrium a BRD
// reaches from a uniform start, supported on [0, 1/2], and the fluid limit
// of the incremental construction. All functions are pure and thread-safe.

// Density: exp(sqrt(1 - 2*eps)) on [0, 1/2]; also the limit of the expected
// basin size over K of the eps*K-th best equilibrium.
double limit_rank_density(double epsilon);

// CDF: (1 - sqrt(1 - 2*eps)) * exp(sqrt(1 - 2*eps)) on [0, 1/2].
double limit_rank_cdf(double epsilon);

// Mean of the limit law: e - 5/2.
double limit_mean_rank();

// Fluid-limit trajectory of the rescaled construction processes at rescaled
// time s = t/K: row and column fractions 1 - e^{-s}, green fraction
// (1 - e^{-2s})/2.
struct FluidState {
    double s = 0.0;
    double row_fraction = 0.0;
    double col_fraction = 0.0;
    double green_fraction = 0.0;
};
FluidState fluid_solution(double s);

// Limit of tau_{eps K}/K: log(1/(1-2*eps))/2, for eps in (0, 1/2).
double stop_time_limit(double epsilon);

// Limit of R_tau/K and C_tau/K: 1 - sqrt(1-2*eps), for eps in (0, 1/2).
double occupancy_limit(double epsilon);

// h(t) = sum_{i=1..t} floor(i/2); the count of already-visited rows/columns
// a t-step best-response path excludes. h(t) <= t^2/2.
std::int64_t cumulative_floor_half(std::int64_t t);

// L_K(zeta) = sum_{l=0}^{2K-2} zeta*K/((l+1)K - h(l+1)) *
//             prod_{t=1}^{l} (zeta*K - floor(t/2))/(tK - h(t)).
// Running products with compensated summation; converges to e^zeta - 1.
// For non-integer zeta*K the product is treated as zero from the first
// non-positive numerator on (no path of that length exists).
double path_sum_series(int k, double zeta);

// Expected basin size over K of the eps*K-th equilibrium given the stopped
// construction left r occupied rows and c occupied columns:
// 1 + (K-c) * sum_{l=0}^{2K-2} 1/((l+1)K - h(l+1)) *
//     prod_{t=1}^{l} (K - r*[t odd] - c*[t even] - floor(t/2))/(tK - h(t)).
// Approaches exp(sqrt(1-2*eps)) when r = c = occupancy_limit(eps)*K.
double expected_basin_finite_k(int k, int occupied_rows, int occupied_cols);

// Exact-rational twins used to cross-check the floating-point evaluation;
// intended for k <= 100.
Rational path_sum_series_exact(int k, const Rational& zeta);
Rational expected_basin_finite_k_exact(int k, int occupied_rows, int occupied_cols);

// floor(epsilon * k) with a tiny upward nudge so that mathematically integer
// products (0.3 * 10^4 = 3000) are not pushed below the integer by binary
// rounding of epsilon.
int floor_epsilon_k(double epsilon, int k);

// H_n = sum_{i=1..n} 1/i.
double harmonic(std::int64_t n);

// Expected time for the K-row coupon process to occupy its j-th row:
// K * (H_K - H_{K-j}).
double coupon_collection_mean(int k, int j);

// Adaptive Simpson quadrature with absolute tolerance `tol`. The interval is
// bisected until the local Simpson estimates agree; safe for integrands with
// an endpoint derivative singularity such as the rank density at 1/2.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

}  // namespace ropg
