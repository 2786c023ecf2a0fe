#include <doctest.h>

#include <cmath>

#include "ropg/rng.hpp"
#include "ropg/theory.hpp"

using namespace ropg;

namespace {

const double kE = std::exp(1.0);

}  // namespace

TEST_CASE("limit rank density endpoints and interior value") {
    CHECK(limit_rank_density(0.0) == doctest::Approx(kE).epsilon(1e-12));
    CHECK(limit_rank_density(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    // 1 - 2*0.18 = 0.64 is a perfect square
    CHECK(limit_rank_density(0.18) == doctest::Approx(std::exp(0.8)).epsilon(1e-12));
    CHECK_THROWS_AS(limit_rank_density(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(limit_rank_density(0.51), std::invalid_argument);
}

TEST_CASE("limit rank CDF endpoints, interior value, monotonicity") {
    CHECK(limit_rank_cdf(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(limit_rank_cdf(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(limit_rank_cdf(0.18) == doctest::Approx(0.2 * std::exp(0.8)).epsilon(1e-12));
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double value = limit_rank_cdf(i / 200.0);
        CHECK(value > prev);
        prev = value;
    }
    CHECK_THROWS_AS(limit_rank_cdf(0.6), std::invalid_argument);
}

TEST_CASE("density normalizes to one") {
    const double integral =
        adaptive_simpson([](double e) { return limit_rank_density(e); }, 0.0, 0.5, 1e-10);
    CHECK(std::abs(integral - 1.0) <= 1e-6);
}

TEST_CASE("CDF derivative equals the density") {
    const double h = 1e-5;
    for (int i = 1; i < 50; ++i) {
        const double eps = 0.48 * i / 50.0;
        const double derivative =
            (limit_rank_cdf(eps + h) - limit_rank_cdf(eps - h)) / (2.0 * h);
        CHECK(std::abs(derivative - limit_rank_density(eps)) <= 1e-6);
    }
}

TEST_CASE("limit mean rank: value and two quadrature routes") {
    CHECK(limit_mean_rank() == doctest::Approx(kE - 2.5).epsilon(1e-15));
    CHECK(limit_mean_rank() > 0.0);
    CHECK(limit_mean_rank() < 0.5);

    const double by_density = adaptive_simpson(
        [](double e) { return e * limit_rank_density(e); }, 0.0, 0.5, 1e-10);
    CHECK(std::abs(by_density - limit_mean_rank()) <= 1e-8);

    // integration by parts: E[X] = x*Phi(x)|_0^{1/2} - int Phi = 1/2 - int Phi
    const double cdf_integral =
        adaptive_simpson([](double e) { return limit_rank_cdf(e); }, 0.0, 0.5, 1e-10);
    CHECK(std::abs((0.5 - cdf_integral) - limit_mean_rank()) <= 1e-8);
}

TEST_CASE("fluid solution: initial point and log 2") {
    const FluidState zero = fluid_solution(0.0);
    CHECK(zero.row_fraction == 0.0);
    CHECK(zero.col_fraction == 0.0);
    CHECK(zero.green_fraction == 0.0);

    const FluidState mid = fluid_solution(std::log(2.0));
    CHECK(mid.row_fraction == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mid.col_fraction == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mid.green_fraction == doctest::Approx(0.375).epsilon(1e-12));

    CHECK_THROWS_AS(fluid_solution(-0.1), std::invalid_argument);
}

TEST_CASE("fluid solution satisfies the Cauchy system") {
    const double h = 1e-5;
    for (int i = 0; i <= 40; ++i) {
        const double s = 0.05 + i * 0.1;
        const FluidState lo = fluid_solution(s - h);
        const FluidState hi = fluid_solution(s + h);
        const FluidState mid = fluid_solution(s);
        const double dr = (hi.row_fraction - lo.row_fraction) / (2.0 * h);
        const double dc = (hi.col_fraction - lo.col_fraction) / (2.0 * h);
        const double dg = (hi.green_fraction - lo.green_fraction) / (2.0 * h);
        CHECK(std::abs(dr - (1.0 - mid.row_fraction)) <= 1e-6);
        CHECK(std::abs(dc - (1.0 - mid.col_fraction)) <= 1e-6);
        CHECK(std::abs(dg - (1.0 - mid.row_fraction) * (1.0 - mid.col_fraction)) <= 1e-6);
    }
}

TEST_CASE("fluid solution matches an RK4 integration of the system") {
    // Independent route: integrate dr = 1-r, dc = 1-c, dg = (1-r)(1-c).
    double r = 0.0, c = 0.0, g = 0.0;
    const double h = 1e-4;
    const auto fr = [](double rr) { return 1.0 - rr; };
    for (int step = 0; step < 20000; ++step) {
        const double s_r1 = fr(r), s_c1 = fr(c), s_g1 = fr(r) * fr(c);
        const double s_r2 = fr(r + 0.5 * h * s_r1), s_c2 = fr(c + 0.5 * h * s_c1);
        const double s_g2 = fr(r + 0.5 * h * s_r1) * fr(c + 0.5 * h * s_c1);
        const double s_r3 = fr(r + 0.5 * h * s_r2), s_c3 = fr(c + 0.5 * h * s_c2);
        const double s_g3 = fr(r + 0.5 * h * s_r2) * fr(c + 0.5 * h * s_c2);
        const double s_r4 = fr(r + h * s_r3), s_c4 = fr(c + h * s_c3);
        const double s_g4 = fr(r + h * s_r3) * fr(c + h * s_c3);
        r += h / 6.0 * (s_r1 + 2 * s_r2 + 2 * s_r3 + s_r4);
        c += h / 6.0 * (s_c1 + 2 * s_c2 + 2 * s_c3 + s_c4);
        g += h / 6.0 * (s_g1 + 2 * s_g2 + 2 * s_g3 + s_g4);
    }
    const FluidState state = fluid_solution(2.0);
    CHECK(std::abs(state.row_fraction - r) <= 1e-9);
    CHECK(std::abs(state.col_fraction - c) <= 1e-9);
    CHECK(std::abs(state.green_fraction - g) <= 1e-9);
}

TEST_CASE("stopping-time and occupancy limits") {
    CHECK(stop_time_limit(1e-9) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(stop_time_limit(0.3) == doctest::Approx(0.5 * std::log(2.5)).epsilon(1e-12));
    CHECK(occupancy_limit(0.18) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(occupancy_limit(0.3) == doctest::Approx(1.0 - std::sqrt(0.4)).epsilon(1e-12));
    CHECK_THROWS_AS(stop_time_limit(0.0), std::invalid_argument);
    CHECK_THROWS_AS(occupancy_limit(0.5), std::invalid_argument);

    for (const double eps : {0.1, 0.25, 0.4}) {
        const FluidState at_tau = fluid_solution(stop_time_limit(eps));
        CHECK(std::abs(at_tau.green_fraction - eps) <= 1e-12);
        CHECK(std::abs(at_tau.row_fraction - occupancy_limit(eps)) <= 1e-12);
    }
}

TEST_CASE("path sum series approaches e^zeta - 1") {
    CHECK(std::abs(path_sum_series(10000, 1.0) - (kE - 1.0)) <= 0.01);
    CHECK(path_sum_series(1000, 1e-7) <= 1e-6);  // every term carries zeta

    const double zeta = std::sqrt(0.4);
    const double target = std::exp(zeta) - 1.0;
    double prev_err = 1e9;
    for (const int k : {100, 1000, 10000}) {
        const double err = std::abs(path_sum_series(k, zeta) - target);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("path sum series agrees with its exact-rational twin") {
    for (const int k : {5, 20, 50, 100}) {
        const double via_double = path_sum_series(k, 1.0);
        const double via_exact = to_double(path_sum_series_exact(k, Rational(1)));
        CHECK(std::abs(via_double - via_exact) <= 1e-12);

        const double via_double_half = path_sum_series(k, 0.5);
        const double via_exact_half = to_double(path_sum_series_exact(k, Rational(1, 2)));
        CHECK(std::abs(via_double_half - via_exact_half) <= 1e-12);
    }
}

TEST_CASE("finite-K basin expectation: boundary and limit values") {
    CHECK(expected_basin_finite_k(100, 40, 100) == doctest::Approx(1.0).epsilon(1e-12));
    // r = c = occupancy_limit(0.18) * K = 0.2 * 10^4
    CHECK(std::abs(expected_basin_finite_k(10000, 2000, 2000) - limit_rank_density(0.18)) <=
          0.02);
    // the eps -> 0 case approaches e
    CHECK(std::abs(expected_basin_finite_k(10000, 0, 0) - kE) <= 0.02);
    CHECK_THROWS_AS(expected_basin_finite_k(10, -1, 0), std::invalid_argument);
    CHECK_THROWS_AS(expected_basin_finite_k(10, 0, 11), std::invalid_argument);
}

TEST_CASE("finite-K basin expectation converges to the density on a grid") {
    for (const double eps : {0.1, 0.18, 0.3}) {
        double prev_err = 1e9;
        for (const int k : {100, 1000, 10000}) {
            const int rc = static_cast<int>(occupancy_limit(eps) * k);
            const double err =
                std::abs(expected_basin_finite_k(k, rc, rc) - limit_rank_density(eps));
            CHECK(err < prev_err);
            prev_err = err;
        }
        CHECK(prev_err <= 0.03);
    }
}

TEST_CASE("finite-K basin expectation agrees with its exact-rational twin") {
    for (const int k : {10, 50, 100}) {
        for (const int rc : {0, k / 5, k / 2}) {
            const double via_double = expected_basin_finite_k(k, rc, rc);
            const double via_exact = to_double(expected_basin_finite_k_exact(k, rc, rc));
            CHECK(std::abs(via_double - via_exact) <= 1e-12);
        }
    }
}

TEST_CASE("harmonic numbers and coupon expectations") {
    CHECK(harmonic(0) == 0.0);
    CHECK(harmonic(1) == 1.0);
    CHECK(harmonic(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-12));

    CHECK(coupon_collection_mean(100, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(coupon_collection_mean(100, 100) ==
          doctest::Approx(100.0 * harmonic(100)).epsilon(1e-12));
    CHECK(coupon_collection_mean(100, 100) == doctest::Approx(518.737752).epsilon(1e-6));
    CHECK_THROWS_AS(coupon_collection_mean(100, 0), std::invalid_argument);
    CHECK_THROWS_AS(coupon_collection_mean(100, 101), std::invalid_argument);
}

TEST_CASE("coupon expectation matches a direct simulation") {
    // Oracle: draw uniform coupons until all K are collected.
    const int k = 100;
    const int runs = 100000;
    Rng rng(777);
    double total = 0.0;
    double total_sq = 0.0;
    for (int i = 0; i < runs; ++i) {
        std::vector<bool> seen(static_cast<std::size_t>(k), false);
        int collected = 0;
        std::int64_t draws = 0;
        while (collected < k) {
            ++draws;
            const auto c = static_cast<std::size_t>(rng.below(k));
            if (!seen[c]) {
                seen[c] = true;
                ++collected;
            }
        }
        total += static_cast<double>(draws);
        total_sq += static_cast<double>(draws) * static_cast<double>(draws);
    }
    const double mean = total / runs;
    const double variance = (total_sq - runs * mean * mean) / (runs - 1);
    const double std_err = std::sqrt(variance / runs);
    CHECK(std::abs(mean - coupon_collection_mean(k, k)) <= 3.0 * std_err);
}

TEST_CASE("floor_epsilon_k handles binary rounding of epsilon") {
    CHECK(floor_epsilon_k(0.3, 10000) == 3000);
    CHECK(floor_epsilon_k(0.05, 250) == 12);
    CHECK(floor_epsilon_k(0.1, 10) == 1);
    CHECK(floor_epsilon_k(0.4, 10) == 4);
    CHECK(floor_epsilon_k(0.0, 1000) == 0);
}

TEST_CASE("adaptive quadrature on a polynomial") {
    const double integral =
        adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
    CHECK(integral == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}
