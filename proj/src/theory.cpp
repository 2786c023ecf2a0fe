#include "ropg/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace ropg {

namespace {

void check_unit_half_closed(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 0.5))
        throw std::invalid_argument("epsilon must lie in [0, 1/2]");
}

void check_unit_half_open(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("epsilon must lie in (0, 1/2)");
}

}  // namespace

double limit_rank_density(double epsilon) {
    check_unit_half_closed(epsilon);
    return std::exp(std::sqrt(1.0 - 2.0 * epsilon));
}

double limit_rank_cdf(double epsilon) {
    check_unit_half_closed(epsilon);
    const double root = std::sqrt(1.0 - 2.0 * epsilon);
    return (1.0 - root) * std::exp(root);
}

double limit_mean_rank() { return std::exp(1.0) - 2.5; }

FluidState fluid_solution(double s) {
    if (s < 0.0) throw std::invalid_argument("rescaled time must be >= 0");
    FluidState state;
    state.s = s;
    state.row_fraction = -std::expm1(-s);
    state.col_fraction = state.row_fraction;
    state.green_fraction = -std::expm1(-2.0 * s) / 2.0;
    return state;
}

double stop_time_limit(double epsilon) {
    check_unit_half_open(epsilon);
    return 0.5 * std::log(1.0 / (1.0 - 2.0 * epsilon));
}

double occupancy_limit(double epsilon) {
    check_unit_half_open(epsilon);
    return 1.0 - std::sqrt(1.0 - 2.0 * epsilon);
}

std::int64_t cumulative_floor_half(std::int64_t t) {
    if (t < 0) throw std::invalid_argument("t must be >= 0");
    // sum floor(i/2) = floor(t/2) * floor((t+1)/2) + ... closed form:
    // pairs (1,1),(2,2),... contribute; direct formula below equals the sum.
    const std::int64_t half = t / 2;
    return t % 2 == 0 ? half * half : half * (half + 1);
}

namespace {

// Kahan-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

double path_sum_series(int k, double zeta) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be > 0");
    const double kk = static_cast<double>(k);
    CompensatedSum acc;
    double product = 1.0;  // prod_{t=1}^{l}
    for (std::int64_t l = 0; l <= 2 * static_cast<std::int64_t>(k) - 2; ++l) {
        if (l > 0) {
            const double numerator = zeta * kk - static_cast<double>(l / 2);
            if (numerator <= 0.0) break;  // no admissible path this long
            product *= numerator /
                       static_cast<double>(l * k - cumulative_floor_half(l));
        }
        acc.add(zeta * kk /
                static_cast<double>((l + 1) * k - cumulative_floor_half(l + 1)) *
                product);
    }
    return acc.sum;
}

double expected_basin_finite_k(int k, int occupied_rows, int occupied_cols) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (occupied_rows < 0 || occupied_rows > k)
        throw std::invalid_argument("occupied row count must lie in [0, k]");
    if (occupied_cols < 0 || occupied_cols > k)
        throw std::invalid_argument("occupied column count must lie in [0, k]");
    CompensatedSum acc;
    double product = 1.0;
    for (std::int64_t l = 0; l <= 2 * static_cast<std::int64_t>(k) - 2; ++l) {
        if (l > 0) {
            // Odd steps move along a column to a fresh row, even steps along
            // a row to a fresh column; occupied lines are never re-entered.
            const std::int64_t occupied = (l % 2 == 1) ? occupied_rows : occupied_cols;
            const std::int64_t numerator = k - occupied - l / 2;
            if (numerator <= 0) break;
            product *= static_cast<double>(numerator) /
                       static_cast<double>(l * k - cumulative_floor_half(l));
        }
        acc.add(product /
                static_cast<double>((l + 1) * k - cumulative_floor_half(l + 1)));
    }
    return 1.0 + static_cast<double>(k - occupied_cols) * acc.sum;
}

Rational path_sum_series_exact(int k, const Rational& zeta) {
    if (k < 1 || k > 100) throw std::invalid_argument("exact mode supports 1 <= k <= 100");
    if (!(zeta > 0)) throw std::invalid_argument("zeta must be > 0");
    Rational acc = 0;
    Rational product = 1;
    const Rational zk = zeta * k;
    for (std::int64_t l = 0; l <= 2 * static_cast<std::int64_t>(k) - 2; ++l) {
        if (l > 0) {
            const Rational numerator = zk - (l / 2);
            if (numerator <= 0) break;
            product *= numerator / (l * k - cumulative_floor_half(l));
        }
        acc += zk / ((l + 1) * k - cumulative_floor_half(l + 1)) * product;
    }
    return acc;
}

Rational expected_basin_finite_k_exact(int k, int occupied_rows, int occupied_cols) {
    if (k < 1 || k > 100) throw std::invalid_argument("exact mode supports 1 <= k <= 100");
    if (occupied_rows < 0 || occupied_rows > k)
        throw std::invalid_argument("occupied row count must lie in [0, k]");
    if (occupied_cols < 0 || occupied_cols > k)
        throw std::invalid_argument("occupied column count must lie in [0, k]");
    Rational acc = 0;
    Rational product = 1;
    for (std::int64_t l = 0; l <= 2 * static_cast<std::int64_t>(k) - 2; ++l) {
        if (l > 0) {
            const std::int64_t occupied = (l % 2 == 1) ? occupied_rows : occupied_cols;
            const std::int64_t numerator = k - occupied - l / 2;
            if (numerator <= 0) break;
            product *= Rational(numerator, l * k - cumulative_floor_half(l));
        }
        acc += product / ((l + 1) * k - cumulative_floor_half(l + 1));
    }
    return 1 + Rational(k - occupied_cols) * acc;
}

int floor_epsilon_k(double epsilon, int k) {
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
    return static_cast<int>(std::floor(epsilon * k + 1e-9));
}

double harmonic(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    CompensatedSum acc;
    for (std::int64_t i = n; i >= 1; --i) acc.add(1.0 / static_cast<double>(i));
    return acc.sum;
}

double coupon_collection_mean(int k, int j) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (j < 1 || j > k) throw std::invalid_argument("j must lie in [1, k]");
    // H_K - H_{K-j}, summed directly over the tail for accuracy.
    CompensatedSum acc;
    for (std::int64_t i = k - j + 1; i <= k; ++i) acc.add(1.0 / static_cast<double>(i));
    return static_cast<double>(k) * acc.sum;
}

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_impl(const std::function<double(double)>& f, double a, double b,
                             double fa, double fm, double fb, double whole, double tol,
                             int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_impl(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    if (!(b >= a)) throw std::invalid_argument("integration bounds must satisfy a <= b");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    return adaptive_simpson_impl(f, a, b, fa, fm, fb, whole, tol, 60);
}

}  // namespace ropg
