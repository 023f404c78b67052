#include "numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace mhtc::num {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k == 0 || k == n) return 1.0;
    // Exact in double for every (n, k) this project touches (n <= ~40).
    double r = 1.0;
    if (k > n - k) k = n - k;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double beta_fn(double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw std::domain_error("beta_fn: arguments must be positive");
    return std::exp(log_beta(a, b));
}

double reg_lower_gamma_int(int m, double u) {
    if (m < 1) throw std::domain_error("reg_lower_gamma_int: order must be >= 1");
    if (u <= 0.0) return 0.0;
    if (u < static_cast<double>(m) + 1.0) {
        // gamma(m,u) = u^m e^-u sum_{n>=0} u^n / (m(m+1)...(m+n))
        double term = 1.0 / static_cast<double>(m);
        double sum = term;
        for (int n = 1; n < 1000; ++n) {
            term *= u / static_cast<double>(m + n);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(m * std::log(u) - u - std::lgamma(static_cast<double>(m)));
    }
    // Q(m,u) = e^-u sum_{i<m} u^i/i!
    double term = 1.0;
    double q = 1.0;
    for (int i = 1; i < m; ++i) {
        term *= u / static_cast<double>(i);
        q += term;
    }
    return 1.0 - q * std::exp(-u);
}

double partial_bell(int k, int j, const std::vector<double>& x) {
    if (k == 0 && j == 0) return 1.0;
    if (k <= 0 || j <= 0 || j > k) return 0.0;
    // table[a][b] = B_{a,b}
    std::vector<std::vector<double>> t(k + 1, std::vector<double>(j + 1, 0.0));
    t[0][0] = 1.0;
    for (int a = 1; a <= k; ++a) {
        for (int b = 1; b <= j && b <= a; ++b) {
            double s = 0.0;
            for (int i = 1; i <= a - b + 1; ++i) {
                if (static_cast<size_t>(i) > x.size()) break;
                s += binom(a - 1, i - 1) * x[i - 1] * t[a - i][b - 1];
            }
            t[a][b] = s;
        }
    }
    return t[k][j];
}

double falling_factorial(double delta, int i) {
    double r = 1.0;
    for (int n = 0; n < i; ++n) r *= delta - static_cast<double>(n);
    return r;
}

uint64_t factorial_u64(int n) {
    uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<uint64_t>(i);
    return r;
}

} // namespace mhtc::num
