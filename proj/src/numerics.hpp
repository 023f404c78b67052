#pragma once

#include <cstdint>
#include <vector>

namespace mhtc::num {

double binom(int n, int k);
double log_beta(double a, double b);
// B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b), a,b > 0.
double beta_fn(double a, double b);

// Regularized lower incomplete gamma P(m, u) for integer order m >= 1.
// Series branch below u < m+1, finite complement sum above; the two agree to
// ~1e-15 at the switch.
double reg_lower_gamma_int(int m, double u);

// Partial Bell polynomial B_{k,j}(x1, ..., x_{k-j+1}) over a fixed argument
// sequence, via the standard recurrence
//   B_{k,j} = sum_i C(k-1, i-1) x_i B_{k-i, j-1}.
double partial_bell(int k, int j, const std::vector<double>& x);

// delta*(delta-1)*...*(delta-i+1)
double falling_factorial(double delta, int i);

uint64_t factorial_u64(int n);

} // namespace mhtc::num
