#pragma once

// Independent brute-force references: numeric quadrature of expected route
// counts, exhaustive retransmission-schedule evaluation, and numeric Laplace
// transform derivatives. These arbitrate every closed form in `analytics`
// and never share a code path with it.

#include "analytics.hpp"

#include <cstdint>
#include <vector>

namespace mhtc::oracle {

struct QuadratureSpec {
    enum class Scheme { tensor_grid, monte_carlo };
    Scheme scheme = Scheme::tensor_grid;
    int resolution = 1000;        // points per axis (tensor) or 0 (use samples)
    uint64_t samples = 10'000'000; // monte_carlo sample count
    uint64_t seed = 1;
    double truncation_exponent = 35.0; // integrate until Lambda*d_m reaches this
};

struct QuadratureResult {
    double value = 0.0;
    double refinement_delta = 0.0; // |value - half-resolution value| (tensor)
    double std_error = 0.0;        // monte_carlo standard error
};

// integral over {d_m(Z) <= Dm} of (lambda(1-gamma))^m G^{m+1} exp(-Lambda d_m).
// tensor_grid: m = 1, polar Simpson grid around the S-D midpoint.
// monte_carlo: m <= 4, importance sampling from the Gaussian matched to
// exp(-Lambda d_m) (exact weights; the MC part estimates the Dm truncation).
QuadratureResult quadrature_expected_relay_sets(const analytics::NetworkConfig& cfg,
                                                const QuadratureSpec& spec);

// m = 1 brute-force count for a retransmission policy: 2-D tensor quadrature
// of lambda~ * w(p1(z), p2(z)) with the per-set success weight taken from
// success_prob_retrans_bruteforce.
QuadratureResult mc_integration_expected_relay_sets(const analytics::NetworkConfig& cfg,
                                                    const analytics::RetransPolicy& policy,
                                                    const QuadratureSpec& spec);

// Ground-truth per-set success probabilities.
// best_effort: prod_i [1 - (1-p_i)^{k_i}].
// total_budget: probability the hops complete in order within M slots, by a
// forward DP over (slot, completed hops).
double success_prob_retrans_bruteforce(const std::vector<double>& p,
                                       const analytics::RetransPolicy& policy);

// k-th derivative of L(s) = exp(-Omega_{m0} (s/m0)^{2/alpha}) (unit density)
// by iterated central differences with Richardson extrapolation; throws
// errc::numeric if the table does not settle to 1e-8.
double numeric_laplace_derivative(int m0, double alpha, double s, int k);

// The closed form of the same derivative assembled from the Y_{k,l}
// coefficients; what the numeric route validates.
double closed_form_laplace_derivative(int m0, double alpha, double s, int k);

} // namespace mhtc::oracle
