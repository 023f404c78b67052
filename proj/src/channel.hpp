#pragma once

// Per-hop success coefficients. Every supported channel model reduces the
// single-hop success probability to the exponential form
//     g0(r, lambda_t) = G * exp(-lambda_t * K * r^2)
// with model-dependent constants (G, K).

#include <string>
#include <utility>

namespace mhtc::channel {

enum class ModelTag {
    rayleigh,
    nakagami_low,
    nakagami_high,
    pathloss_lower,
    pathloss_upper,
};

const char* tag_name(ModelTag tag);

struct HopModel {
    double G = 1.0; // dimensionless prefactor, > 0
    double K = 0.0; // area-scale coefficient multiplying lambda_t * r^2, > 0
    ModelTag tag = ModelTag::rayleigh;
};

struct FadingSpec {
    double alpha = 3.0; // path loss exponent, > 2
    double beta = 1.0;  // SIR threshold, > 0
    int m0 = 1;         // Nakagami shape, integer >= 1 (ignored otherwise)
};

enum class NakagamiRegime { low_outage, high_outage };

// C(alpha) = 2*pi*Gamma(2/alpha)*Gamma(1-2/alpha)/alpha
double interference_constant(double alpha);

// Omega_{m0} = (2*pi/alpha) * sum_{k<m0} C(m0,k) B(k+2/alpha, m0-k-2/alpha)
double nakagami_omega(int m0, double alpha);

// Coefficient Y_{k,l} in the closed form of the k-th derivative of the
// shot-noise Laplace transform L(s) = exp(-c s^(2/alpha)):
//     L^(k)(s) = L(s)/(-s)^k * sum_l [(-2/alpha) c s^(2/alpha)]^l * Y_{k,l}.
// Reconstructed as (-1)^k B_{k,l}(d_1, d_2, ...)/delta^l with d_i the falling
// factorials of delta = 2/alpha; the displayed L^(k) pins the normalization
// and the numeric oracle validates every (k,l) used.
double upsilon(int k, int l, double alpha);

HopModel rayleigh_coeffs(const FadingSpec& spec);
HopModel nakagami_coeffs(const FadingSpec& spec, NakagamiRegime regime);
std::pair<HopModel, HopModel> pathloss_coeff_bounds(const FadingSpec& spec);

// G*exp(-lambda_t*K*r^2); throws errc::out_of_regime when the value exceeds 1
// (possible for the high-outage Nakagami prefactor at small lambda_t*r^2).
double hop_success(const HopModel& model, double r, double lambda_t);

} // namespace mhtc::channel
