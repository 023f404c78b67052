#include "channel.hpp"

#include "errors.hpp"
#include "numerics.hpp"

#include <cmath>

namespace mhtc::channel {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_spec(const FadingSpec& spec) {
    if (!(spec.alpha > 2.0))
        throw error(errc::domain, "channel: path loss exponent alpha must exceed 2");
    if (!(spec.beta > 0.0)) throw error(errc::domain, "channel: SIR threshold beta must be positive");
}

} // namespace

const char* tag_name(ModelTag tag) {
    switch (tag) {
    case ModelTag::rayleigh: return "rayleigh";
    case ModelTag::nakagami_low: return "nakagami_low";
    case ModelTag::nakagami_high: return "nakagami_high";
    case ModelTag::pathloss_lower: return "pathloss_lower";
    case ModelTag::pathloss_upper: return "pathloss_upper";
    }
    return "?";
}

double interference_constant(double alpha) {
    if (!(alpha > 2.0)) throw error(errc::domain, "interference_constant: alpha must exceed 2");
    const double d = 2.0 / alpha;
    return 2.0 * kPi * std::tgamma(d) * std::tgamma(1.0 - d) / alpha;
}

double nakagami_omega(int m0, double alpha) {
    if (m0 < 1) throw error(errc::domain, "nakagami_omega: integer shape m0 >= 1 required");
    if (!(alpha > 2.0)) throw error(errc::domain, "nakagami_omega: alpha must exceed 2");
    const double d = 2.0 / alpha;
    double sum = 0.0;
    for (int k = 0; k < m0; ++k) {
        const double b2 = static_cast<double>(m0 - k) - d;
        if (b2 <= 0.0) throw error(errc::domain, "nakagami_omega: Beta argument not positive");
        sum += num::binom(m0, k) * num::beta_fn(static_cast<double>(k) + d, b2);
    }
    return (2.0 * kPi / alpha) * sum;
}

double upsilon(int k, int l, double alpha) {
    const double d = 2.0 / alpha;
    std::vector<double> falls(static_cast<size_t>(k - l + 1));
    for (int i = 1; i <= k - l + 1; ++i) falls[i - 1] = num::falling_factorial(d, i);
    const double bell = num::partial_bell(k, l, falls);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * bell / std::pow(d, l);
}

HopModel rayleigh_coeffs(const FadingSpec& spec) {
    check_spec(spec);
    HopModel m;
    m.G = 1.0;
    m.K = std::pow(spec.beta, 2.0 / spec.alpha) * interference_constant(spec.alpha);
    m.tag = ModelTag::rayleigh;
    return m;
}

HopModel nakagami_coeffs(const FadingSpec& spec, NakagamiRegime regime) {
    check_spec(spec);
    if (spec.m0 < 1) throw error(errc::domain, "nakagami_coeffs: integer shape m0 >= 1 required");
    const double d = 2.0 / spec.alpha;
    HopModel m;
    m.K = nakagami_omega(spec.m0, spec.alpha) * std::pow(spec.beta, d);
    if (regime == NakagamiRegime::low_outage) {
        m.G = 1.0;
        m.tag = ModelTag::nakagami_low;
        return m;
    }
    double g = 1.0;
    double kfact = 1.0;
    for (int k = 1; k < spec.m0; ++k) {
        kfact *= static_cast<double>(k);
        double lfact = 1.0;
        for (int l = 1; l <= k; ++l) {
            lfact *= static_cast<double>(l);
            g += (lfact / kfact) * std::pow(-d, l) * upsilon(k, l, spec.alpha);
        }
    }
    m.G = g;
    m.tag = ModelTag::nakagami_high;
    return m;
}

std::pair<HopModel, HopModel> pathloss_coeff_bounds(const FadingSpec& spec) {
    check_spec(spec);
    const double base = kPi * std::pow(spec.beta, 2.0 / spec.alpha);
    HopModel lo{1.0, base, ModelTag::pathloss_lower};
    HopModel hi{1.0, spec.alpha / (spec.alpha - 1.0) * base, ModelTag::pathloss_upper};
    return {lo, hi};
}

double hop_success(const HopModel& model, double r, double lambda_t) {
    if (r < 0.0 || lambda_t < 0.0)
        throw error(errc::domain, "hop_success: distance and density must be non-negative");
    const double p = model.G * std::exp(-lambda_t * model.K * r * r);
    if (p > 1.0)
        throw error(errc::out_of_regime,
                    "hop_success: G*exp(-lambda_t*K*r^2) exceeds 1; model regime does not apply");
    return p;
}

} // namespace mhtc::channel
