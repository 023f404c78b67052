#include <doctest.h>

#include "analytics.hpp"
#include "errors.hpp"
#include "oracle.hpp"

#include <cmath>
#include <limits>

using namespace mhtc;
using analytics::NetworkConfig;
using analytics::RetransPolicy;
using oracle::QuadratureSpec;

namespace {

NetworkConfig base_cfg() {
    NetworkConfig cfg;
    cfg.lambda = 0.1;
    cfg.gamma = 0.5;
    cfg.R = 4.0;
    cfg.m = 1;
    cfg.Dm = std::numeric_limits<double>::infinity();
    cfg.hop = {1.0, M_PI, channel::ModelTag::pathloss_lower};
    return cfg;
}

} // namespace

TEST_CASE("tensor-grid quadrature matches the closed form at m = 1") {
    NetworkConfig cfg = base_cfg();
    QuadratureSpec spec;
    spec.resolution = 600;

    auto res = oracle::quadrature_expected_relay_sets(cfg, spec);
    CHECK(res.value ==
          doctest::Approx(analytics::expected_relay_sets_unbounded(cfg)).epsilon(1e-8));
    CHECK(res.refinement_delta < 1e-6 * res.value);

    cfg.Dm = 16.0;
    res = oracle::quadrature_expected_relay_sets(cfg, spec);
    CHECK(res.value == doctest::Approx(analytics::expected_relay_sets(cfg)).epsilon(1e-8));

    // no relays, no routes
    NetworkConfig none = cfg;
    none.gamma = 1.0 - 1e-12;
    CHECK(oracle::quadrature_expected_relay_sets(none, spec).value <
          1e-10 * analytics::expected_relay_sets(cfg));
}

TEST_CASE("Gaussian importance sampling matches the closed form at m = 2 and 3") {
    QuadratureSpec mc;
    mc.scheme = QuadratureSpec::Scheme::monte_carlo;
    mc.samples = 400000;
    mc.seed = 5;
    for (int m : {2, 3}) {
        NetworkConfig cfg = base_cfg();
        cfg.m = m;
        cfg.Dm = 12.0 * m;
        const auto res = oracle::quadrature_expected_relay_sets(cfg, mc);
        const double truth = analytics::expected_relay_sets(cfg);
        CHECK(std::fabs(res.value - truth) <= 3.5 * res.std_error + 1e-12);
    }
}

TEST_CASE("retransmission quadrature at m = 1 is self-consistent") {
    NetworkConfig cfg = base_cfg();
    QuadratureSpec spec;
    spec.resolution = 400;
    const auto be = oracle::mc_integration_expected_relay_sets(
        cfg, RetransPolicy::best_effort({1, 1}), spec);
    CHECK(be.value ==
          doctest::Approx(analytics::expected_relay_sets_unbounded(cfg)).epsilon(1e-7));
    CHECK(be.refinement_delta < 1e-5 * be.value);
}

TEST_CASE("per-set retransmission success probabilities") {
    CHECK(oracle::success_prob_retrans_bruteforce({0.5, 0.5}, RetransPolicy::best_effort({2, 2})) ==
          doctest::Approx(0.5625).epsilon(1e-15));
    CHECK(oracle::success_prob_retrans_bruteforce({0.5, 0.5}, RetransPolicy::total_budget(2)) ==
          doctest::Approx(0.25).epsilon(1e-15));
    CHECK(oracle::success_prob_retrans_bruteforce({0.5, 0.5}, RetransPolicy::total_budget(3)) ==
          doctest::Approx(0.5).epsilon(1e-15));
    // single-attempt fallback is the plain product
    CHECK(oracle::success_prob_retrans_bruteforce({0.25, 0.5}, RetransPolicy::single()) ==
          doctest::Approx(0.125).epsilon(1e-15));
    CHECK_THROWS_AS(
        oracle::success_prob_retrans_bruteforce({1.5}, RetransPolicy::total_budget(2)), error);
}

TEST_CASE("numeric Laplace derivatives validate the closed form") {
    // k = 0 is the function itself
    CHECK(oracle::numeric_laplace_derivative(2, 4.0, 1.3, 0) ==
          doctest::Approx(oracle::closed_form_laplace_derivative(2, 4.0, 1.3, 0))
              .epsilon(1e-14));
    struct Case {
        int m0;
        double alpha;
        double s;
        int k;
    };
    for (const Case c : {Case{2, 4.0, 1.0, 1}, Case{2, 3.0, 0.7, 1}, Case{3, 3.0, 2.0, 2},
                         Case{3, 4.0, 1.5, 2}, Case{4, 3.5, 1.2, 3}}) {
        const double numeric = oracle::numeric_laplace_derivative(c.m0, c.alpha, c.s, c.k);
        const double closed = oracle::closed_form_laplace_derivative(c.m0, c.alpha, c.s, c.k);
        CHECK(std::fabs(numeric - closed) <=
              1e-8 * std::max(1.0, std::fabs(closed)));
    }
    CHECK_THROWS_AS(oracle::numeric_laplace_derivative(2, 4.0, -1.0, 1), error);
}

TEST_CASE("derivative linearity under constant scaling") {
    // Scaling L by c scales every derivative by c; probe via the closed form
    // assembled at two different prefactors through the numeric pipeline.
    const double d1 = oracle::numeric_laplace_derivative(2, 4.0, 1.0, 1);
    // numeric_laplace_derivative fixes the unit-density L; linearity is
    // checked on the finite-difference operator itself.
    auto central_scaled = [&](double scale) {
        // same stencil applied to scale * L via closed form values
        const double h = 1e-3;
        double acc = 0.0;
        for (int i = 0; i <= 1; ++i) {
            const double node = 1.0 + (0.5 - i) * h;
            const double f = scale * oracle::closed_form_laplace_derivative(2, 4.0, node, 0);
            acc += (i % 2 ? -f : f);
        }
        return acc / h;
    };
    CHECK(central_scaled(3.0) == doctest::Approx(3.0 * central_scaled(1.0)).epsilon(1e-10));
    CHECK(central_scaled(1.0) == doctest::Approx(d1).epsilon(1e-4));
}
