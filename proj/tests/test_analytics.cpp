#include <doctest.h>

#include "analytics.hpp"
#include "errors.hpp"
#include "oracle.hpp"
#include "rng.hpp"

#include <cmath>
#include <limits>

using namespace mhtc;
using analytics::NetworkConfig;
using analytics::RetransPolicy;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// G=1, K=pi reference scenario from the worked examples.
NetworkConfig base_cfg() {
    NetworkConfig cfg;
    cfg.lambda = 0.1;
    cfg.gamma = 0.5;
    cfg.R = 4.0;
    cfg.m = 1;
    cfg.Dm = kInf;
    cfg.hop = {1.0, M_PI, channel::ModelTag::pathloss_lower};
    cfg.policy = RetransPolicy::single();
    return cfg;
}

} // namespace

TEST_CASE("expected relay sets, bounded and unbounded") {
    NetworkConfig cfg = base_cfg();
    cfg.Dm = 16.0;
    // kappa = 1, Lambda = 0.05 pi: 0.5 (e^{-0.4pi} - e^{-0.8pi})
    const double expect16 = 0.5 * (std::exp(-0.4 * M_PI) - std::exp(-0.8 * M_PI));
    CHECK(analytics::expected_relay_sets(cfg) == doctest::Approx(expect16).epsilon(1e-12));

    cfg.Dm = kInf;
    CHECK(analytics::expected_relay_sets_unbounded(cfg) ==
          doctest::Approx(0.5 * std::exp(-0.4 * M_PI)).epsilon(1e-12));
    CHECK(analytics::expected_relay_sets(cfg) ==
          doctest::Approx(analytics::expected_relay_sets_unbounded(cfg)).epsilon(1e-15));

    cfg.m = 2;
    CHECK(analytics::expected_relay_sets_unbounded(cfg) ==
          doctest::Approx(std::exp(-0.05 * M_PI * 16.0 / 3.0) / 3.0).epsilon(1e-12));

    // R -> 0 leaves G kappa^m/(m+1)
    cfg.m = 1;
    cfg.R = 1e-9;
    CHECK(analytics::expected_relay_sets_unbounded(cfg) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("expected relay sets edge behavior near the budget floor") {
    NetworkConfig cfg = base_cfg();
    cfg.Dm = 8.0 * (1.0 + 1e-9); // just above R^2/(m+1)
    CHECK(analytics::expected_relay_sets(cfg) < 1e-9);
    cfg.Dm = 8.0;
    CHECK_THROWS_AS(analytics::expected_relay_sets(cfg), error);

    // low-density expansion: E ~ lambda (G kappa^m/(m+1)) gamma K (D - R^2/2)
    cfg.Dm = 16.0;
    cfg.lambda = 1e-7;
    const double predicted =
        cfg.lambda * 0.5 * cfg.gamma * cfg.hop.K * (cfg.Dm - 8.0);
    CHECK(analytics::expected_relay_sets(cfg) == doctest::Approx(predicted).epsilon(1e-4));
}

TEST_CASE("expected count grows with the budget and converges") {
    NetworkConfig cfg = base_cfg();
    const double unb = analytics::expected_relay_sets_unbounded(cfg);
    double prev = 0.0;
    for (double D : {9.0, 12.0, 16.0, 24.0, 40.0, 80.0, 200.0}) {
        cfg.Dm = D;
        const double e = analytics::expected_relay_sets(cfg);
        CHECK(e > prev);
        CHECK(e < unb);
        prev = e;
    }
    cfg.Dm = 400.0;
    CHECK(analytics::expected_relay_sets(cfg) == doctest::Approx(unb).epsilon(1e-12));
}

TEST_CASE("retransmission counts reduce to the single-attempt count") {
    for (int m : {1, 2, 3}) {
        NetworkConfig cfg = base_cfg();
        cfg.m = m;
        cfg.gamma = 0.3;
        const double unb = analytics::expected_relay_sets_unbounded(cfg);
        geom::AttemptVector ones(static_cast<size_t>(m + 1), 1);
        CHECK(std::fabs(analytics::expected_relay_sets_best_effort(cfg, ones) - unb) <=
              1e-12 * unb);
        CHECK(std::fabs(analytics::expected_relay_sets_total_budget(cfg, m + 1) - unb) <=
              1e-12 * unb);
    }
}

TEST_CASE("more attempts can only help") {
    NetworkConfig cfg = base_cfg();
    CHECK(analytics::expected_relay_sets_best_effort(cfg, {2, 2}) >
          analytics::expected_relay_sets_best_effort(cfg, {1, 1}));
    CHECK(analytics::expected_relay_sets_total_budget(cfg, 3) >=
          analytics::expected_relay_sets_total_budget(cfg, 2) - 1e-12);
    CHECK(analytics::expected_relay_sets_total_budget(cfg, 4) >=
          analytics::expected_relay_sets_total_budget(cfg, 3) - 1e-12);
}

TEST_CASE("outage lower bound") {
    CHECK(analytics::outage_lower_bound(0.0) == 1.0);
    CHECK(analytics::outage_lower_bound(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
    NetworkConfig cfg = base_cfg();
    CHECK(analytics::outage_lower_bound(analytics::expected_relay_sets_unbounded(cfg)) ==
          doctest::Approx(std::exp(-0.5 * std::exp(-0.4 * M_PI))).epsilon(1e-13));
    CHECK_THROWS_AS(analytics::outage_lower_bound(-0.1), error);
}

TEST_CASE("capacity upper bound, single attempt") {
    NetworkConfig cfg = base_cfg();
    cfg.gamma = 0.05;
    cfg.m = 2;
    const auto cap = analytics::tc_upper_bound(cfg, 0.05);
    CHECK(cap.valid);
    const double expect = (2.0 * std::log(19.0) - std::log(3.0) - std::log(std::log(20.0))) *
                          0.95 / (16.0 * M_PI);
    CHECK(cap.value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(cap.subslots == 3);
    CHECK(cap.lambda_active == doctest::Approx(cap.value * 3.0 / 0.95).epsilon(1e-12));

    // kappa = 1 pushes the floor to exp(-1/3); epsilon below it is invalid
    NetworkConfig k1 = base_cfg();
    k1.m = 2;
    const auto bad = analytics::tc_upper_bound(k1, 0.05);
    CHECK_FALSE(bad.valid);
    CHECK(bad.epsilon_floor == doctest::Approx(std::exp(-1.0 / 3.0)).epsilon(1e-12));

    // round trip: the implied density reproduces epsilon through the bound
    NetworkConfig rt = base_cfg();
    rt.gamma = 0.1;
    rt.m = 3;
    const double eps = 0.2;
    const auto cap2 = analytics::tc_upper_bound(rt, eps);
    REQUIRE(cap2.valid);
    rt.lambda = cap2.lambda_raw;
    CHECK(analytics::outage_lower_bound(analytics::expected_relay_sets_unbounded(rt)) ==
          doctest::Approx(eps).epsilon(1e-10));
}

TEST_CASE("capacity bound grows by ln kappa + ln((m+1)/(m+2)) per added relay") {
    NetworkConfig cfg = base_cfg();
    cfg.gamma = 0.05;
    const double eps = 0.05;
    for (int m = 1; m <= 4; ++m) {
        cfg.m = m;
        const auto a = analytics::tc_upper_bound(cfg, eps);
        cfg.m = m + 1;
        const auto b = analytics::tc_upper_bound(cfg, eps);
        REQUIRE(a.valid);
        REQUIRE(b.valid);
        const double predicted =
            (std::log(cfg.kappa()) + std::log((m + 1.0) / (m + 2.0))) * (1.0 - eps) /
            (cfg.hop.K * cfg.R * cfg.R);
        CHECK(b.value - a.value == doctest::Approx(predicted).epsilon(1e-12));
    }
}

TEST_CASE("epsilon sensitivity enters only through ln ln and the (1-eps) factor") {
    NetworkConfig cfg = base_cfg();
    cfg.gamma = 0.05;
    cfg.m = 2;
    const double A = 2.0 * std::log(cfg.kappa()) - std::log(3.0);
    const double kr2 = cfg.hop.K * cfg.R * cfg.R;
    const auto hi = analytics::tc_upper_bound(cfg, 1e-2);
    const auto lo = analytics::tc_upper_bound(cfg, 1e-4);
    REQUIRE(hi.valid);
    REQUIRE(lo.valid);
    const double predicted = 0.99 * (A - std::log(std::log(1e2))) / kr2 -
                             0.9999 * (A - std::log(std::log(1e4))) / kr2;
    CHECK(hi.value - lo.value == doctest::Approx(predicted).epsilon(1e-12));
}

TEST_CASE("best-effort capacity bound: reduction, positivity, round trip") {
    NetworkConfig cfg = base_cfg();
    cfg.gamma = 0.05;
    cfg.m = 1;
    const double eps = 0.1;
    const auto single = analytics::tc_upper_bound(cfg, eps);
    const auto ones = analytics::tc_upper_bound_best_effort(cfg, eps, {1, 1});
    REQUIRE(single.valid);
    REQUIRE(ones.valid);
    CHECK(ones.value == doctest::Approx(single.value).epsilon(1e-10));
    CHECK(ones.lambda_raw == doctest::Approx(single.lambda_raw).epsilon(1e-10));

    const auto be = analytics::tc_upper_bound_best_effort(cfg, eps, {2, 2});
    REQUIRE(be.valid);
    CHECK(be.value > 0.0);
    CHECK(be.subslots == 4);
    // round trip through the corrected expected count
    NetworkConfig at = cfg;
    at.lambda = be.lambda_raw;
    CHECK(analytics::outage_lower_bound(analytics::expected_relay_sets_best_effort(at, {2, 2})) ==
          doctest::Approx(eps).epsilon(1e-6));

    // the floor rejects epsilon below exp(-E_k(0+))
    const double floor =
        std::exp(-analytics::best_effort_mixture(cfg, {2, 2}).limit_at_zero());
    const auto invalid = analytics::tc_upper_bound_best_effort(cfg, floor * 0.9, {2, 2});
    CHECK_FALSE(invalid.valid);
    CHECK(invalid.epsilon_floor == doctest::Approx(floor).epsilon(1e-12));
}

TEST_CASE("total-budget capacity bound reduces at M = m+1 and round trips") {
    NetworkConfig cfg = base_cfg();
    cfg.gamma = 0.08;
    cfg.m = 1;
    const double eps = 0.15;
    const auto single = analytics::tc_upper_bound(cfg, eps);
    const auto tb = analytics::tc_upper_bound_total_budget(cfg, eps, 2);
    REQUIRE(single.valid);
    REQUIRE(tb.valid);
    CHECK(tb.value == doctest::Approx(single.value).epsilon(1e-10));

    const auto tb3 = analytics::tc_upper_bound_total_budget(cfg, eps, 3);
    REQUIRE(tb3.valid);
    NetworkConfig at = cfg;
    at.lambda = tb3.lambda_raw;
    CHECK(analytics::outage_lower_bound(analytics::expected_relay_sets_total_budget(at, 3)) ==
          doctest::Approx(eps).epsilon(1e-6));
}

TEST_CASE("critical density and the min-outage bound") {
    NetworkConfig cfg = base_cfg();
    cfg.Dm = 16.0;
    const auto crit = analytics::critical_density(cfg);
    CHECK(crit.lambda0 == doctest::Approx(std::log(2.0) / (4.0 * M_PI)).epsilon(1e-12));

    // Delta = 1/2: bound exp{(G kappa/2)(Delta^2 - Delta)} = exp(-1/8)
    CHECK(crit.min_outage_bound == doctest::Approx(std::exp(-0.125)).epsilon(1e-12));

    // Dm -> infinity pushes lambda0 to 0
    cfg.Dm = 1e9;
    CHECK(analytics::critical_density(cfg).lambda0 < 1e-7);

    // outage bound falls on (0, lambda0] and rises on [lambda0, inf) at m = 1
    cfg.Dm = 16.0;
    auto outage = [&](double lam) {
        NetworkConfig c = cfg;
        c.lambda = lam;
        return analytics::outage_lower_bound(analytics::expected_relay_sets(c));
    };
    const double l0 = crit.lambda0;
    double prev = outage(l0 / 1000.0);
    for (int i = 1; i <= 1000; ++i) {
        const double cur = outage(l0 * i / 1000.0);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
    prev = outage(l0);
    for (int i = 1; i <= 1000; ++i) {
        const double cur = outage(l0 * (1.0 + 9.0 * i / 1000.0));
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
    CHECK(outage(l0) == doctest::Approx(crit.min_outage_bound).epsilon(1e-12));
}

TEST_CASE("max density inversion") {
    NetworkConfig cfg = base_cfg();
    cfg.gamma = 0.1;
    cfg.m = 2;

    // unbounded: bisection equals the closed form
    const double eps = 0.3;
    const double closed = analytics::max_density_closed_form(cfg, eps);
    const double bisected = analytics::max_density_for_outage(cfg, eps);
    CHECK(bisected == doctest::Approx(closed).epsilon(1e-8));

    // finite budget: unachievable epsilon is rejected
    cfg.Dm = 18.0;
    const double floor = analytics::critical_density(cfg).min_outage_bound;
    CHECK_THROWS_AS(analytics::max_density_for_outage(cfg, floor * 0.5), error);

    // achievable epsilon inverts to a density whose outage bound is epsilon
    const double target = std::min(0.9, floor * 1.5);
    const double lam = analytics::max_density_for_outage(cfg, target);
    NetworkConfig at = cfg;
    at.lambda = lam;
    CHECK(analytics::outage_lower_bound(analytics::expected_relay_sets(at)) ==
          doctest::Approx(target).epsilon(1e-9));

    // larger budgets admit more density at the same target
    NetworkConfig wide = cfg;
    wide.Dm = 100.0;
    CHECK(analytics::max_density_for_outage(wide, target) > lam);
}

TEST_CASE("predetermined routing capacity equals the single-hop inversion") {
    NetworkConfig cfg = base_cfg();
    const double eps = 0.05;
    const double bound = analytics::predetermined_tc_bound(cfg, eps);
    CHECK(bound == doctest::Approx(0.95 * std::log(1.0 / 0.95) / (16.0 * M_PI)).epsilon(1e-12));
    // identity: lambda_t solving 1 - G exp(-lambda_t K R^2) = eps, times (1-eps)
    const double lam_t = std::log(cfg.hop.G / (1.0 - eps)) / (cfg.hop.K * cfg.R * cfg.R);
    CHECK(bound == doctest::Approx(lam_t * (1.0 - eps)).epsilon(1e-13));
    // G = 1 forces the bound to 0 as eps -> 0
    CHECK(analytics::predetermined_tc_bound(cfg, 1e-12) < 1e-12);
    // G/(1-eps) <= 1 leaves the domain
    NetworkConfig g07 = cfg;
    g07.hop.G = 0.7;
    CHECK_THROWS_AS(analytics::predetermined_tc_bound(g07, 0.1), error);
}

TEST_CASE("schedule success: inclusion-exclusion equals the DP oracle") {
    CHECK(analytics::schedule_success_inclusion_exclusion({0.5, 0.5}, 2) ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK(analytics::schedule_success_inclusion_exclusion({0.5, 0.5}, 3) ==
          doctest::Approx(0.5).epsilon(1e-14));
    rng::Xoshiro256pp gen(31);
    for (int it = 0; it < 300; ++it) {
        const int hops = 1 + static_cast<int>(gen.next() % 4); // m <= 3
        const int M = hops + static_cast<int>(gen.next() % (9 - hops));
        std::vector<double> p;
        for (int i = 0; i < hops; ++i) p.push_back(gen.uniform());
        const double dp =
            oracle::success_prob_retrans_bruteforce(p, RetransPolicy::total_budget(M));
        const double ie = analytics::schedule_success_inclusion_exclusion(p, M);
        CHECK(std::fabs(dp - ie) <= 1e-10);
    }
}

TEST_CASE("best-effort expansion equals the product form") {
    CHECK(analytics::best_effort_success_expansion({0.5, 0.5}, {2, 2}) ==
          doctest::Approx(0.5625).epsilon(1e-14));
    rng::Xoshiro256pp gen(37);
    for (int it = 0; it < 300; ++it) {
        const int hops = 1 + static_cast<int>(gen.next() % 4);
        std::vector<double> p;
        geom::AttemptVector k;
        for (int i = 0; i < hops; ++i) {
            p.push_back(gen.uniform());
            k.push_back(1 + static_cast<int>(gen.next() % 4));
        }
        const double direct = oracle::success_prob_retrans_bruteforce(
            p, RetransPolicy::best_effort(k));
        CHECK(std::fabs(analytics::best_effort_success_expansion(p, k) - direct) <= 1e-12);
    }
}

TEST_CASE("config validation") {
    NetworkConfig cfg = base_cfg();
    cfg.validate();
    NetworkConfig bad = cfg;
    bad.lambda = 0.0;
    CHECK_THROWS_AS(bad.validate(), error);
    bad = cfg;
    bad.gamma = 1.0;
    CHECK_THROWS_AS(bad.validate(), error);
    bad = cfg;
    bad.Dm = 7.0; // below R^2/(m+1)
    CHECK_THROWS_AS(bad.validate(), error);
    bad = cfg;
    bad.policy = RetransPolicy::best_effort({1, 1, 1}); // wrong length for m = 1
    CHECK_THROWS_AS(bad.validate(), error);
    bad = cfg;
    bad.policy = RetransPolicy::total_budget(1); // below m+1
    CHECK_THROWS_AS(bad.validate(), error);
    CHECK(cfg.subslots() == 2);
    bad = cfg;
    bad.policy = RetransPolicy::best_effort({2, 3});
    CHECK(bad.subslots() == 5);
    bad.policy = RetransPolicy::total_budget(6);
    CHECK(bad.subslots() == 6);
}
