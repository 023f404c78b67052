#include "analytics.hpp"

#include "errors.hpp"
#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace mhtc::analytics {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, errc code, const char* msg) {
    if (!ok) throw error(code, msg);
}

// Enumerate integer vectors v of given length with v_i >= 1 and sum <= cap.
template <typename F>
void for_each_vector(int length, int cap, F&& visit) {
    std::vector<int> v(static_cast<size_t>(length), 1);
    std::function<void(int, int)> rec = [&](int pos, int used) {
        if (pos == length) {
            visit(v);
            return;
        }
        const int remaining_min = length - pos - 1; // later entries need >= 1 each
        for (int val = 1; used + val + remaining_min <= cap; ++val) {
            v[static_cast<size_t>(pos)] = val;
            rec(pos + 1, used + val);
        }
    };
    if (length >= 1 && cap >= length) rec(0, 0);
}

// Enumerate n with 1 <= n_i <= k_i componentwise.
template <typename F>
void for_each_box(const geom::AttemptVector& k, F&& visit) {
    std::vector<int> n(k.size(), 1);
    std::function<void(size_t)> rec = [&](size_t pos) {
        if (pos == k.size()) {
            visit(n);
            return;
        }
        for (int val = 1; val <= k[pos]; ++val) {
            n[pos] = val;
            rec(pos + 1);
        }
    };
    rec(0);
}

double bisect_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    require(flo <= target && target <= fhi, errc::numeric, "bisect: target not bracketed");
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // bracket exhausted in double precision
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

RetransPolicy RetransPolicy::best_effort(geom::AttemptVector attempts) {
    RetransPolicy p;
    p.kind = Kind::best_effort;
    p.k = std::move(attempts);
    return p;
}

RetransPolicy RetransPolicy::total_budget(int M) {
    RetransPolicy p;
    p.kind = Kind::total_budget;
    p.M = M;
    return p;
}

const char* RetransPolicy::name() const {
    switch (kind) {
    case Kind::single_attempt: return "single";
    case Kind::best_effort: return "best_effort";
    case Kind::total_budget: return "total_budget";
    }
    return "?";
}

double NetworkConfig::kappa() const {
    return hop.G * kPi * (1.0 - gamma) / (gamma * hop.K);
}

int NetworkConfig::subslots() const {
    switch (policy.kind) {
    case RetransPolicy::Kind::single_attempt: return m + 1;
    case RetransPolicy::Kind::best_effort: {
        int s = 0;
        for (int v : policy.k) s += v;
        return s;
    }
    case RetransPolicy::Kind::total_budget: return policy.M;
    }
    return m + 1;
}

void NetworkConfig::validate() const {
    require(lambda > 0.0, errc::config, "config: lambda must be positive");
    require(gamma > 0.0 && gamma < 1.0, errc::config, "config: gamma must lie in (0,1)");
    require(R > 0.0, errc::config, "config: R must be positive");
    require(m >= 0, errc::config, "config: relay count m must be >= 0");
    require(hop.G > 0.0 && hop.K > 0.0, errc::config, "config: hop model coefficients must be positive");
    if (!unbounded())
        require(Dm > R * R / static_cast<double>(m + 1), errc::config,
                "config: Dm must exceed R^2/(m+1)");
    if (policy.kind == RetransPolicy::Kind::best_effort) {
        require(static_cast<int>(policy.k.size()) == m + 1, errc::config,
                "config: best-effort attempt vector needs m+1 entries");
        for (int v : policy.k) require(v >= 1, errc::config, "config: attempts must be >= 1");
    }
    if (policy.kind == RetransPolicy::Kind::total_budget)
        require(policy.M >= m + 1, errc::config, "config: total budget M must be >= m+1");
}

double expected_relay_sets_up_to(const NetworkConfig& cfg, double a) {
    require(cfg.m >= 1, errc::domain, "expected_relay_sets: m >= 1 required");
    const double lo = cfg.R * cfg.R / static_cast<double>(cfg.m + 1);
    require(a > lo, errc::domain, "expected_relay_sets: budget must exceed R^2/(m+1)");
    const double L = cfg.Lambda();
    const double c = cfg.hop.G * std::pow(cfg.kappa(), cfg.m) / static_cast<double>(cfg.m + 1);
    // E = c * exp(-Lambda R^2/(m+1)) * P(m, Lambda (a - R^2/(m+1)))
    return c * std::exp(-L * lo) * num::reg_lower_gamma_int(cfg.m, L * (a - lo));
}

double expected_relay_sets(const NetworkConfig& cfg) {
    require(cfg.policy.kind == RetransPolicy::Kind::single_attempt, errc::domain,
            "expected_relay_sets: single-attempt policy required");
    if (cfg.unbounded()) return expected_relay_sets_unbounded(cfg);
    return expected_relay_sets_up_to(cfg, cfg.Dm);
}

double expected_relay_sets_unbounded(const NetworkConfig& cfg) {
    require(cfg.m >= 1, errc::domain, "expected_relay_sets_unbounded: m >= 1 required");
    const double lo = cfg.R * cfg.R / static_cast<double>(cfg.m + 1);
    const double c = cfg.hop.G * std::pow(cfg.kappa(), cfg.m) / static_cast<double>(cfg.m + 1);
    return c * std::exp(-cfg.Lambda() * lo);
}

ExpMixture best_effort_mixture(const NetworkConfig& cfg, const geom::AttemptVector& k) {
    require(cfg.m >= 1, errc::domain, "best_effort: m >= 1 required");
    require(static_cast<int>(k.size()) == cfg.m + 1, errc::domain,
            "best_effort: attempt vector needs m+1 entries");
    for (int v : k) require(v >= 1, errc::domain, "best_effort: attempts must be >= 1");
    double states = 1.0;
    for (int v : k) states *= static_cast<double>(v);
    require(states <= 2e6, errc::domain, "best_effort: attempt box too large to enumerate");

    const double H = kPi * (1.0 - cfg.gamma) / (cfg.gamma * cfg.hop.K);
    const double Hm = std::pow(H, cfg.m);
    const double gkr2 = cfg.gamma * cfg.hop.K * cfg.R * cfg.R;
    const int mp1 = cfg.m + 1;

    ExpMixture mix;
    for_each_box(k, [&](const std::vector<int>& n) {
        int sum_n = 0;
        double prod_n = 1.0, harm = 0.0, binons = 1.0;
        for (int i = 0; i < mp1; ++i) {
            sum_n += n[static_cast<size_t>(i)];
            prod_n *= static_cast<double>(n[static_cast<size_t>(i)]);
            harm += 1.0 / static_cast<double>(n[static_cast<size_t>(i)]);
            binons *= num::binom(k[static_cast<size_t>(i)], n[static_cast<size_t>(i)]);
        }
        const double sign = ((sum_n + mp1) % 2 == 0) ? 1.0 : -1.0;
        const double coef =
            sign * Hm * std::pow(cfg.hop.G, sum_n) * binons / (prod_n * harm);
        mix.coef.push_back(coef);
        mix.rate.push_back(gkr2 / harm);
    });
    return mix;
}

ExpMixture total_budget_mixture(const NetworkConfig& cfg, int M) {
    require(cfg.m >= 1, errc::domain, "total_budget: m >= 1 required");
    require(M >= cfg.m + 1, errc::domain, "total_budget: M must be >= m+1");
    require(M <= 64, errc::domain, "total_budget: M too large");

    const double H = kPi * (1.0 - cfg.gamma) / (cfg.gamma * cfg.hop.K);
    const double Hm = std::pow(H, cfg.m);
    const double gkr2 = cfg.gamma * cfg.hop.K * cfg.R * cfg.R;
    const int mp1 = cfg.m + 1;

    ExpMixture mix;
    for_each_vector(mp1, M, [&](const std::vector<int>& k) {
        int sum_k = 0;
        double prod_k = 1.0, harm = 0.0;
        for (int v : k) {
            sum_k += v;
            prod_k *= static_cast<double>(v);
            harm += 1.0 / static_cast<double>(v);
        }
        // sum over j >= k with |j| <= M of prod C(j_l-1, k_l-1) collapses to
        // C(M, sum k) (hockey-stick over compositions).
        const double schedules = num::binom(M, sum_k);
        const double sign = ((sum_k + mp1) % 2 == 0) ? 1.0 : -1.0;
        const double w = Hm * std::pow(cfg.hop.G, sum_k) / (prod_k * harm);
        mix.coef.push_back(sign * schedules * w);
        mix.rate.push_back(gkr2 / harm);
    });
    return mix;
}

double ExpMixture::eval(double lambda) const {
    double s = 0.0;
    for (size_t i = 0; i < coef.size(); ++i) s += coef[i] * std::exp(-lambda * rate[i]);
    return s;
}

double ExpMixture::limit_at_zero() const {
    double s = 0.0;
    for (double c : coef) s += c;
    return s;
}

double expected_relay_sets_best_effort(const NetworkConfig& cfg, const geom::AttemptVector& k) {
    return best_effort_mixture(cfg, k).eval(cfg.lambda);
}

double expected_relay_sets_total_budget(const NetworkConfig& cfg, int M) {
    return total_budget_mixture(cfg, M).eval(cfg.lambda);
}

double outage_lower_bound(double expected_count) {
    require(expected_count >= 0.0, errc::domain, "outage_lower_bound: count must be >= 0");
    return std::exp(-expected_count);
}

CapacityResult tc_upper_bound(const NetworkConfig& cfg, double epsilon) {
    require(cfg.m >= 1, errc::domain, "tc_upper_bound: m >= 1 required");
    require(epsilon > 0.0 && epsilon < 1.0, errc::domain, "tc_upper_bound: epsilon in (0,1) required");
    const int mp1 = cfg.m + 1;
    const double kap = cfg.kappa();
    CapacityResult res;
    res.subslots = mp1;
    res.epsilon_floor =
        std::exp(-cfg.hop.G * std::pow(kap, cfg.m) / static_cast<double>(mp1));
    if (epsilon < res.epsilon_floor) return res; // invalid regime, floor reported
    const double kr2 = cfg.hop.K * cfg.R * cfg.R;
    const double num =
        cfg.m * std::log(kap) + std::log(cfg.hop.G) - std::log(static_cast<double>(mp1)) -
        std::log(std::log(1.0 / epsilon));
    res.value = num * (1.0 - epsilon) / kr2;
    res.lambda_active = num * static_cast<double>(mp1) / kr2;
    res.lambda_raw = res.lambda_active / cfg.gamma;
    res.valid = true;
    return res;
}

namespace {

// Shared tail of the two retransmission capacity bounds: invert the outage
// bound exp(-mix(lambda)) = epsilon on the increasing branch.
CapacityResult invert_mixture(const NetworkConfig& cfg, double epsilon, const ExpMixture& mix,
                              int subslots) {
    require(epsilon > 0.0 && epsilon < 1.0, errc::domain, "capacity: epsilon in (0,1) required");
    CapacityResult res;
    res.subslots = subslots;
    res.epsilon_floor = std::exp(-mix.limit_at_zero());
    if (epsilon <= res.epsilon_floor) return res;
    double hi = 1.0;
    while (std::exp(-mix.eval(hi)) < epsilon) {
        hi *= 2.0;
        require(hi < 1e12, errc::numeric, "capacity: bisection bracket expansion failed");
    }
    const double lam = bisect_increasing([&](double l) { return std::exp(-mix.eval(l)); },
                                         epsilon, 0.0, hi);
    res.lambda_raw = lam;
    res.lambda_active = lam * cfg.gamma;
    res.value = res.lambda_active * (1.0 - epsilon) / static_cast<double>(subslots);
    res.valid = true;
    return res;
}

} // namespace

CapacityResult tc_upper_bound_best_effort(const NetworkConfig& cfg, double epsilon,
                                          const geom::AttemptVector& k) {
    int subslots = 0;
    for (int v : k) subslots += v;
    return invert_mixture(cfg, epsilon, best_effort_mixture(cfg, k), subslots);
}

CapacityResult tc_upper_bound_total_budget(const NetworkConfig& cfg, double epsilon, int M) {
    return invert_mixture(cfg, epsilon, total_budget_mixture(cfg, M), M);
}

CriticalDensity critical_density(const NetworkConfig& cfg) {
    require(cfg.m >= 1, errc::domain, "critical_density: m >= 1 required");
    require(!cfg.unbounded(), errc::domain, "critical_density: finite Dm required");
    require(cfg.policy.kind == RetransPolicy::Kind::single_attempt, errc::domain,
            "critical_density: single-attempt policy required");
    const double lo = cfg.R * cfg.R / static_cast<double>(cfg.m + 1);
    require(cfg.Dm > lo, errc::domain, "critical_density: Dm must exceed R^2/(m+1)");
    CriticalDensity out;
    out.lambda0 = std::log(static_cast<double>(cfg.m + 1) * cfg.Dm / (cfg.R * cfg.R)) /
                  (cfg.gamma * cfg.hop.K * (cfg.Dm - lo));
    const double delta = cfg.R * cfg.R / (static_cast<double>(cfg.m + 1) * cfg.Dm);
    const double c = cfg.hop.G * std::pow(cfg.kappa(), cfg.m) / static_cast<double>(cfg.m + 1);
    out.min_outage_bound = std::exp(
        c * (std::pow(delta, 1.0 / (1.0 - delta)) - std::pow(delta, delta / (1.0 - delta))));
    return out;
}

namespace {

// Argmax of E(lambda) for the finite-Dm single-attempt count, by golden
// section. The closed-form lambda0 maximizes only the one-term bound and is
// exact just for m = 1.
double argmax_expected(const NetworkConfig& cfg) {
    auto E = [&](double lam) {
        NetworkConfig c = cfg;
        c.lambda = lam;
        return expected_relay_sets(c);
    };
    // E rises from 0, peaks once, decays to 0. Seed the bracket at the
    // closed-form lambda0 scale and expand until a decreasing segment shows.
    double hi = critical_density(cfg).lambda0;
    while (E(2.0 * hi) > E(hi)) {
        hi *= 2.0;
        require(hi < 1e12, errc::numeric, "argmax bracket expansion failed");
    }
    double lo = 1e-12, hi2 = hi * 2.0;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi2 - phi * (hi2 - lo);
    double x2 = lo + phi * (hi2 - lo);
    double f1 = E(x1), f2 = E(x2);
    for (int i = 0; i < 200 && (hi2 - lo) > 1e-14 * hi2; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi2 - lo);
            f2 = E(x2);
        } else {
            hi2 = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi2 - phi * (hi2 - lo);
            f1 = E(x1);
        }
    }
    return 0.5 * (lo + hi2);
}

} // namespace

double max_density_for_outage(const NetworkConfig& cfg, double epsilon) {
    require(cfg.m >= 1, errc::domain, "max_density_for_outage: m >= 1 required");
    require(epsilon > 0.0 && epsilon < 1.0, errc::domain,
            "max_density_for_outage: epsilon in (0,1) required");
    auto outage = [&](double lam) {
        NetworkConfig c = cfg;
        c.lambda = lam;
        return outage_lower_bound(expected_relay_sets(c));
    };
    double lo;
    if (cfg.unbounded()) {
        lo = 1e-30; // bound is increasing on all of (0, inf)
        const double floor = std::exp(
            -cfg.hop.G * std::pow(cfg.kappa(), cfg.m) / static_cast<double>(cfg.m + 1));
        require(epsilon > floor, errc::unachievable,
                "max_density_for_outage: epsilon below the achievable floor");
    } else {
        lo = argmax_expected(cfg);
        require(epsilon >= outage(lo), errc::unachievable,
                "max_density_for_outage: epsilon below the minimum of the outage bound");
    }
    double hi = std::max(2.0 * lo, 1.0);
    while (outage(hi) < epsilon) {
        hi *= 2.0;
        require(hi < 1e15, errc::numeric, "max_density_for_outage: bracket expansion failed");
    }
    return bisect_increasing(outage, epsilon, lo, hi);
}

double max_density_closed_form(const NetworkConfig& cfg, double epsilon) {
    require(cfg.m >= 1, errc::domain, "max_density_closed_form: m >= 1 required");
    const int mp1 = cfg.m + 1;
    const double num = cfg.m * std::log(cfg.kappa()) + std::log(cfg.hop.G) -
                       std::log(static_cast<double>(mp1)) - std::log(std::log(1.0 / epsilon));
    require(num > 0.0, errc::unachievable, "max_density_closed_form: epsilon below the floor");
    return static_cast<double>(mp1) * num / (cfg.gamma * cfg.hop.K * cfg.R * cfg.R);
}

double predetermined_tc_bound(const NetworkConfig& cfg, double epsilon) {
    require(epsilon > 0.0 && epsilon < 1.0, errc::domain,
            "predetermined_tc_bound: epsilon in (0,1) required");
    const double ratio = cfg.hop.G / (1.0 - epsilon);
    require(ratio > 1.0, errc::domain, "predetermined_tc_bound: requires epsilon > 1 - G");
    return (1.0 - epsilon) / (cfg.hop.K * cfg.R * cfg.R) * std::log(ratio);
}

double schedule_success_inclusion_exclusion(const std::vector<double>& p, int M) {
    const int hops = static_cast<int>(p.size());
    require(hops >= 1, errc::domain, "schedule_success: at least one hop");
    require(M >= hops, errc::domain, "schedule_success: M must be >= hop count");
    require(M <= 64, errc::domain, "schedule_success: M too large");
    double total = 0.0;
    for_each_vector(hops, M, [&](const std::vector<int>& k) {
        int sum_k = 0;
        double pw = 1.0;
        for (int i = 0; i < hops; ++i) {
            sum_k += k[static_cast<size_t>(i)];
            pw *= std::pow(p[static_cast<size_t>(i)], k[static_cast<size_t>(i)]);
        }
        const double sign = ((sum_k + hops) % 2 == 0) ? 1.0 : -1.0;
        total += sign * num::binom(M, sum_k) * pw;
    });
    return total;
}

double best_effort_success_expansion(const std::vector<double>& p, const geom::AttemptVector& k) {
    require(p.size() == k.size(), errc::domain, "best_effort_success: size mismatch");
    const int hops = static_cast<int>(p.size());
    double total = 0.0;
    for_each_box(k, [&](const std::vector<int>& n) {
        int sum_n = 0;
        double term = 1.0;
        for (int i = 0; i < hops; ++i) {
            sum_n += n[static_cast<size_t>(i)];
            term *= num::binom(k[static_cast<size_t>(i)], n[static_cast<size_t>(i)]) *
                    std::pow(p[static_cast<size_t>(i)], n[static_cast<size_t>(i)]);
        }
        const double sign = ((sum_n + hops) % 2 == 0) ? 1.0 : -1.0;
        total += sign * term;
    });
    return total;
}

} // namespace mhtc::analytics
