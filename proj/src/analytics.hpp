#pragma once

// Closed-form expected route counts, outage lower bounds, capacity upper
// bounds, critical densities, and the numeric inversions between them.

#include "channel.hpp"
#include "geometry.hpp"

#include <limits>
#include <vector>

namespace mhtc::analytics {

struct RetransPolicy {
    enum class Kind { single_attempt, best_effort, total_budget };
    Kind kind = Kind::single_attempt;
    geom::AttemptVector k; // best_effort: m+1 attempt counts
    int M = 0;             // total_budget: total attempts, >= m+1

    static RetransPolicy single() { return {}; }
    static RetransPolicy best_effort(geom::AttemptVector attempts);
    static RetransPolicy total_budget(int M);
    const char* name() const;
};

struct NetworkConfig {
    double lambda = 0.1;  // node density
    double gamma = 0.5;   // active-transmitter fraction, in (0,1)
    double R = 4.0;       // source-destination distance
    int m = 1;            // relay count >= 0
    double Dm = std::numeric_limits<double>::infinity(); // sum-squared budget
    channel::HopModel hop;
    RetransPolicy policy;

    bool unbounded() const { return !(Dm < std::numeric_limits<double>::infinity()); }
    double lambda_t() const { return lambda * gamma; }
    double relay_density() const { return lambda * (1.0 - gamma); }
    double Lambda() const { return lambda * gamma * hop.K; }
    double kappa() const;
    int subslots() const; // m+1, sum k_i, or M depending on policy
    void validate() const;
};

// Lemma-1 count under the budget d_m <= Dm (single attempt per hop).
double expected_relay_sets(const NetworkConfig& cfg);
// Same with the budget replaced by an arbitrary level a (used for truncation
// tails); a >= R^2/(m+1).
double expected_relay_sets_up_to(const NetworkConfig& cfg, double a);
// Dm -> infinity limit: G k^m/(m+1) exp(-Lambda R^2/(m+1)).
double expected_relay_sets_unbounded(const NetworkConfig& cfg);

// Retransmission variants (unbounded distance). Both reduce exactly to the
// single-attempt count when k = all-ones / M = m+1.
double expected_relay_sets_best_effort(const NetworkConfig& cfg, const geom::AttemptVector& k);
double expected_relay_sets_total_budget(const NetworkConfig& cfg, int M);

// exp(-E); the FKG lower bound on end-to-end outage.
double outage_lower_bound(double expected_count);

// Signed exponential-mixture form of the retransmission counts:
// E(lambda) = sum_i coef[i] * exp(-lambda * rate[i]); rate[i] already folds in
// gamma*K*R^2 so evaluation under a density sweep is O(terms).
struct ExpMixture {
    std::vector<double> coef;
    std::vector<double> rate;
    double eval(double lambda) const;
    double limit_at_zero() const; // sum of coefficients
};
ExpMixture best_effort_mixture(const NetworkConfig& cfg, const geom::AttemptVector& k);
ExpMixture total_budget_mixture(const NetworkConfig& cfg, int M);

struct CapacityResult {
    double value = 0.0;         // successful transmissions per unit area per slot
    bool valid = false;
    double epsilon_floor = 1.0; // smallest epsilon the bound can serve
    double lambda_raw = 0.0;    // corresponding max node density
    double lambda_active = 0.0; // lambda * gamma
    int subslots = 0;           // normalization k used for `value`
};

// Single-attempt closed form (unbounded distance).
CapacityResult tc_upper_bound(const NetworkConfig& cfg, double epsilon);
// Retransmission bounds: bisection inversion of the corrected expected-count
// mixtures; floors are exp(-E(0+)).
CapacityResult tc_upper_bound_best_effort(const NetworkConfig& cfg, double epsilon,
                                          const geom::AttemptVector& k);
CapacityResult tc_upper_bound_total_budget(const NetworkConfig& cfg, double epsilon, int M);

struct CriticalDensity {
    double lambda0 = 0.0;          // density where the closed-form bound bottoms out
    double min_outage_bound = 0.0; // value of the bound there
};
// Finite-Dm only: lambda0 = ln((m+1)Dm/R^2)/(gamma K (Dm - R^2/(m+1))) and the
// min-outage bound in terms of Delta = R^2/((m+1)Dm).
CriticalDensity critical_density(const NetworkConfig& cfg);

// Largest density whose outage lower bound stays at epsilon, found by
// bisection on the increasing branch. Throws errc::unachievable when epsilon
// sits below the minimum of the bound.
double max_density_for_outage(const NetworkConfig& cfg, double epsilon);

// Closed-form inversion available when Dm is unbounded (single attempt); the
// bisection route must agree with this.
double max_density_closed_form(const NetworkConfig& cfg, double epsilon);

// Capacity of any predetermined (CSI-free) routing: (1-e)/(K R^2) ln(G/(1-e)),
// identical to the single-hop inversion.
double predetermined_tc_bound(const NetworkConfig& cfg, double epsilon);

// Probability that m+1 hops with per-slot success p_i complete in order
// within M slots, by the (corrected) inclusion-exclusion expansion. The DP
// oracle is the ground truth this is pitted against.
double schedule_success_inclusion_exclusion(const std::vector<double>& p, int M);

// Per-set success under best-effort attempts, expanded inclusion-exclusion
// style (equals prod_i [1-(1-p_i)^{k_i}]).
double best_effort_success_expansion(const std::vector<double>& p, const geom::AttemptVector& k);

} // namespace mhtc::analytics
