#pragma once

// Monte Carlo simulation of the Poisson network: HPPP sampling on a torus,
// per-link SIR evaluation with per-subslot fading redraws, uncoordinated
// route selection with relay conflicts, and outage tallies for the typical
// pair.

#include "analytics.hpp"
#include "channel.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mhtc::sim {

enum class Mode { dynamic, predetermined_equidistant, synthetic_independent };
const char* mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

// Physical layer for SIR draws; (alpha, beta) must be the pair the hop model
// coefficients were derived from.
struct PhyModel {
    channel::FadingSpec fading;
    channel::ModelTag tag = channel::ModelTag::rayleigh;
};

struct Realization {
    double L = 0.0;
    std::vector<double> x, y;       // HPPP node positions
    std::vector<uint8_t> is_source; // role flags; non-sources form the relay pool
    struct Pair {
        uint32_t src = 0;
        double dst_x = 0.0, dst_y = 0.0; // destinations are not HPPP points
    };
    std::vector<Pair> pairs;
    size_t node_count() const { return x.size(); }
};

struct SimOptions {
    double L = 100.0;
    uint64_t trials = 1000;
    Mode mode = Mode::dynamic;
    uint64_t seed = 1;
    // Interference cutoff radius; transmitters beyond it enter through the
    // exact mean of the far field. r_cut >= L/sqrt(2) switches it off.
    double r_cut = 25.0;
    // Stop the chain search once the expected number of potential relay sets
    // beyond the current d_m level falls under this (0 = never stop early).
    double stop_tail = 1e-3;
    uint64_t node_cap = 1'000'000; // per-pair search work cap
    int threads = 0;               // 0 = hardware concurrency
};

struct McEstimate {
    double mean = 0.0;
    double std = 0.0; // standard error of the mean
    uint64_t trials = 0;
    uint64_t seed = 0;
};

struct SimDiagnostics {
    uint64_t cap_hits = 0;
    double d_budget = 0.0;          // effective search budget after the tail stop
    double routed_pairs_mean = 0.0; // pairs per trial that ran route selection
};

Realization sample_network(const analytics::NetworkConfig& cfg, double L, uint64_t seed);

struct RouteAssignment {
    bool has_chain = false;
    std::vector<uint32_t> relays; // node ids, size m when present
};

// Per-pair pass(1)/fail(0)/no-link(-1) of the active link in `subslot`.
// Straightforward O(P^2) reference evaluation (also used by tests to check
// the cached engine).
std::vector<int> evaluate_sir(const analytics::NetworkConfig& cfg, const PhyModel& phy,
                              const Realization& real,
                              const std::vector<RouteAssignment>& assignments, int subslot,
                              uint64_t trial_seed, double r_cut = 1e18);

// Route selection for one pair in a fresh trial context: no relays claimed,
// every other pair transmitting from its source.
std::optional<RouteAssignment> select_route(const analytics::NetworkConfig& cfg,
                                            const PhyModel& phy, const Realization& real,
                                            uint32_t pair, Mode mode, uint64_t trial_seed,
                                            const SimOptions& opt);

struct OutageRun {
    McEstimate estimate;
    SimDiagnostics diagnostics;
};
OutageRun run_outage_trials(const analytics::NetworkConfig& cfg, const PhyModel& phy,
                            const SimOptions& opt);

struct SweepPoint {
    double lambda = 0.0;
    McEstimate estimate;
};
struct SweepResult {
    bool found = false;
    double max_lambda = 0.0; // largest grid density with outage <= epsilon
    std::vector<SweepPoint> points;
};
// Throws errc::unachievable when even the smallest grid density violates
// epsilon.
SweepResult max_density_sweep(const analytics::NetworkConfig& cfg, const PhyModel& phy,
                              double epsilon, const std::vector<double>& grid,
                              const SimOptions& opt);

} // namespace mhtc::sim
