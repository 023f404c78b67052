#pragma once

// Experiment drivers behind the CLI: analytic sweeps, simulation sweeps, and
// the figure-reproduction presets. Presets are exposed as data so the
// acceptance suite runs exactly what the CLI runs.

#include "config.hpp"

#include <string>
#include <vector>

namespace mhtc::exp {

struct AnalyzeOutcome {
    std::string csv;
    size_t rows = 0;
    size_t valid_rows = 0;
};
AnalyzeOutcome analyze(const io::Experiment& ex);

struct SimulateOutcome {
    std::string csv;
};
SimulateOutcome simulate(const io::Experiment& ex);

// Outage-vs-density curves, m in {1,2,3}, with the analytic lower bound.
struct Fig2Preset {
    analytics::NetworkConfig net; // lambda is swept
    sim::PhyModel phy;
    std::vector<double> lambdas;
    std::vector<int> ms;
    sim::SimOptions opts;
};
Fig2Preset fig2_preset(uint64_t trials, uint64_t seed);

// Max effective density vs hop count, analytic vs simulated, two distance
// budgets.
struct Fig3Preset {
    analytics::NetworkConfig net;
    sim::PhyModel phy;
    double epsilon = 0.05;
    std::vector<int> ms;
    std::vector<double> sim_budgets;      // Dm values that are simulated
    std::vector<double> analytic_budgets; // finite Dm columns (inf added on top)
    uint64_t trials = 500;
    uint64_t seed = 1;
};
Fig3Preset fig3_preset(uint64_t trials, uint64_t seed);

// Max density vs relay-to-source intensity ratio at fixed epsilon.
struct Fig4Preset {
    analytics::NetworkConfig net; // gamma is swept
    sim::PhyModel phy;
    double epsilon = 0.05;
    std::vector<double> gammas;
    double sim_budget = 100.0;
    uint64_t trials = 500;
    uint64_t seed = 1;
};
Fig4Preset fig4_preset(uint64_t trials, uint64_t seed);

// Simulation grid used to locate the outage crossing under a preset: fractions
// of the analytic inversion.
std::vector<double> sweep_fractions();

struct ReproduceOutcome {
    // file name -> contents
    std::vector<std::pair<std::string, std::string>> files;
};
ReproduceOutcome reproduce(const std::string& figure, uint64_t trials, uint64_t seed);

} // namespace mhtc::exp
