#include "experiments.hpp"

#include "csv.hpp"
#include "errors.hpp"
#include "mhtc_version.hpp"

#include <cmath>

namespace mhtc::exp {

namespace {

using analytics::NetworkConfig;
using analytics::RetransPolicy;

void require(bool ok, errc code, const char* msg) {
    if (!ok) throw error(code, msg);
}

// Capacity row for one (lambda-independent) configuration at epsilon.
analytics::CapacityResult capacity_for(const NetworkConfig& cfg, double epsilon) {
    switch (cfg.policy.kind) {
    case RetransPolicy::Kind::best_effort:
        require(cfg.unbounded(), errc::config,
                "analyze: best-effort analytics need an unbounded distance budget");
        return analytics::tc_upper_bound_best_effort(cfg, epsilon, cfg.policy.k);
    case RetransPolicy::Kind::total_budget:
        require(cfg.unbounded(), errc::config,
                "analyze: total-budget analytics need an unbounded distance budget");
        return analytics::tc_upper_bound_total_budget(cfg, epsilon, cfg.policy.M);
    case RetransPolicy::Kind::single_attempt: break;
    }
    if (cfg.unbounded()) return analytics::tc_upper_bound(cfg, epsilon);
    // Finite budget: invert the full bound numerically on its rising branch.
    analytics::CapacityResult res;
    res.subslots = cfg.m + 1;
    res.epsilon_floor = analytics::critical_density(cfg).min_outage_bound;
    if (epsilon < res.epsilon_floor) return res;
    try {
        res.lambda_raw = analytics::max_density_for_outage(cfg, epsilon);
    } catch (const error& e) {
        if (e.code() == errc::unachievable) return res;
        throw;
    }
    res.lambda_active = res.lambda_raw * cfg.gamma;
    res.value = res.lambda_active * (1.0 - epsilon) / static_cast<double>(res.subslots);
    res.valid = true;
    return res;
}

double expected_for(const NetworkConfig& cfg) {
    switch (cfg.policy.kind) {
    case RetransPolicy::Kind::best_effort:
        return analytics::expected_relay_sets_best_effort(cfg, cfg.policy.k);
    case RetransPolicy::Kind::total_budget:
        return analytics::expected_relay_sets_total_budget(cfg, cfg.policy.M);
    case RetransPolicy::Kind::single_attempt: break;
    }
    return analytics::expected_relay_sets(cfg);
}

} // namespace

AnalyzeOutcome analyze(const io::Experiment& ex) {
    for (int m : ex.analyze_m_list)
        require(m >= 1, errc::config, "analyze: relay counts must be >= 1");
    require(!ex.analyze_lambda_grid.empty() || true, errc::config, "unreachable");

    io::CsvWriter w(MHTC_VERSION_STRING, 0);
    w.config_block(ex.raw.serialize());
    w.header({"lambda", "m", "D", "policy", "expected_sets", "outage_bound", "tc_bound", "valid"});
    AnalyzeOutcome out;
    for (int m : ex.analyze_m_list) {
        NetworkConfig base = ex.net;
        base.m = m;
        if (base.policy.kind == RetransPolicy::Kind::best_effort)
            require(static_cast<int>(base.policy.k.size()) == m + 1, errc::config,
                    "analyze: best-effort attempts must have m+1 entries for every m in the grid");
        if (base.policy.kind == RetransPolicy::Kind::total_budget)
            require(base.policy.M >= m + 1, errc::config,
                    "analyze: total budget must cover m+1 hops for every m in the grid");
        base.validate();
        const analytics::CapacityResult cap = capacity_for(base, ex.epsilon);
        for (double lambda : ex.analyze_lambda_grid) {
            NetworkConfig cfg = base;
            cfg.lambda = lambda;
            cfg.validate();
            const double exp_sets = expected_for(cfg);
            w.field(lambda);
            w.field(m);
            w.field(cfg.Dm);
            w.field(std::string(cfg.policy.name()));
            w.field(exp_sets);
            w.field(analytics::outage_lower_bound(exp_sets));
            w.field(cap.value);
            w.field(cap.valid ? 1 : 0);
            w.end_row();
            ++out.rows;
            if (cap.valid) ++out.valid_rows;
        }
    }
    out.csv = w.str();
    return out;
}

SimulateOutcome simulate(const io::Experiment& ex) {
    std::vector<double> grid = ex.sim_lambda_grid;
    if (grid.empty()) grid.push_back(ex.net.lambda);

    io::CsvWriter w(MHTC_VERSION_STRING, ex.simopt.seed);
    w.config_block(ex.raw.serialize());
    w.header({"lambda", "m", "mode", "trials", "outage_mean", "outage_std", "seed"});
    for (double lambda : grid) {
        NetworkConfig cfg = ex.net;
        cfg.lambda = lambda;
        const sim::OutageRun run = sim::run_outage_trials(cfg, io::phy_of(ex), ex.simopt);
        w.field(lambda);
        w.field(cfg.m);
        w.field(std::string(sim::mode_name(ex.simopt.mode)));
        w.field(run.estimate.trials);
        w.field(run.estimate.mean);
        w.field(run.estimate.std);
        w.field(run.estimate.seed);
        w.end_row();
        w.comment("diag lambda=" + io::format_double(lambda) +
                  " cap_hits=" + std::to_string(run.diagnostics.cap_hits) +
                  " d_budget=" + io::format_double(run.diagnostics.d_budget) +
                  " routed_pairs_mean=" + io::format_double(run.diagnostics.routed_pairs_mean));
    }
    return {w.str()};
}

Fig2Preset fig2_preset(uint64_t trials, uint64_t seed) {
    Fig2Preset p;
    p.phy.fading = {3.0, 1.0, 1};
    p.phy.tag = channel::ModelTag::rayleigh;
    p.net.hop = channel::rayleigh_coeffs(p.phy.fading);
    p.net.gamma = 0.1;
    p.net.R = 4.0;
    p.net.Dm = 3600.0;
    p.net.policy = RetransPolicy::single();
    p.ms = {1, 2, 3};
    const double lo = 0.02, hi = 0.25;
    for (int i = 0; i < 8; ++i) p.lambdas.push_back(lo * std::pow(hi / lo, i / 7.0));
    p.opts.L = 600.0;
    p.opts.trials = trials ? trials : 2000;
    p.opts.mode = sim::Mode::dynamic;
    p.opts.seed = seed;
    return p;
}

Fig3Preset fig3_preset(uint64_t trials, uint64_t seed) {
    Fig3Preset p;
    p.phy.fading = {3.0, 1.0, 1};
    p.phy.tag = channel::ModelTag::rayleigh;
    p.net.hop = channel::rayleigh_coeffs(p.phy.fading);
    // gamma must keep the m = 1 finite-budget outage floor under epsilon for
    // every simulated budget (the floor rises as D shrinks).
    p.net.gamma = 0.04;
    p.net.R = 4.0;
    p.net.policy = RetransPolicy::single();
    p.epsilon = 0.05;
    p.ms = {1, 2, 3, 4, 5};
    p.sim_budgets = {100.0, 225.0};
    p.analytic_budgets = {100.0, 225.0, 3600.0};
    p.trials = trials ? trials : 500;
    p.seed = seed;
    return p;
}

Fig4Preset fig4_preset(uint64_t trials, uint64_t seed) {
    Fig4Preset p;
    p.phy.fading = {3.0, 1.0, 1};
    p.phy.tag = channel::ModelTag::rayleigh;
    p.net.hop = channel::rayleigh_coeffs(p.phy.fading);
    p.net.R = 4.0;
    p.net.m = 2;
    p.net.policy = RetransPolicy::single();
    p.epsilon = 0.05;
    p.gammas = {0.02, 0.03, 0.045, 0.07, 0.105};
    p.sim_budget = 100.0;
    p.trials = trials ? trials : 500;
    p.seed = seed;
    return p;
}

std::vector<double> sweep_fractions() {
    return {0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95, 1.02};
}

namespace {

sim::SimOptions sweep_options(double Dm, uint64_t trials, uint64_t seed) {
    sim::SimOptions o;
    o.L = 10.0 * std::max(4.0, std::sqrt(Dm));
    o.trials = trials;
    o.mode = sim::Mode::dynamic;
    o.seed = seed;
    return o;
}

// Simulated max density: sweep the fractions of the analytic inversion.
// Returns NaN when no grid density meets epsilon (possible at desk-scale
// trial counts near the outage floor).
double sweep_at(const NetworkConfig& cfg, const sim::PhyModel& phy, double epsilon,
                double lambda_analytic, uint64_t trials, uint64_t seed) {
    std::vector<double> grid;
    for (double f : sweep_fractions()) grid.push_back(f * lambda_analytic);
    try {
        return sim::max_density_sweep(cfg, phy, epsilon, grid, sweep_options(cfg.Dm, trials, seed))
            .max_lambda;
    } catch (const error& e) {
        if (e.code() == errc::unachievable) return std::numeric_limits<double>::quiet_NaN();
        throw;
    }
}

ReproduceOutcome reproduce_fig2(uint64_t trials, uint64_t seed) {
    const Fig2Preset p = fig2_preset(trials, seed);
    io::CsvWriter curves(MHTC_VERSION_STRING, seed);
    curves.comment("fig2: end-to-end outage vs contention density, analytic lower bound vs "
                   "dynamic simulation");
    curves.header({"lambda", "m", "outage_bound", "sim_mean", "sim_std", "trials"});
    std::vector<std::vector<double>> bound(p.ms.size()), mean(p.ms.size()), sd(p.ms.size());
    for (size_t mi = 0; mi < p.ms.size(); ++mi) {
        NetworkConfig cfg = p.net;
        cfg.m = p.ms[mi];
        for (double lambda : p.lambdas) {
            cfg.lambda = lambda;
            const double b = analytics::outage_lower_bound(analytics::expected_relay_sets(cfg));
            sim::SimOptions o = p.opts;
            o.seed = p.opts.seed + 1000 * mi;
            const sim::OutageRun run = sim::run_outage_trials(cfg, p.phy, o);
            curves.field(lambda);
            curves.field(p.ms[mi]);
            curves.field(b);
            curves.field(run.estimate.mean);
            curves.field(run.estimate.std);
            curves.field(run.estimate.trials);
            curves.end_row();
            bound[mi].push_back(b);
            mean[mi].push_back(run.estimate.mean);
            sd[mi].push_back(run.estimate.std);
        }
    }
    io::CsvWriter plot(MHTC_VERSION_STRING, seed);
    std::vector<std::string> cols = {"lambda"};
    for (int m : p.ms) {
        cols.push_back("bound_m" + std::to_string(m));
        cols.push_back("sim_m" + std::to_string(m));
        cols.push_back("sim_std_m" + std::to_string(m));
    }
    plot.header(cols);
    for (size_t i = 0; i < p.lambdas.size(); ++i) {
        plot.field(p.lambdas[i]);
        for (size_t mi = 0; mi < p.ms.size(); ++mi) {
            plot.field(bound[mi][i]);
            plot.field(mean[mi][i]);
            plot.field(sd[mi][i]);
        }
        plot.end_row();
    }
    return {{{"fig2_curves.csv", curves.str()}, {"fig2_plot.csv", plot.str()}}};
}

ReproduceOutcome reproduce_fig3(uint64_t trials, uint64_t seed) {
    const Fig3Preset p = fig3_preset(trials, seed);
    io::CsvWriter curves(MHTC_VERSION_STRING, p.seed);
    curves.comment("fig3: max effective contention density lambda/(m+1) vs hop count");
    curves.header({"m", "D", "kind", "lambda_max", "effective_density", "active_density"});
    io::CsvWriter plot(MHTC_VERSION_STRING, p.seed);
    std::vector<std::string> cols = {"m", "analytic_unbounded"};
    for (double D : p.analytic_budgets) cols.push_back("analytic_D" + io::format_double(D));
    for (double D : p.sim_budgets) cols.push_back("sim_D" + io::format_double(D));
    plot.header(cols);

    for (int m : p.ms) {
        NetworkConfig cfg = p.net;
        cfg.m = m;
        std::vector<double> row;
        const double lam_unb = analytics::max_density_closed_form(cfg, p.epsilon);
        row.push_back(lam_unb);
        curves.field(m);
        curves.field(std::string("inf"));
        curves.field(std::string("analytic"));
        curves.field(lam_unb);
        curves.field(lam_unb / (m + 1));
        curves.field(lam_unb * cfg.gamma);
        curves.end_row();
        for (double D : p.analytic_budgets) {
            cfg.Dm = D;
            const double lam = analytics::max_density_for_outage(cfg, p.epsilon);
            row.push_back(lam);
            curves.field(m);
            curves.field(D);
            curves.field(std::string("analytic"));
            curves.field(lam);
            curves.field(lam / (m + 1));
            curves.field(lam * cfg.gamma);
            curves.end_row();
        }
        for (size_t di = 0; di < p.sim_budgets.size(); ++di) {
            cfg.Dm = p.sim_budgets[di];
            const double lam_a = analytics::max_density_for_outage(cfg, p.epsilon);
            const double lam_s =
                sweep_at(cfg, p.phy, p.epsilon, lam_a, p.trials, p.seed + 17 * m + di);
            row.push_back(lam_s);
            curves.field(m);
            curves.field(cfg.Dm);
            curves.field(std::string("sim"));
            curves.field(lam_s);
            curves.field(lam_s / (m + 1));
            curves.field(lam_s * cfg.gamma);
            curves.end_row();
        }
        plot.field(m);
        for (double v : row) plot.field(v);
        plot.end_row();
    }
    return {{{"fig3_curves.csv", curves.str()}, {"fig3_plot.csv", plot.str()}}};
}

ReproduceOutcome reproduce_fig4(uint64_t trials, uint64_t seed) {
    const Fig4Preset p = fig4_preset(trials, seed);
    io::CsvWriter curves(MHTC_VERSION_STRING, p.seed);
    curves.comment("fig4: max density vs relay-to-source intensity ratio (1-gamma)/gamma");
    curves.header({"gamma", "ratio", "log_ratio", "kind", "lambda_max", "active_density"});
    io::CsvWriter plot(MHTC_VERSION_STRING, p.seed);
    plot.header({"ratio", "log_ratio", "analytic_lambda", "analytic_active", "sim_lambda",
                 "sim_active"});
    size_t gi = 0;
    for (double gamma : p.gammas) {
        NetworkConfig cfg = p.net;
        cfg.gamma = gamma;
        const double ratio = (1.0 - gamma) / gamma;
        const double lam_a = analytics::max_density_closed_form(cfg, p.epsilon);
        curves.field(gamma);
        curves.field(ratio);
        curves.field(std::log(ratio));
        curves.field(std::string("analytic"));
        curves.field(lam_a);
        curves.field(lam_a * gamma);
        curves.end_row();
        cfg.Dm = p.sim_budget;
        const double lam_s = sweep_at(cfg, p.phy, p.epsilon, lam_a, p.trials, p.seed + 31 * gi);
        curves.field(gamma);
        curves.field(ratio);
        curves.field(std::log(ratio));
        curves.field(std::string("sim"));
        curves.field(lam_s);
        curves.field(lam_s * gamma);
        curves.end_row();
        plot.field(ratio);
        plot.field(std::log(ratio));
        plot.field(lam_a);
        plot.field(lam_a * gamma);
        plot.field(lam_s);
        plot.field(lam_s * gamma);
        plot.end_row();
        ++gi;
    }
    return {{{"fig4_curves.csv", curves.str()}, {"fig4_plot.csv", plot.str()}}};
}

} // namespace

ReproduceOutcome reproduce(const std::string& figure, uint64_t trials, uint64_t seed) {
    if (figure == "fig2") return reproduce_fig2(trials, seed);
    if (figure == "fig3") return reproduce_fig3(trials, seed);
    if (figure == "fig4") return reproduce_fig4(trials, seed);
    throw error(errc::config, "unknown figure preset: " + figure + " (expected fig2|fig3|fig4)");
}

} // namespace mhtc::exp
