#include "config.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mhtc::io {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

} // namespace

KeyValues KeyValues::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io, "cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

KeyValues KeyValues::parse_text(const std::string& text, const std::string& origin) {
    KeyValues kv;
    kv.origin_ = origin;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw error(errc::config, origin + ":" + std::to_string(lineno) +
                                          ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw error(errc::config, origin + ":" + std::to_string(lineno) + ": empty key");
        kv.values_[key] = value;
        kv.lines_[key] = lineno;
    }
    return kv;
}

void KeyValues::set(const std::string& key, const std::string& value) {
    if (key.empty()) throw error(errc::config, "config override: empty key");
    values_[key] = trim(value);
    lines_.erase(key);
}

bool KeyValues::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValues::serialize() const {
    std::stringstream out;
    for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
    return out.str();
}

void KeyValues::fail(const std::string& key, const std::string& what) const {
    std::string where = origin_;
    auto it = lines_.find(key);
    if (it != lines_.end()) where += ":" + std::to_string(it->second);
    throw error(errc::config, where + ": field '" + key + "': " + what);
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "inf") return std::numeric_limits<double>::infinity();
    try {
        size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) fail(key, "trailing characters in number");
        return v;
    } catch (const error&) {
        throw;
    } catch (...) {
        fail(key, "not a number: '" + it->second + "'");
    }
}

int KeyValues::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        size_t used = 0;
        const int v = std::stoi(it->second, &used);
        if (used != it->second.size()) fail(key, "trailing characters in integer");
        return v;
    } catch (const error&) {
        throw;
    } catch (...) {
        fail(key, "not an integer: '" + it->second + "'");
    }
}

uint64_t KeyValues::get_u64(const std::string& key, uint64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        size_t used = 0;
        const uint64_t v = std::stoull(it->second, &used);
        if (used != it->second.size()) fail(key, "trailing characters in integer");
        return v;
    } catch (const error&) {
        throw;
    } catch (...) {
        fail(key, "not an unsigned integer: '" + it->second + "'");
    }
}

std::vector<double> KeyValues::get_grid(const std::string& key,
                                        const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& spec = it->second;
    if (spec.empty()) return {};
    if (spec.rfind("lin:", 0) == 0 || spec.rfind("log:", 0) == 0) {
        const auto parts = split(spec, ':');
        if (parts.size() != 4) fail(key, "range syntax is lin:lo:hi:n or log:lo:hi:n");
        double lo, hi;
        int n;
        try {
            lo = std::stod(parts[1]);
            hi = std::stod(parts[2]);
            n = std::stoi(parts[3]);
        } catch (...) {
            fail(key, "bad range bounds");
        }
        if (n < 1) fail(key, "range needs at least one point");
        std::vector<double> out;
        if (n == 1) return {lo};
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / (n - 1);
            if (parts[0] == "lin")
                out.push_back(lo + (hi - lo) * t);
            else {
                if (lo <= 0.0 || hi <= 0.0) fail(key, "log range needs positive bounds");
                out.push_back(lo * std::pow(hi / lo, t));
            }
        }
        return out;
    }
    std::vector<double> out;
    for (const auto& tok : split(spec, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            fail(key, "bad list element '" + tok + "'");
        }
    }
    return out;
}

std::vector<int> KeyValues::get_int_list(const std::string& key,
                                         const std::vector<int>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<int> out;
    for (const auto& tok : split(it->second, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stoi(tok));
        } catch (...) {
            fail(key, "bad list element '" + tok + "'");
        }
    }
    return out;
}

void KeyValues::check_known(const std::vector<std::string>& known) const {
    for (const auto& [k, v] : values_) {
        if (std::find(known.begin(), known.end(), k) == known.end()) fail(k, "unknown key");
    }
}

namespace {

const std::vector<std::string> kKnownKeys = {
    "channel.model", "channel.alpha", "channel.beta", "channel.m0",
    "net.lambda", "net.gamma", "net.r", "net.m", "net.d",
    "net.policy", "net.attempts", "net.budget",
    "analyze.lambda", "analyze.m", "analyze.epsilon",
    "sim.window", "sim.trials", "sim.mode", "sim.seed",
    "sim.rcut", "sim.stop_tail", "sim.node_cap", "sim.threads", "sim.lambda",
};

channel::ModelTag tag_from_string(const std::string& s) {
    if (s == "rayleigh") return channel::ModelTag::rayleigh;
    if (s == "nakagami_low") return channel::ModelTag::nakagami_low;
    if (s == "nakagami_high") return channel::ModelTag::nakagami_high;
    if (s == "pathloss_lower") return channel::ModelTag::pathloss_lower;
    if (s == "pathloss_upper") return channel::ModelTag::pathloss_upper;
    throw error(errc::config, "channel.model: unknown model '" + s + "'");
}

channel::HopModel model_for(channel::ModelTag tag, const channel::FadingSpec& spec) {
    switch (tag) {
    case channel::ModelTag::rayleigh: return channel::rayleigh_coeffs(spec);
    case channel::ModelTag::nakagami_low:
        return channel::nakagami_coeffs(spec, channel::NakagamiRegime::low_outage);
    case channel::ModelTag::nakagami_high:
        return channel::nakagami_coeffs(spec, channel::NakagamiRegime::high_outage);
    case channel::ModelTag::pathloss_lower: return channel::pathloss_coeff_bounds(spec).first;
    case channel::ModelTag::pathloss_upper: return channel::pathloss_coeff_bounds(spec).second;
    }
    throw error(errc::config, "channel.model: unhandled tag");
}

} // namespace

Experiment resolve(const KeyValues& kv) {
    kv.check_known(kKnownKeys);
    Experiment ex;
    ex.model_tag = tag_from_string(kv.get_string("channel.model", "rayleigh"));
    ex.fading.alpha = kv.get_double("channel.alpha", 3.0);
    ex.fading.beta = kv.get_double("channel.beta", 1.0);
    ex.fading.m0 = kv.get_int("channel.m0", 1);
    try {
        ex.net.hop = model_for(ex.model_tag, ex.fading);
    } catch (const error& e) {
        throw error(errc::config, std::string("channel: ") + e.what());
    }

    ex.net.lambda = kv.get_double("net.lambda", 0.1);
    ex.net.gamma = kv.get_double("net.gamma", 0.5);
    ex.net.R = kv.get_double("net.r", 4.0);
    ex.net.m = kv.get_int("net.m", 1);
    ex.net.Dm = kv.get_double("net.d", std::numeric_limits<double>::infinity());

    const std::string policy = kv.get_string("net.policy", "single");
    if (policy == "single") {
        ex.net.policy = analytics::RetransPolicy::single();
    } else if (policy == "best_effort") {
        const auto k = kv.get_int_list("net.attempts", {});
        ex.net.policy = analytics::RetransPolicy::best_effort(
            geom::AttemptVector(k.begin(), k.end()));
    } else if (policy == "total_budget") {
        ex.net.policy = analytics::RetransPolicy::total_budget(kv.get_int("net.budget", 0));
    } else {
        throw error(errc::config, "net.policy: unknown policy '" + policy + "'");
    }
    ex.net.validate();

    ex.epsilon = kv.get_double("analyze.epsilon", 0.05);
    if (!(ex.epsilon > 0.0 && ex.epsilon < 1.0))
        throw error(errc::config, "analyze.epsilon: must lie in (0,1)");
    ex.analyze_lambda_grid = kv.get_grid("analyze.lambda", {ex.net.lambda});
    ex.analyze_m_list = kv.get_int_list("analyze.m", {ex.net.m});

    ex.simopt.L = kv.get_double("sim.window", 100.0);
    ex.simopt.trials = kv.get_u64("sim.trials", 2000);
    ex.simopt.mode = sim::mode_from_name(kv.get_string("sim.mode", "dynamic"));
    ex.simopt.seed = kv.get_u64("sim.seed", 1);
    ex.simopt.r_cut = kv.get_double("sim.rcut", 25.0);
    ex.simopt.stop_tail = kv.get_double("sim.stop_tail", 1e-3);
    ex.simopt.node_cap = kv.get_u64("sim.node_cap", 1'000'000);
    ex.simopt.threads = kv.get_int("sim.threads", 0);
    ex.sim_lambda_grid = kv.get_grid("sim.lambda", {});

    ex.raw = kv;
    return ex;
}

sim::PhyModel phy_of(const Experiment& ex) { return sim::PhyModel{ex.fading, ex.model_tag}; }

} // namespace mhtc::io
