#pragma once

// Flat key=value configuration with dotted sections. Parsing keeps line
// numbers for diagnostics; serialization is canonical (sorted keys) so that
// parse -> serialize -> parse is the identity.

#include "analytics.hpp"
#include "sim.hpp"

#include <map>
#include <string>
#include <vector>

namespace mhtc::io {

class KeyValues {
public:
    static KeyValues parse_file(const std::string& path);
    static KeyValues parse_text(const std::string& text, const std::string& origin = "<string>");

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    std::string serialize() const;

    // Typed getters; errors carry the key name (and source line if parsed).
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    // "a,b,c" | "lin:lo:hi:n" | "log:lo:hi:n"
    std::vector<double> get_grid(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;

    // Keys consumed by resolve(); anything else is a config error.
    void check_known(const std::vector<std::string>& known) const;
    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
    std::string origin_ = "<set>";
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

// Fully resolved experiment description shared by the CLI surfaces.
struct Experiment {
    channel::FadingSpec fading;
    channel::ModelTag model_tag = channel::ModelTag::rayleigh;
    analytics::NetworkConfig net; // hop model derived from fading + tag
    double epsilon = 0.05;

    std::vector<double> analyze_lambda_grid;
    std::vector<int> analyze_m_list;

    sim::SimOptions simopt;
    std::vector<double> sim_lambda_grid; // empty = just net.lambda

    KeyValues raw; // canonical key set, for provenance headers
};

Experiment resolve(const KeyValues& kv);
sim::PhyModel phy_of(const Experiment& ex);

} // namespace mhtc::io
