#include "mhtc/mhtc.h"

#include "channel.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "mhtc_version.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

thread_local std::string g_last_error = "";

mhtc_status status_of(const mhtc::error& e) {
    switch (e.code()) {
    case mhtc::errc::config: return MHTC_ERR_CONFIG;
    case mhtc::errc::domain: return MHTC_ERR_DOMAIN;
    case mhtc::errc::unachievable: return MHTC_ERR_UNACHIEVABLE;
    case mhtc::errc::out_of_regime: return MHTC_ERR_OUT_OF_REGIME;
    case mhtc::errc::numeric: return MHTC_ERR_NUMERIC;
    case mhtc::errc::io: return MHTC_ERR_IO;
    }
    return MHTC_ERR_NUMERIC;
}

template <typename F>
mhtc_status guarded(F&& fn) {
    try {
        return fn();
    } catch (const mhtc::error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MHTC_ERR_NUMERIC;
    } catch (...) {
        g_last_error = "unknown failure";
        return MHTC_ERR_NUMERIC;
    }
}

mhtc_status need(bool ok, const char* msg) {
    if (ok) return MHTC_OK;
    g_last_error = msg;
    return MHTC_ERR_CONFIG;
}

} // namespace

struct mhtc_model {
    mhtc::channel::HopModel model;
};

struct mhtc_config {
    mhtc::io::KeyValues kv;
};

extern "C" {

const char* mhtc_version(void) { return MHTC_VERSION_STRING; }

const char* mhtc_status_str(mhtc_status status) {
    switch (status) {
    case MHTC_OK: return "ok";
    case MHTC_ERR_CONFIG: return "config error";
    case MHTC_ERR_DOMAIN: return "domain error";
    case MHTC_ERR_UNACHIEVABLE: return "unachievable target";
    case MHTC_ERR_OUT_OF_REGIME: return "out of model regime";
    case MHTC_ERR_NUMERIC: return "numeric failure";
    case MHTC_ERR_IO: return "io error";
    }
    return "unknown status";
}

const char* mhtc_last_error(void) { return g_last_error.c_str(); }

mhtc_status mhtc_model_rayleigh(double alpha, double beta, mhtc_model** out) {
    if (mhtc_status s = need(out != nullptr, "null output pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        *out = new mhtc_model{mhtc::channel::rayleigh_coeffs({alpha, beta, 1})};
        return MHTC_OK;
    });
}

mhtc_status mhtc_model_nakagami(double alpha, double beta, int m0, int high_outage,
                                mhtc_model** out) {
    if (mhtc_status s = need(out != nullptr, "null output pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        const auto regime = high_outage ? mhtc::channel::NakagamiRegime::high_outage
                                        : mhtc::channel::NakagamiRegime::low_outage;
        *out = new mhtc_model{mhtc::channel::nakagami_coeffs({alpha, beta, m0}, regime)};
        return MHTC_OK;
    });
}

mhtc_status mhtc_model_pathloss(double alpha, double beta, int upper, mhtc_model** out) {
    if (mhtc_status s = need(out != nullptr, "null output pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        const auto bounds = mhtc::channel::pathloss_coeff_bounds({alpha, beta, 1});
        *out = new mhtc_model{upper ? bounds.second : bounds.first};
        return MHTC_OK;
    });
}

void mhtc_model_free(mhtc_model* model) { delete model; }

mhtc_status mhtc_model_coeffs(const mhtc_model* model, double* G, double* K) {
    if (mhtc_status s = need(model && G && K, "null pointer"); s != MHTC_OK) return s;
    *G = model->model.G;
    *K = model->model.K;
    return MHTC_OK;
}

mhtc_status mhtc_hop_success(const mhtc_model* model, double r, double lambda_t, double* out) {
    if (mhtc_status s = need(model && out, "null pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        *out = mhtc::channel::hop_success(model->model, r, lambda_t);
        return MHTC_OK;
    });
}

mhtc_status mhtc_config_load(const char* path, mhtc_config** out) {
    if (mhtc_status s = need(path && out, "null pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        auto kv = mhtc::io::KeyValues::parse_file(path);
        mhtc::io::resolve(kv); // validate eagerly so errors surface here
        *out = new mhtc_config{std::move(kv)};
        return MHTC_OK;
    });
}

mhtc_status mhtc_config_parse(const char* text, mhtc_config** out) {
    if (mhtc_status s = need(text && out, "null pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        auto kv = mhtc::io::KeyValues::parse_text(text);
        mhtc::io::resolve(kv);
        *out = new mhtc_config{std::move(kv)};
        return MHTC_OK;
    });
}

mhtc_status mhtc_config_set(mhtc_config* cfg, const char* key, const char* value) {
    if (mhtc_status s = need(cfg && key && value, "null pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        mhtc::io::KeyValues next = cfg->kv;
        next.set(key, value);
        mhtc::io::resolve(next); // reject overrides that break validation
        cfg->kv = std::move(next);
        return MHTC_OK;
    });
}

mhtc_status mhtc_config_serialize(const mhtc_config* cfg, char** out) {
    if (mhtc_status s = need(cfg && out, "null pointer"); s != MHTC_OK) return s;
    const std::string s = cfg->kv.serialize();
    *out = new char[s.size() + 1];
    std::memcpy(*out, s.c_str(), s.size() + 1);
    return MHTC_OK;
}

void mhtc_config_free(mhtc_config* cfg) { delete cfg; }
void mhtc_string_free(char* s) { delete[] s; }

mhtc_status mhtc_expected_relay_sets(const mhtc_config* cfg, double* out) {
    if (mhtc_status s = need(cfg && out, "null pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        const auto ex = mhtc::io::resolve(cfg->kv);
        switch (ex.net.policy.kind) {
        case mhtc::analytics::RetransPolicy::Kind::best_effort:
            *out = mhtc::analytics::expected_relay_sets_best_effort(ex.net, ex.net.policy.k);
            break;
        case mhtc::analytics::RetransPolicy::Kind::total_budget:
            *out = mhtc::analytics::expected_relay_sets_total_budget(ex.net, ex.net.policy.M);
            break;
        default: *out = mhtc::analytics::expected_relay_sets(ex.net);
        }
        return MHTC_OK;
    });
}

mhtc_status mhtc_outage_lower_bound(const mhtc_config* cfg, double* out) {
    double e = 0.0;
    const mhtc_status s = mhtc_expected_relay_sets(cfg, &e);
    if (s != MHTC_OK) return s;
    *out = mhtc::analytics::outage_lower_bound(e);
    return MHTC_OK;
}

mhtc_status mhtc_tc_upper_bound(const mhtc_config* cfg, double epsilon, mhtc_capacity* out) {
    if (mhtc_status s = need(cfg && out, "null pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        const auto ex = mhtc::io::resolve(cfg->kv);
        mhtc::analytics::CapacityResult r;
        switch (ex.net.policy.kind) {
        case mhtc::analytics::RetransPolicy::Kind::best_effort:
            r = mhtc::analytics::tc_upper_bound_best_effort(ex.net, epsilon, ex.net.policy.k);
            break;
        case mhtc::analytics::RetransPolicy::Kind::total_budget:
            r = mhtc::analytics::tc_upper_bound_total_budget(ex.net, epsilon, ex.net.policy.M);
            break;
        default: r = mhtc::analytics::tc_upper_bound(ex.net, epsilon);
        }
        *out = {r.value, r.valid ? 1 : 0, r.epsilon_floor, r.lambda_raw, r.lambda_active,
                r.subslots};
        return MHTC_OK;
    });
}

mhtc_status mhtc_max_density_for_outage(const mhtc_config* cfg, double epsilon, double* out) {
    if (mhtc_status s = need(cfg && out, "null pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        const auto ex = mhtc::io::resolve(cfg->kv);
        *out = mhtc::analytics::max_density_for_outage(ex.net, epsilon);
        return MHTC_OK;
    });
}

mhtc_status mhtc_predetermined_tc_bound(const mhtc_config* cfg, double epsilon, double* out) {
    if (mhtc_status s = need(cfg && out, "null pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        const auto ex = mhtc::io::resolve(cfg->kv);
        *out = mhtc::analytics::predetermined_tc_bound(ex.net, epsilon);
        return MHTC_OK;
    });
}

mhtc_status mhtc_run_analyze(const mhtc_config* cfg, const char* out_csv, size_t* valid_rows) {
    if (mhtc_status s = need(cfg && out_csv, "null pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        const auto ex = mhtc::io::resolve(cfg->kv);
        const auto outcome = mhtc::exp::analyze(ex);
        std::ofstream f(out_csv, std::ios::binary);
        if (!f) throw mhtc::error(mhtc::errc::io, std::string("cannot open ") + out_csv);
        f << outcome.csv;
        if (valid_rows) *valid_rows = outcome.valid_rows;
        if (outcome.rows > 0 && outcome.valid_rows == 0)
            throw mhtc::error(mhtc::errc::unachievable,
                              "analyze: every row fell outside the valid capacity regime");
        return MHTC_OK;
    });
}

mhtc_status mhtc_run_simulate(const mhtc_config* cfg, const char* out_csv) {
    if (mhtc_status s = need(cfg && out_csv, "null pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        const auto ex = mhtc::io::resolve(cfg->kv);
        const auto outcome = mhtc::exp::simulate(ex);
        std::ofstream f(out_csv, std::ios::binary);
        if (!f) throw mhtc::error(mhtc::errc::io, std::string("cannot open ") + out_csv);
        f << outcome.csv;
        return MHTC_OK;
    });
}

mhtc_status mhtc_run_reproduce(const char* figure, uint64_t trials, uint64_t seed,
                               const char* out_dir) {
    if (mhtc_status s = need(figure && out_dir, "null pointer"); s != MHTC_OK) return s;
    return guarded([&] {
        const auto outcome = mhtc::exp::reproduce(figure, trials, seed);
        std::filesystem::create_directories(out_dir);
        for (const auto& [name, contents] : outcome.files) {
            const auto path = std::filesystem::path(out_dir) / name;
            std::ofstream f(path, std::ios::binary);
            if (!f) throw mhtc::error(mhtc::errc::io, "cannot open " + path.string());
            f << contents;
        }
        return MHTC_OK;
    });
}

} // extern "C"
