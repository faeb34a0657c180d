#include "wtannld.h"

#include <cstring>
#include <new>
#include <string>

#include "wta/experiment.hpp"

struct wta_experiment {
    wta::ExperimentConfig cfg;
    std::string error;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
wta_status guarded(wta_experiment* exp, Fn&& fn) {
    if (!exp) return WTA_ERR_PARAM;
    exp->error.clear();
    try {
        fn();
        return WTA_OK;
    } catch (const wta::ParamError& ex) {
        exp->error = ex.what();
        return WTA_ERR_PARAM;
    } catch (const wta::FormatError& ex) {
        exp->error = ex.what();
        return WTA_ERR_FORMAT;
    } catch (const wta::IoError& ex) {
        exp->error = ex.what();
        return WTA_ERR_IO;
    } catch (const wta::CalibrationError& ex) {
        exp->error = ex.what();
        return WTA_ERR_CALIBRATION;
    } catch (const wta::IntegrityError& ex) {
        exp->error = ex.what();
        return WTA_ERR_INTEGRITY;
    } catch (const wta::SimulationError& ex) {
        exp->error = ex.what();
        return WTA_ERR_SIM;
    } catch (const std::exception& ex) {
        exp->error = ex.what();
        return WTA_ERR_INTERNAL;
    }
}

}  // namespace

extern "C" {

const char* wta_version(void) { return "1.0.0"; }

wta_experiment* wta_experiment_create(const char* config_json) {
    auto* exp = new (std::nothrow) wta_experiment{};
    if (!exp) return nullptr;
    if (config_json && *config_json) {
        try {
            exp->cfg.merge_json(config_json);
        } catch (const std::exception& ex) {
            exp->error = ex.what();  // handle stays usable with defaults
        }
    }
    return exp;
}

void wta_experiment_destroy(wta_experiment* exp) { delete exp; }

const char* wta_experiment_error(const wta_experiment* exp) {
    return exp ? exp->error.c_str() : "null experiment handle";
}

wta_status wta_experiment_load_config(wta_experiment* exp, const char* path) {
    return guarded(exp, [&] {
        if (!path) throw wta::ParamError("config path is null");
        exp->cfg.merge_file(path);
    });
}

wta_status wta_experiment_set(wta_experiment* exp, const char* dotted_key, const char* value) {
    return guarded(exp, [&] {
        if (!dotted_key || !value) throw wta::ParamError("config key/value is null");
        exp->cfg.set(dotted_key, value);
    });
}

char* wta_experiment_config_json(const wta_experiment* exp) {
    if (!exp) return nullptr;
    return dup_string(exp->cfg.dump());
}

wta_status wta_experiment_run(wta_experiment* exp, const char* command, const char* out_dir) {
    return guarded(exp, [&] {
        if (!command) throw wta::ParamError("command is null");
        const std::string out = out_dir && *out_dir
                                    ? std::string(out_dir)
                                    : exp->cfg.doc().at("output").get<std::string>();
        wta::Experiment e(exp->cfg);
        const std::string cmd = command;
        if (cmd == "gen") e.run_gen(out);
        else if (cmd == "tune") e.run_tune(out);
        else if (cmd == "train") e.run_train(out);
        else if (cmd == "sweep") e.run_sweep(out);
        else if (cmd == "mismatch") e.run_mismatch(out);
        else throw wta::ParamError("unknown command '" + cmd + "'");
    });
}

wta_status wta_experiment_eval(wta_experiment* exp, const char* snapshot_path,
                               const char* patterns_path, const char* out_dir) {
    return guarded(exp, [&] {
        if (!snapshot_path || !patterns_path)
            throw wta::ParamError("snapshot/patterns path is null");
        const std::string out = out_dir && *out_dir
                                    ? std::string(out_dir)
                                    : exp->cfg.doc().at("output").get<std::string>();
        wta::Experiment e(exp->cfg);
        e.run_eval(snapshot_path, patterns_path, out);
    });
}

char* wta_experiment_tune_json(wta_experiment* exp) {
    std::string json;
    const wta_status st = guarded(exp, [&] {
        wta::Experiment e(exp->cfg);
        json = e.tune().to_json();
    });
    return st == WTA_OK ? dup_string(json) : nullptr;
}

void wta_string_free(char* s) { delete[] s; }

}  // extern "C"
