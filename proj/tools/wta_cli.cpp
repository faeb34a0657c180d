// Command-line front end for the simulator; talks to the library exclusively
// through the public C API.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wtannld.h"

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    std::vector<std::string> sets;
    std::string seed;
    std::string jobs;
    std::string dt;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config, "JSON config file merged over defaults")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--set", o.sets, "override, dotted key=JSON value (repeatable)");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--jobs", o.jobs, "worker threads for trial batches");
    sub->add_option("--dt", o.dt, "integration step in seconds");
}

int fail(wta_experiment* exp, const char* what) {
    std::fprintf(stderr, "error: %s: %s\n", what, wta_experiment_error(exp));
    wta_experiment_destroy(exp);
    return 1;
}

wta_experiment* build(const CommonOpts& o, int* rc) {
    wta_experiment* exp = wta_experiment_create(nullptr);
    if (!exp) {
        std::fprintf(stderr, "error: out of memory\n");
        *rc = 1;
        return nullptr;
    }
    if (!o.config.empty() && wta_experiment_load_config(exp, o.config.c_str()) != WTA_OK) {
        *rc = fail(exp, "loading config");
        return nullptr;
    }
    for (const auto& kv : o.sets) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            wta_experiment_destroy(exp);
            *rc = 1;
            return nullptr;
        }
        if (wta_experiment_set(exp, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()) !=
            WTA_OK) {
            *rc = fail(exp, "applying --set");
            return nullptr;
        }
    }
    const std::pair<const char*, const std::string*> direct[] = {
        {"seed", &o.seed}, {"jobs", &o.jobs}, {"dt", &o.dt}};
    for (const auto& [key, val] : direct) {
        if (!val->empty() && wta_experiment_set(exp, key, val->c_str()) != WTA_OK) {
            *rc = fail(exp, "applying option");
            return nullptr;
        }
    }
    *rc = 0;
    return exp;
}

int run_command(const char* cmd, const CommonOpts& o) {
    int rc = 0;
    wta_experiment* exp = build(o, &rc);
    if (!exp) return rc;
    if (wta_experiment_run(exp, cmd, o.out.empty() ? nullptr : o.out.c_str()) != WTA_OK)
        return fail(exp, cmd);
    wta_experiment_destroy(exp);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spiking winner-take-all network with nonlinear dendrites: "
                 "simulation, auto-tuning, training, and robustness benchmarks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(wta_version()));

    CommonOpts gen_o, tune_o, train_o, sweep_o, mism_o, eval_o;
    auto* gen = app.add_subcommand("gen", "generate Poisson pattern templates");
    auto* tune = app.add_subcommand("tune", "derive network parameters for the stimulus");
    auto* train = app.add_subcommand("train", "run training trials to saturation");
    auto* sweep = app.add_subcommand("sweep", "success-rate sweep over a parameter grid");
    auto* mism =
        app.add_subcommand("mismatch", "training under frozen per-component parameter spread");
    auto* eval = app.add_subcommand("eval", "classify patterns with a trained snapshot");
    add_common(gen, gen_o);
    add_common(tune, tune_o);
    add_common(train, train_o);
    add_common(sweep, sweep_o);
    add_common(mism, mism_o);
    add_common(eval, eval_o);

    std::string snapshot_path, patterns_path;
    eval->add_option("--snapshot", snapshot_path, "trained network snapshot JSON")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--patterns", patterns_path, "pattern CSV to classify")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) return run_command("gen", gen_o);
    if (tune->parsed()) return run_command("tune", tune_o);
    if (train->parsed()) return run_command("train", train_o);
    if (sweep->parsed()) return run_command("sweep", sweep_o);
    if (mism->parsed()) return run_command("mismatch", mism_o);
    if (eval->parsed()) {
        int rc = 0;
        wta_experiment* exp = build(eval_o, &rc);
        if (!exp) return rc;
        if (wta_experiment_eval(exp, snapshot_path.c_str(), patterns_path.c_str(),
                                eval_o.out.empty() ? nullptr : eval_o.out.c_str()) != WTA_OK)
            return fail(exp, "eval");
        wta_experiment_destroy(exp);
        return 0;
    }
    return 0;
}
