#include "wta/experiment.hpp"

#include <cstdio>
#include <fstream>

#include "wta/nonideality.hpp"

namespace wta {

namespace {

std::vector<PatternTemplate> experiment_templates(const ExperimentConfig& cfg, u64 seed,
                                                  std::string_view tag) {
    const StimulusParams s = cfg.stimulus();
    Rng rng = make_rng(seed, tag);
    std::vector<PatternTemplate> templates;
    for (int c = 1; c <= cfg.classes(); ++c)
        templates.push_back(
            gen_poisson_template(s.d, s.rate_hz, s.t_p, s.active_fraction, c, rng));
    return templates;
}

double override_or(const nlohmann::json& ov, const char* key, double fallback) {
    return ov.contains(key) ? ov.at(key).get<double>() : fallback;
}

}  // namespace

TuneResult Experiment::tune() const {
    cfg_.validate();
    const StimulusParams s = cfg_.stimulus();
    const nlohmann::json& ov = cfg_.doc().at("network").at("overrides");
    const u64 tune_seed = derive_seed(cfg_.seed(), "tune");
    auto templates = experiment_templates(cfg_, tune_seed, "tune-templates");

    TuneResult r;
    r.n_sub = cfg_.n_sub();
    r.t_sub = s.t_p / r.n_sub;
    r.tau_m = override_or(ov, "tau_m", 0.020);

    if (ov.contains("m")) {
        r.m = ov.at("m");
        if (r.m < 1 || s.d % r.m != 0)
            throw ParamError("network.overrides.m must be a divisor of d");
        r.k = s.d / r.m;
    } else {
        std::tie(r.m, r.k) = choose_m(s.d);
    }

    const int d_active = std::max(1, static_cast<int>(std::lround(s.d * s.active_fraction)));
    r.tau_s = override_or(ov, "tau_s", tau_s_opt_seconds(d_active, s.rate_hz));
    r.tau_f = override_or(ov, "tau_f", r.tau_s / 10.0);
    r.I0 = override_or(ov, "I0", 1.4351);

    if (ov.contains("x_thr")) {
        r.x_thr = ov.at("x_thr");
    } else {
        Rng rng = make_rng(tune_seed, "calib-x-thr");
        r.x_thr = calibrate_x_thr(r.m, r.k, s.d, r.kernel(), r.tau_m, cfg_.dt(), templates,
                                  cfg_.calib_trials(), rng);
    }
    if (ov.contains("V_thr")) {
        r.v_thr = ov.at("V_thr");
    } else {
        Rng rng = make_rng(tune_seed, "calib-v-thr");
        r.v_thr = calibrate_v_thr(r.m, r.k, s.d, r.kernel(), r.x_thr, r.tau_m, cfg_.dt(),
                                  templates, cfg_.calib_trials(), rng);
    }

    if (ov.contains("I0_inh") && ov.contains("tau_s_inh")) {
        r.I0_inh = ov.at("I0_inh");
        r.tau_s_inh = ov.at("tau_s_inh");
        r.I_e_av = 0.0;
    } else {
        const int n_neurons =
            cfg_.neurons() > 0 ? cfg_.neurons() : default_neurons(cfg_.classes(), r.n_sub);
        Rng rng = make_rng(tune_seed, "calib-inhibition");
        Wiring net = Wiring::random({n_neurons, r.m, r.k, s.d}, rng);
        InhibitionCalibration inh = calibrate_inhibition(
            net, r.neuron_config(), r.kernel(), templates, JitterSpec{cfg_.sigma_jitter()},
            cfg_.ep_ini(), r.t_sub, override_or(ov, "I0_inh", cfg_.i0_inh()),
            cfg_.i0_inh_ratio(), cfg_.dt(), rng);
        r.I_e_av = inh.I_e_av;
        r.I0_inh = inh.I0_inh;
        r.tau_s_inh = ov.contains("tau_s_inh") ? ov.at("tau_s_inh").get<double>() : inh.tau_s_inh;
    }
    r.tau_f_inh = override_or(ov, "tau_f_inh", r.tau_s_inh / 10.0);
    return r;
}

TrialConfig Experiment::trial_config(const TuneResult& tune) const {
    TrialConfig t;
    t.classes = cfg_.classes();
    t.n_sub = cfg_.n_sub();
    t.neurons = cfg_.neurons();
    t.max_epochs = cfg_.max_epochs();
    t.sat_window = cfg_.sat_window();
    t.sat_tol = cfg_.sat_tol();
    t.sat_patience = cfg_.sat_patience();
    t.sigma_jitter = cfg_.sigma_jitter();
    t.stim = cfg_.stimulus();
    t.dt = cfg_.dt();
    t.n_r = cfg_.n_r();
    t.rewire_exclusion = cfg_.rewire_exclusion();
    t.rewire_share_cap = cfg_.rewire_share_cap();
    t.n_probes = cfg_.n_probes();
    t.seed = cfg_.seed();
    t.tune = tune;
    return t;
}

std::filesystem::path Experiment::prepare_out_dir(const std::filesystem::path& out_dir) const {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());
    std::ofstream echo(out_dir / "config.json");
    if (!echo) throw IoError("cannot write config echo in " + out_dir.string());
    echo << cfg_.dump() << "\n";
    return out_dir;
}

void Experiment::run_gen(const std::filesystem::path& out_dir) const {
    cfg_.validate();
    prepare_out_dir(out_dir);
    const StimulusParams s = cfg_.stimulus();
    const u64 seed = derive_seed(cfg_.seed(), "gen");
    auto templates = experiment_templates(cfg_, seed, "gen-templates");
    PatternSetMeta meta{s.d, s.t_p, cfg_.classes(), s.rate_hz, s.active_fraction, cfg_.seed()};
    save_patterns(out_dir / "patterns.csv", templates, meta);
}

TuneResult Experiment::run_tune(const std::filesystem::path& out_dir) const {
    TuneResult r = tune();
    prepare_out_dir(out_dir);
    std::ofstream out(out_dir / "tune.json");
    if (!out) throw IoError("cannot write tune.json in " + out_dir.string());
    out << r.to_json() << "\n";
    return r;
}

void Experiment::run_train(const std::filesystem::path& out_dir) const {
    TuneResult tuned = tune();
    prepare_out_dir(out_dir);
    {
        std::ofstream out(out_dir / "tune.json");
        out << tuned.to_json() << "\n";
    }
    TrialConfig base = trial_config(tuned);
    const int trials = cfg_.trials();

    std::vector<TrialResult> results;
    if (cfg_.audit()) {
        // sequential so each trial can own an audit file
        for (int t = 0; t < trials; ++t) {
            TrialConfig c = base;
            c.seed = derive_seed(base.seed, "trial", static_cast<u64>(t));
            std::ofstream audit(out_dir / ("audit_" + std::to_string(t) + ".jsonl"));
            c.audit_stream = &audit;
            results.push_back(run_trial(c));
        }
    } else {
        results = run_trial_batch(base, trials, cfg_.jobs());
    }

    write_epoch_csv(out_dir / "epochs.csv", results);
    write_trial_csv(out_dir / "trials.csv", results);
    for (int t = 0; t < trials; ++t) {
        TrialConfig c = base;
        c.seed = derive_seed(base.seed, "trial", static_cast<u64>(t));
        save_snapshot(out_dir / ("snapshot_" + std::to_string(t) + ".json"), results[t], c);
    }
}

void Experiment::run_sweep(const std::filesystem::path& out_dir) const {
    cfg_.validate();
    prepare_out_dir(out_dir);

    TrialConfig base = trial_config(TuneResult{});  // tune is refilled per point

    SweepSettings settings;
    settings.axis = cfg_.sweep_axis();
    settings.grid = cfg_.sweep_grid();
    settings.trials_per_point = cfg_.sweep_trials_per_point();
    settings.jobs = cfg_.jobs();
    settings.tune_settings.calib_trials = cfg_.calib_trials();
    settings.tune_settings.ep_ini = cfg_.ep_ini();
    settings.tune_settings.i0_inh = cfg_.i0_inh();
    settings.tune_settings.i0_inh_ratio = cfg_.i0_inh_ratio();

    auto points = sweep(base, settings);
    write_sweep_csv(out_dir / "sweep.csv", points);
}

void Experiment::run_mismatch(const std::filesystem::path& out_dir) const {
    TuneResult tuned = tune();
    prepare_out_dir(out_dir);
    TrialConfig base = trial_config(tuned);
    auto rows = degradation_experiment(base, cfg_.mismatch_spec(), cfg_.mismatch_trials(),
                                       cfg_.jobs());
    write_degradation_csv(out_dir / "mismatch.csv", rows);
}

void Experiment::run_eval(const std::filesystem::path& snapshot_path,
                          const std::filesystem::path& patterns_path,
                          const std::filesystem::path& out_dir) const {
    Snapshot snap = load_snapshot(snapshot_path);
    std::vector<std::string> warnings;
    auto patterns = load_patterns(patterns_path, nullptr, &warnings);
    prepare_out_dir(out_dir);
    for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    SimOptions opt;
    opt.dt = cfg_.dt();
    std::ofstream out(out_dir / "eval.csv");
    if (!out) throw IoError("cannot write eval.csv in " + out_dir.string());
    out << "pattern_class,predicted_class,representation\n";
    for (const auto& pat : patterns) {
        if (pat.afferent_count() != snap.geom.inputs)
            throw IntegrityError("pattern dimension does not match snapshot geometry");
        Engine eng(snap.wiring, snap.tune.neuron_config(), snap.tune.kernel(),
                   snap.tune.inhibition(), opt);
        Representation rep = extract_representation(eng.run(pat), snap.n_sub);
        int predicted = 0;  // 0: no learned representation matched
        for (std::size_t c = 0; c < snap.learned.size(); ++c) {
            if (!snap.learned[c].empty() && rep == snap.learned[c]) {
                predicted = static_cast<int>(c) + 1;
                break;
            }
        }
        out << pat.class_label << ',' << predicted << ",\"";
        for (std::size_t i = 0; i < rep.size(); ++i) out << (i ? " " : "") << rep[i];
        out << "\"\n";
    }
}

}  // namespace wta
