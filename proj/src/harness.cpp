#include "wta/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace wta {

const char* failure_mode_name(FailureMode f) {
    switch (f) {
        case FailureMode::None: return "none";
        case FailureMode::F1: return "F1";
        case FailureMode::F2: return "F2";
        case FailureMode::F3: return "F3";
    }
    return "?";
}

const char* sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::NOverC: return "N_over_C";
        case SweepAxis::SigmaJitter: return "sigma_jitter";
        case SweepAxis::NSub: return "n_sub";
    }
    return "?";
}

double TrialResult::final_cm() const {
    for (auto it = cm.rbegin(); it != cm.rend(); ++it)
        if (std::isfinite(*it)) return *it;
    return std::numeric_limits<double>::quiet_NaN();
}

Representation extract_representation(const EventLog& log, int n_sub) {
    Representation rep;
    if (log.post.empty()) return rep;
    if (n_sub == 1) {
        rep.push_back(log.post.front().neuron);
    } else {
        rep.reserve(log.post.size());
        for (const auto& ev : log.post) rep.push_back(ev.neuron);
    }
    return rep;
}

FailureMode classify_outcome(const std::vector<Representation>& learned,
                             const std::vector<Representation>& test) {
    for (std::size_t a = 0; a < learned.size(); ++a) {
        if (learned[a].empty()) return FailureMode::F1;
        for (std::size_t b = a + 1; b < learned.size(); ++b)
            if (learned[a] == learned[b]) return FailureMode::F1;
    }
    for (std::size_t c = 0; c < test.size(); ++c)
        for (std::size_t o = 0; o < learned.size(); ++o)
            if (o != c && test[c] == learned[o]) return FailureMode::F2;
    for (std::size_t c = 0; c < test.size(); ++c) {
        bool matched = false;
        for (const auto& l : learned)
            if (test[c] == l) matched = true;
        if (!matched) return FailureMode::F3;
    }
    return FailureMode::None;
}

namespace {

std::vector<PatternTemplate> make_class_templates(const TrialConfig& cfg, Rng& rng) {
    std::vector<PatternTemplate> templates;
    templates.reserve(cfg.classes);
    for (int c = 1; c <= cfg.classes; ++c)
        templates.push_back(gen_poisson_template(cfg.stim.d, cfg.stim.rate_hz, cfg.stim.t_p,
                                                 cfg.stim.active_fraction, c, rng));
    return templates;
}

// Saturation: relative change between the two most recent non-overlapping
// W-epoch moving averages of CM below tolerance; requires 2W finite epochs.
// CM carries the additive constant -(n_sub-1)*T_sub/2, which would make a
// relative comparison scale-dependent on n_sub; the offset parameter removes
// it so the scale is the per-subpattern latency itself.
bool cm_saturated(const std::vector<double>& cm, int window, double tol, double offset) {
    const int e = static_cast<int>(cm.size());
    if (e < 2 * window) return false;
    double ma1 = 0.0, ma2 = 0.0;
    for (int i = e - window; i < e; ++i) {
        if (!std::isfinite(cm[i])) return false;
        ma1 += cm[i];
    }
    for (int i = e - 2 * window; i < e - window; ++i) {
        if (!std::isfinite(cm[i])) return false;
        ma2 += cm[i];
    }
    ma1 /= window;
    ma2 /= window;
    const double scale = std::max({std::abs(ma1 + offset), std::abs(ma2 + offset), 1e-6});
    return std::abs(ma1 - ma2) < tol * scale;
}

}  // namespace

TrialResult run_trial(const TrialConfig& cfg) {
    if (cfg.classes < 1) throw ParamError("trial needs classes >= 1");
    if (cfg.n_sub < 1) throw ParamError("n_sub must be >= 1");
    if (cfg.max_epochs < 1) throw ParamError("max_epochs must be >= 1");
    const TuneResult& tune = cfg.tune;
    if (tune.m * tune.k != cfg.stim.d)
        throw ParamError("tuned geometry m*k must equal the input dimension d");

    const int n_neurons = cfg.effective_neurons();
    const WiringGeometry geom{n_neurons, tune.m, tune.k, cfg.stim.d};
    const KernelParams kernel = tune.kernel();
    const InhibitionParams inhibition = tune.inhibition();
    const NeuronConfig ncfg = tune.neuron_config();
    SimOptions opt;
    opt.dt = cfg.dt;

    Rng rng_tpl = make_rng(cfg.seed, "templates");
    Rng rng_wiring = make_rng(cfg.seed, "wiring");
    Rng rng_rewire = make_rng(cfg.seed, "rewire");

    const std::vector<PatternTemplate> templates = make_class_templates(cfg, rng_tpl);
    const JitterSpec jitter{cfg.sigma_jitter};

    TrialResult result;
    result.wiring = Wiring::random(geom, rng_wiring);

    std::optional<MismatchInstance> mismatch;
    if (cfg.mismatch != nullptr && cfg.mismatch->any_enabled()) {
        Rng rng_mm = make_rng(cfg.seed, "mismatch");
        mismatch = sample_mismatch(*cfg.mismatch, geom, rng_mm);
    }
    const MismatchInstance* mm = mismatch ? &*mismatch : nullptr;

    FitnessTable fitness(n_neurons, tune.m, cfg.stim.d);
    const RewireConfig rewire_cfg{cfg.effective_n_r(), cfg.rewire_exclusion, cfg.rewire_share_cap};

    std::vector<Representation> epoch_reps(cfg.classes);
    result.learned.assign(cfg.classes, {});

    const int patience = std::max(1, cfg.sat_patience);
    int sat_streak = 0;
    for (int e = 0; e < cfg.max_epochs; ++e) {
        Rng rng_epoch = make_rng(cfg.seed, "epoch", static_cast<u64>(e));
        Epoch ep = make_epoch(templates, jitter, rng_epoch);
        double latency_sum = 0.0;
        long spike_count = 0;
        std::fill(epoch_reps.begin(), epoch_reps.end(), Representation{});

        for (const auto& pattern : ep.patterns) {
            Engine eng(result.wiring, ncfg, kernel, inhibition, opt, mm);
            StdpNrw hook(fitness);
            EventLog log = eng.run(pattern, &hook);
            for (const auto& ev : log.post) {
                latency_sum += ev.latency;
                ++spike_count;
            }
            epoch_reps[pattern.class_label - 1] = extract_representation(log, cfg.n_sub);
            RewireReport report =
                rewire_after_pattern(result.wiring, fitness, log, rewire_cfg, rng_rewire);
            if (cfg.audit_stream) report.to_jsonl(*cfg.audit_stream);
            reset_fitness(fitness);
        }

        // Sum of the pattern's post-spike latencies, averaged
        // over the epoch's C patterns.
        const double l_mean = spike_count > 0
                                  ? latency_sum / static_cast<double>(ep.patterns.size())
                                  : std::numeric_limits<double>::quiet_NaN();
        result.l_mean.push_back(l_mean);
        result.cm.push_back(convergence_measure(l_mean, cfg.n_sub, tune.t_sub));
        result.learned = epoch_reps;

        // A single quiet window can be a mid-training stall; demand the
        // criterion hold for sat_patience consecutive epochs and date the
        // saturation to the start of that run.
        if (cm_saturated(result.cm, cfg.sat_window, cfg.sat_tol,
                         (cfg.n_sub - 1) * tune.t_sub / 2.0)) {
            if (++sat_streak >= patience) {
                result.saturated = true;
                result.ep_sat = e + 2 - patience;
                break;
            }
        } else {
            sat_streak = 0;
        }
    }
    if (!result.saturated) result.ep_sat = static_cast<int>(result.cm.size());

    // Success test: one fresh jittered pattern per class, plasticity off.
    bool learned_ok = true;
    for (const auto& rep : result.learned)
        if (rep.empty()) learned_ok = false;
    Rng rng_test = make_rng(cfg.seed, "test");
    result.test.assign(cfg.classes, {});
    if (learned_ok) {
        for (int c = 0; c < cfg.classes; ++c) {
            PatternTemplate probe_pattern = apply_jitter(templates[c], jitter, rng_test);
            Engine eng(result.wiring, ncfg, kernel, inhibition, opt, mm);
            EventLog log = eng.run(probe_pattern);
            result.test[c] = extract_representation(log, cfg.n_sub);
        }
    }
    result.failure = classify_outcome(result.learned, result.test);
    result.success = result.failure == FailureMode::None;

    if (cfg.n_probes > 0) {
        Rng rng_probe = make_rng(cfg.seed, "probe");
        result.fp_count =
            false_positive_probe(result.wiring, cfg, result.learned, cfg.n_probes, rng_probe);
        result.probes = cfg.n_probes;
    }
    return result;
}

int false_positive_probe(const Wiring& wiring, const TrialConfig& cfg,
                         const std::vector<Representation>& learned, int n_probes, Rng& rng) {
    SimOptions opt;
    opt.dt = cfg.dt;
    int fp = 0;
    for (int p = 0; p < n_probes; ++p) {
        PatternTemplate pat = gen_poisson_template(cfg.stim.d, cfg.stim.rate_hz, cfg.stim.t_p,
                                                   cfg.stim.active_fraction, 0, rng);
        Engine eng(wiring, cfg.tune.neuron_config(), cfg.tune.kernel(), cfg.tune.inhibition(),
                   opt);
        Representation rep = extract_representation(eng.run(pat), cfg.n_sub);
        if (rep.empty()) continue;
        for (const auto& l : learned) {
            if (!l.empty() && rep == l) {
                ++fp;
                break;
            }
        }
    }
    return fp;
}

std::vector<TrialResult> run_trial_batch(const TrialConfig& cfg, int trials, int jobs) {
    if (trials < 1) throw ParamError("trial batch needs trials >= 1");
    std::vector<TrialResult> results(trials);
    std::vector<std::exception_ptr> errors(trials);
    auto worker = [&](int first, int stride) {
        for (int t = first; t < trials; t += stride) {
            TrialConfig c = cfg;
            c.seed = derive_seed(cfg.seed, "trial", static_cast<u64>(t));
            c.audit_stream = nullptr;  // workers must not interleave audit output
            try {
                results[t] = run_trial(c);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    jobs = std::max(1, std::min(jobs, trials));
    if (jobs == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> threads;
        for (int j = 0; j < jobs; ++j) threads.emplace_back(worker, j, jobs);
        for (auto& th : threads) th.join();
    }
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
    return results;
}

BatchStats summarize(const std::vector<TrialResult>& results) {
    BatchStats s;
    s.trials = static_cast<int>(results.size());
    if (results.empty()) return s;
    int ok = 0;
    long ep_sum = 0;
    double cm_sum = 0.0;
    int cm_n = 0;
    long fp = 0, probes = 0;
    for (const auto& r : results) {
        if (r.success) ++ok;
        if (r.failure == FailureMode::F1) ++s.f1;
        if (r.failure == FailureMode::F2) ++s.f2;
        if (r.failure == FailureMode::F3) ++s.f3;
        ep_sum += r.ep_sat;
        const double cm = r.final_cm();
        if (std::isfinite(cm)) {
            cm_sum += cm;
            ++cm_n;
        }
        fp += r.fp_count;
        probes += r.probes;
    }
    s.success_pct = 100.0 * ok / s.trials;
    s.ep_sat_avg = static_cast<double>(ep_sum) / s.trials;
    s.cm_final_avg = cm_n > 0 ? cm_sum / cm_n : std::numeric_limits<double>::quiet_NaN();
    s.fp_rate_pct = probes > 0 ? 100.0 * fp / probes : 0.0;
    return s;
}

std::vector<SweepPoint> sweep(const TrialConfig& base, const SweepSettings& settings) {
    if (settings.grid.empty()) throw ParamError("sweep grid must be non-empty");
    std::vector<SweepPoint> out;
    out.reserve(settings.grid.size());
    const double tau_s_ref = tau_s_opt_seconds(
        std::max(1, static_cast<int>(std::lround(base.stim.d * base.stim.active_fraction))),
        base.stim.rate_hz);

    for (std::size_t pi = 0; pi < settings.grid.size(); ++pi) {
        const double point = settings.grid[pi];
        TrialConfig cfg = base;
        switch (settings.axis) {
            case SweepAxis::NOverC:
                cfg.neurons = static_cast<int>(std::lround(point * base.classes));
                break;
            case SweepAxis::SigmaJitter:
                cfg.sigma_jitter = point * tau_s_ref;  // grid is sigma_jitter / tau_s
                break;
            case SweepAxis::NSub:
                cfg.n_sub = static_cast<int>(std::lround(point));
                cfg.neurons = 0;  // track the n_sub-dependent default
                break;
        }
        cfg.seed = derive_seed(base.seed, sweep_axis_name(settings.axis), pi);

        AutotuneSettings ts = settings.tune_settings;
        ts.n_sub = cfg.n_sub;
        ts.neurons = cfg.effective_neurons();
        ts.sigma_jitter = cfg.sigma_jitter;
        ts.dt = cfg.dt;
        ts.seed = derive_seed(cfg.seed, "tune");
        Rng rng_tune = make_rng(ts.seed, "tune-templates");
        TrialConfig tune_probe = cfg;
        auto tune_templates = make_class_templates(tune_probe, rng_tune);
        cfg.tune = autotune(tune_templates, cfg.stim.rate_hz, cfg.stim.active_fraction, ts);

        SweepPoint sp;
        sp.point = point;
        sp.stats = summarize(run_trial_batch(cfg, settings.trials_per_point, settings.jobs));
        out.push_back(sp);
    }
    return out;
}

void write_epoch_csv(const std::filesystem::path& path, const std::vector<TrialResult>& results) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string());
    out << "trial_id,epoch,l_mean_s,CM_s\n";
    char buf[96];
    for (std::size_t t = 0; t < results.size(); ++t) {
        const auto& r = results[t];
        for (std::size_t e = 0; e < r.cm.size(); ++e) {
            std::snprintf(buf, sizeof(buf), "%zu,%zu,%.6f,%.6f\n", t, e + 1, r.l_mean[e], r.cm[e]);
            out << buf;
        }
    }
}

void write_trial_csv(const std::filesystem::path& path, const std::vector<TrialResult>& results) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string());
    out << "trial_id,success,failure_mode,ep_sat,fp_rate\n";
    char buf[96];
    for (std::size_t t = 0; t < results.size(); ++t) {
        const auto& r = results[t];
        const double fp_rate = r.probes > 0 ? 100.0 * r.fp_count / r.probes : 0.0;
        std::snprintf(buf, sizeof(buf), "%zu,%d,%s,%d,%.2f\n", t, r.success ? 1 : 0,
                      failure_mode_name(r.failure), r.ep_sat, fp_rate);
        out << buf;
    }
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string());
    out << "point,success_pct,ep_sat_avg,cm_final_avg\n";
    char buf[128];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof(buf), "%g,%.2f,%.2f,%.6f\n", p.point, p.stats.success_pct,
                      p.stats.ep_sat_avg, p.stats.cm_final_avg);
        out << buf;
    }
}

void save_snapshot(const std::filesystem::path& path, const TrialResult& result,
                   const TrialConfig& cfg) {
    const auto& geom = result.wiring.geometry();
    nlohmann::json j;
    j["d"] = geom.inputs;
    j["m"] = geom.branches;
    j["k"] = geom.slots_per_branch;
    j["N"] = geom.neurons;
    j["n_sub"] = cfg.n_sub;
    j["stimulus"] = {{"d", cfg.stim.d},
                     {"rate", cfg.stim.rate_hz},
                     {"T_p", cfg.stim.t_p},
                     {"active_fraction", cfg.stim.active_fraction}};
    j["tune"] = nlohmann::json::parse(cfg.tune.to_json());
    j["learned"] = result.learned;
    auto& wiring = j["wiring"];
    for (int n = 0; n < geom.neurons; ++n) {
        auto counts = result.wiring.count_matrix(n);
        nlohmann::json neuron = nlohmann::json::array();
        for (int jb = 0; jb < geom.branches; ++jb)
            neuron.push_back(std::vector<int>(counts.begin() + static_cast<std::size_t>(jb) * geom.inputs,
                                              counts.begin() + static_cast<std::size_t>(jb + 1) * geom.inputs));
        wiring.push_back(neuron);
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string());
    out << j.dump(1) << "\n";
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(path.string() + ": " + ex.what());
    }
    Snapshot s;
    try {
        s.geom = WiringGeometry{j.at("N"), j.at("m"), j.at("k"), j.at("d")};
        s.n_sub = j.at("n_sub");
        s.tune = TuneResult::from_json(j.at("tune").dump());
        s.stim.d = j.at("stimulus").at("d");
        s.stim.rate_hz = j.at("stimulus").at("rate");
        s.stim.t_p = j.at("stimulus").at("T_p");
        s.stim.active_fraction = j.at("stimulus").at("active_fraction");
        for (const auto& rep : j.at("learned")) s.learned.push_back(rep.get<Representation>());

        const auto& wiring = j.at("wiring");
        if (static_cast<int>(wiring.size()) != s.geom.neurons)
            throw IntegrityError(path.string() + ": wiring matrix count does not match N");
        std::vector<std::int16_t> slots;
        slots.reserve(static_cast<std::size_t>(s.geom.neurons) * s.geom.slots_per_neuron());
        for (const auto& neuron : wiring) {
            if (static_cast<int>(neuron.size()) != s.geom.branches)
                throw IntegrityError(path.string() + ": branch count does not match m");
            for (const auto& row : neuron) {
                if (static_cast<int>(row.size()) != s.geom.inputs)
                    throw IntegrityError(path.string() + ": row length does not match d");
                int placed = 0;
                for (int i = 0; i < s.geom.inputs; ++i) {
                    const int w = row[i];
                    if (w < 0) throw IntegrityError(path.string() + ": negative weight");
                    for (int rpt = 0; rpt < w; ++rpt) slots.push_back(static_cast<std::int16_t>(i));
                    placed += w;
                }
                if (placed != s.geom.slots_per_branch)
                    throw IntegrityError(path.string() + ": branch row sum does not equal k");
            }
        }
        s.wiring = Wiring(s.geom, std::move(slots));
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(path.string() + ": " + ex.what());
    }
    return s;
}

}  // namespace wta
