// End-to-end acceptance gate for the simulator and benchmark harness.
//
// Runs the benchmark batteries (50 trials per statistical cell; the mismatch
// degradation cells use 20-trial smoke batches for runtime) and prints one
// PASS/FAIL line per criterion. Exit status is the number of failed criteria.
//
// Usage: acceptance [trials_divisor]
//   trials_divisor > 1 shrinks every batch for a quick plumbing check; the
//   verdicts are only meaningful at the default scale.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "wta/harness.hpp"
#include "wta/nonideality.hpp"
#include "wta/plasticity.hpp"

using namespace wta;

namespace {

constexpr u64 kMasterSeed = 2024;

int g_divisor = 1;
int g_failures = 0;

int scaled(int trials) { return std::max(2, trials / g_divisor); }

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

void verdict(int idx, bool pass, const std::string& text) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", idx, text.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void info(const std::string& text) {
    std::printf("        %s\n", text.c_str());
    std::fflush(stdout);
}

struct Batch {
    TrialConfig cfg;
    std::vector<TrialResult> results;
    BatchStats stats;
};

TrialConfig make_config(const char* tag, int classes, int n_sub, double sigma_ratio) {
    TrialConfig cfg;
    cfg.classes = classes;
    cfg.n_sub = n_sub;
    cfg.seed = derive_seed(kMasterSeed, tag);

    AutotuneSettings ts;
    ts.n_sub = n_sub;
    ts.neurons = cfg.effective_neurons();
    ts.seed = derive_seed(cfg.seed, "tune");
    Rng rng = make_rng(ts.seed, "tune-templates");
    std::vector<PatternTemplate> templates;
    for (int c = 1; c <= classes; ++c)
        templates.push_back(gen_poisson_template(cfg.stim.d, cfg.stim.rate_hz, cfg.stim.t_p,
                                                 cfg.stim.active_fraction, c, rng));
    cfg.tune = autotune(templates, cfg.stim.rate_hz, cfg.stim.active_fraction, ts);
    cfg.sigma_jitter = sigma_ratio * cfg.tune.tau_s;
    cfg.rewire_exclusion = RewireExclusion::Branch;
    cfg.rewire_share_cap = 2;
    return cfg;
}

Batch run_batch(const char* tag, int classes, int n_sub, double sigma_ratio, int trials,
                int probes = 0) {
    Batch b;
    b.cfg = make_config(tag, classes, n_sub, sigma_ratio);
    b.cfg.n_probes = probes;
    b.results = run_trial_batch(b.cfg, scaled(trials), 1);
    b.stats = summarize(b.results);
    std::printf(
        "  batch %-10s C=%d n_sub=%-2d sigma/tau_s=%.2f trials=%d: success %.0f%% "
        "ep_sat %.0f cm_final %.4f F1/F2/F3 %d/%d/%d fp %.1f%%\n",
        tag, classes, n_sub, sigma_ratio, b.stats.trials, b.stats.success_pct, b.stats.ep_sat_avg,
        b.stats.cm_final_avg, b.stats.f1, b.stats.f2, b.stats.f3, b.stats.fp_rate_pct);
    std::fflush(stdout);
    return b;
}

// Mean CM trajectory across the batch's saturated trials, truncated to the
// shortest such series.
std::vector<double> mean_cm_curve(const std::vector<TrialResult>& results) {
    std::size_t len = std::numeric_limits<std::size_t>::max();
    int n = 0;
    for (const auto& r : results)
        if (r.saturated) {
            len = std::min(len, r.cm.size());
            ++n;
        }
    if (n == 0) return {};
    std::vector<double> mean(len, 0.0);
    std::vector<int> cnt(len, 0);
    for (const auto& r : results) {
        if (!r.saturated) continue;
        for (std::size_t e = 0; e < len; ++e)
            if (!std::isnan(r.cm[e])) {
                mean[e] += r.cm[e];
                ++cnt[e];
            }
    }
    for (std::size_t e = 0; e < len; ++e)
        mean[e] = cnt[e] > 0 ? mean[e] / cnt[e] : std::numeric_limits<double>::quiet_NaN();
    return mean;
}

// Non-increasing at block (W-epoch) resolution, allowing transient rises up to
// slack_frac of the total decay.
bool decays_monotonically(const std::vector<double>& curve, int window, double slack_frac) {
    std::vector<double> blocks;
    for (std::size_t s = 0; s < curve.size(); s += static_cast<std::size_t>(window)) {
        double sum = 0.0;
        int c = 0;
        const std::size_t end = std::min(curve.size(), s + static_cast<std::size_t>(window));
        for (std::size_t e = s; e < end; ++e)
            if (!std::isnan(curve[e])) {
                sum += curve[e];
                ++c;
            }
        if (c >= window / 2) blocks.push_back(sum / c);
    }
    if (blocks.size() < 2) return false;
    const double drop = blocks.front() - blocks.back();
    if (!(drop > 0.0)) return false;
    const double slack = slack_frac * drop;
    for (std::size_t i = 0; i + 1 < blocks.size(); ++i)
        if (blocks[i + 1] > blocks[i] + slack) return false;
    return true;
}

// ---- deterministic property battery (criterion 10) --------------------------

PatternTemplate poisson_pattern(int d, double duration, double rate, u64 seed) {
    PatternTemplate p;
    p.class_label = 1;
    p.duration = duration;
    p.afferents.resize(d);
    p.active_mask.assign(d, 1);
    Rng rng = make_rng(seed, "pat");
    std::exponential_distribution<double> exp_dist(rate);
    for (auto& aff : p.afferents) {
        double t = exp_dist(rng);
        while (t <= duration) {
            aff.times.push_back(t);
            t += exp_dist(rng);
        }
    }
    return p;
}

FitnessTable replay_fitness(const EventLog& log, const Wiring& w, const KernelParams& kernel,
                            double x_thr) {
    const auto& g = w.geometry();
    FitnessTable table(g.neurons, g.branches, g.inputs);
    auto z_branch = [&](int n, int j, double t) {
        double z = 0.0;
        for (const auto& ev : log.pre)
            if (ev.t <= t) z += w.weight(n, j, ev.line) * kernel_value(kernel, t - ev.t);
        return z;
    };
    auto pre_trace = [&](int line, double t) {
        double e = 0.0;
        for (const auto& ev : log.pre)
            if (ev.line == line && ev.t <= t) e += kernel_value(kernel, t - ev.t);
        return e;
    };
    auto post_trace = [&](int neuron, double t) {
        double f = 0.0;
        for (const auto& ev : log.post)
            if (ev.neuron == neuron && ev.t < t) f += kernel_value(kernel, t - ev.t);
        return f;
    };
    for (const auto& pre : log.pre) {
        std::set<int> fired;
        for (const auto& post : log.post)
            if (post.t < pre.t) fired.insert(post.neuron);
        for (int n : fired) {
            const double f = post_trace(n, pre.t);
            for (int j = 0; j < g.branches; ++j)
                table.at(n, j, pre.line) -=
                    branch_nonlinearity_deriv(z_branch(n, j, pre.t), x_thr) * f;
        }
    }
    for (const auto& post : log.post) {
        for (int j = 0; j < g.branches; ++j) {
            const double bd = branch_nonlinearity_deriv(z_branch(post.neuron, j, post.t), x_thr);
            if (bd == 0.0) continue;
            for (int i = 0; i < g.inputs; ++i)
                table.at(post.neuron, j, i) += bd * pre_trace(i, post.t);
        }
    }
    return table;
}

bool logs_equal(const EventLog& a, const EventLog& b) {
    if (a.pre.size() != b.pre.size() || a.post.size() != b.post.size()) return false;
    for (std::size_t i = 0; i < a.pre.size(); ++i)
        if (a.pre[i].t != b.pre[i].t || a.pre[i].line != b.pre[i].line) return false;
    for (std::size_t i = 0; i < a.post.size(); ++i)
        if (a.post[i].t != b.post[i].t || a.post[i].neuron != b.post[i].neuron) return false;
    return true;
}

bool same_series(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isnan(a[i]) && std::isnan(b[i])) continue;
        if (a[i] != b[i]) return false;
    }
    return true;
}

TrialConfig property_trial_config(u64 seed) {
    TrialConfig cfg;
    cfg.classes = 2;
    cfg.max_epochs = 6;
    cfg.stim.d = 20;
    cfg.seed = seed;
    Rng rng = make_rng(derive_seed(seed, "tune"), "tune-templates");
    std::vector<PatternTemplate> templates;
    for (int c = 1; c <= 2; ++c)
        templates.push_back(gen_poisson_template(20, cfg.stim.rate_hz, cfg.stim.t_p, 1.0, c, rng));
    AutotuneSettings ts;
    ts.neurons = cfg.effective_neurons();
    ts.calib_trials = 10;
    ts.ep_ini = 1;
    ts.seed = derive_seed(seed, "tune");
    cfg.tune = autotune(templates, cfg.stim.rate_hz, cfg.stim.active_fraction, ts);
    return cfg;
}

std::vector<std::string> run_property_battery() {
    std::vector<std::string> failed;
    auto prop = [&](const char* name, bool ok) {
        if (!ok) failed.push_back(name);
    };

    // unit-peak current kernel
    {
        KernelParams k{1.4351, 0.02, 0.002};
        prop("kernel-peak", std::abs(kernel_value(k, kernel_peak_time(k)) - 1.0) <= 1e-3);
    }
    // branch-count optimum for the default 100-line front end
    {
        auto [m, k] = choose_m(100);
        prop("choose-m-100", m == 25 && k == 4);
    }
    // wiring invariant across repeated rewiring
    {
        bool ok = true;
        try {
            WiringGeometry geom{1, 2, 2, 10};
            Wiring w(geom, {5, 6, 7, 8});
            FitnessTable c(1, 2, 10);
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 10; ++i) c.at(0, j, i) = i < 5 ? 1.0 : -1.0;
            EventLog log;
            log.post.push_back({0.01, 0, 0.01});
            Rng rng = make_rng(11, "walk");
            for (int it = 0; it < 8; ++it) {
                rewire_after_pattern(w, c, log, {10, RewireExclusion::None, 0}, rng);
                w.check_invariant();
            }
            for (int j = 0; j < 2 && ok; ++j)
                for (int p = 0; p < 2; ++p) ok = ok && w.line(0, j, p) < 5;
        } catch (const std::exception&) {
            ok = false;
        }
        prop("rewire-invariant", ok);
    }
    // fitness bookkeeping observes without perturbing, and equals the replay
    // oracle
    {
        WiringGeometry geom{3, 2, 2, 8};
        Rng rng = make_rng(21, "fit");
        Wiring w = Wiring::random(geom, rng);
        const double x_thr = 1.2;
        NeuronConfig ncfg{x_thr, 0.4, 0.02, 1.0};
        KernelParams kernel{1.4351, 0.02, 0.002};
        InhibitionParams inh{2.0, 0.08, 0.008};
        PatternTemplate pat = poisson_pattern(8, 0.3, 25.0, 4);

        Engine eng(w, ncfg, kernel, inh, {});
        EventLog bare = eng.run(pat);
        FitnessTable online(geom.neurons, geom.branches, geom.inputs);
        StdpNrw hook(online);
        EventLog hooked = eng.run(pat, &hook);
        prop("hook-invariance", logs_equal(bare, hooked) && !bare.post.empty());

        FitnessTable oracle = replay_fitness(hooked, w, kernel, x_thr);
        bool match = true;
        for (int n = 0; n < geom.neurons && match; ++n)
            for (int j = 0; j < geom.branches && match; ++j)
                for (int i = 0; i < geom.inputs && match; ++i) {
                    const double got = online.at(n, j, i);
                    const double want = oracle.at(n, j, i);
                    if (std::abs(got - want) > 1e-6 * std::max(1e-6, std::abs(want)))
                        match = false;
                }
        prop("fitness-replay", match);
    }
    // convergence measure reduces to the latency average without subpatterns
    {
        bool ok = true;
        for (double x : {0.01, 0.2, 1.5}) ok = ok && convergence_measure(x, 1, 0.5) == x;
        prop("cm-identity", ok);
    }
    // inhibition amplitude/decay round-trip: the restart current relaxes back
    // to the average excitatory drive after one subpattern window
    {
        TrialConfig cfg = property_trial_config(301);
        const TuneResult& t = cfg.tune;
        const double back = kernel_value(t.I0_inh, t.tau_s_inh, t.tau_f_inh, t.t_sub);
        prop("inhibition-round-trip", std::abs(back - t.I_e_av) <= 0.02 * t.I_e_av);
    }
    // zero-jitter / zero-spread runs are bit-identical to ideal runs
    {
        TrialConfig cfg = property_trial_config(302);
        TrialResult ideal = run_trial(cfg);
        MismatchSpec zero;
        zero.cv_I0 = zero.cv_tau_s = zero.cv_cb = zero.cv_Vthr = zero.cv_cc = 0.0;
        zero = zero.with_all();
        cfg.mismatch = &zero;
        TrialResult mm = run_trial(cfg);
        prop("zero-spread-identity", same_series(mm.cm, ideal.cm) &&
                                         mm.wiring.slot_lines() == ideal.wiring.slot_lines());
        cfg.mismatch = nullptr;
        TrialResult again = run_trial(cfg);
        prop("seeded-rerun-identity", same_series(again.cm, ideal.cm) &&
                                          again.wiring.slot_lines() == ideal.wiring.slot_lines());
    }
    return failed;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += ", ";
        out += s;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_divisor = std::max(1, std::atoi(argv[1]));
    std::printf("acceptance battery (trials divisor %d)\n", g_divisor);
    std::fflush(stdout);

    // ---- clean-input batteries ---------------------------------------------
    Batch a2 = run_batch("base-c2", 2, 1, 0.0, 50);
    Batch a4 = run_batch("base-c4", 4, 1, 0.0, 50);
    Batch a6 = run_batch("base-c6", 6, 1, 0.0, 50);
    Batch s5c2 = run_batch("seq5-c2", 2, 5, 0.0, 50);
    Batch s5c4 = run_batch("seq5-c4", 4, 5, 0.0, 50);
    Batch s5c6 = run_batch("seq5-c6", 6, 5, 0.0, 50);
    Batch s10 = run_batch("seq10-c4", 4, 10, 0.0, 50);

    // ---- jittered batteries (full trial count: verdicts here are the most
    // sensitive to sampling noise) -------------------------------------------
    Batch j1a = run_batch("jit1-a", 4, 1, 0.10, 50, 200);
    Batch j5a = run_batch("jit5-a", 4, 5, 0.10, 50, 200);
    Batch j10a = run_batch("jit10-a", 4, 10, 0.10, 50, 200);
    Batch j1b = run_batch("jit1-b", 4, 1, 0.15, 50);
    Batch j5b = run_batch("jit5-b", 4, 5, 0.15, 50);
    Batch j10b = run_batch("jit10-b", 4, 10, 0.15, 50);
    Batch j1c = run_batch("jit1-c", 4, 1, 0.20, 50);
    Batch j5c = run_batch("jit5-c", 4, 5, 0.20, 50);
    Batch j10c = run_batch("jit10-c", 4, 10, 0.20, 50);

    // ---- population-size sweep ---------------------------------------------
    TrialConfig sweep_base = make_config("sweep-nc", 4, 1, 0.0);
    SweepSettings sw;
    sw.axis = SweepAxis::NOverC;
    sw.grid = {5.0, 8.0, 11.0, 14.0};
    sw.trials_per_point = scaled(50);
    sw.jobs = 1;
    std::vector<SweepPoint> nc_points = sweep(sweep_base, sw);
    for (const auto& p : nc_points)
        std::printf("  sweep N/C=%.0f: success %.0f%% ep_sat %.0f\n", p.point,
                    p.stats.success_pct, p.stats.ep_sat_avg);
    std::fflush(stdout);

    // ---- hardware-spread degradation ---------------------------------------
    TrialConfig mm1 = make_config("mm1", 4, 1, 0.10);
    MismatchSpec spread;  // default per-source sigma/mu figures
    std::vector<DegradationRow> deg = degradation_experiment(mm1, spread, scaled(20), 1);
    for (const auto& r : deg)
        std::printf("  mismatch %-6s n_sub=1: success %.0f%% (ideal %.0f%%)\n", r.label.c_str(),
                    r.success_pct, r.ideal_pct);
    std::fflush(stdout);

    TrialConfig mm5 = make_config("mm5", 4, 5, 0.10);
    Batch mm5_ideal;
    mm5_ideal.cfg = mm5;
    mm5_ideal.results = run_trial_batch(mm5, scaled(20), 1);
    mm5_ideal.stats = summarize(mm5_ideal.results);
    MismatchSpec all5 = spread.with_all();
    mm5.mismatch = &all5;
    Batch mm5_all;
    mm5_all.cfg = mm5;
    mm5_all.results = run_trial_batch(mm5, scaled(20), 1);
    mm5_all.stats = summarize(mm5_all.results);
    std::printf("  mismatch ideal/all n_sub=5: success %.0f%% / %.0f%%\n",
                mm5_ideal.stats.success_pct, mm5_all.stats.success_pct);
    std::fflush(stdout);

    std::printf("\n");

    // ---- criterion 1: clean-input success rates, single-winner mode --------
    {
        const double t2 = 92.0, t4 = 88.0, t6 = 82.0, tol = 10.0;
        const bool ok = std::abs(a2.stats.success_pct - t2) <= tol &&
                        std::abs(a4.stats.success_pct - t4) <= tol &&
                        std::abs(a6.stats.success_pct - t6) <= tol;
        verdict(1, ok,
                fmt("clean success C=2/4/6 = %.0f/%.0f/%.0f%% (targets 92/88/82 +/- %.0fpt)",
                    a2.stats.success_pct, a4.stats.success_pct, a6.stats.success_pct, tol));
    }

    // ---- criterion 2: clean-input success, sequence modes ------------------
    {
        const double floor_pct = 95.0;
        const bool ok = s5c4.stats.success_pct >= floor_pct && s10.stats.success_pct >= floor_pct;
        verdict(2, ok,
                fmt("clean success n_sub=5/10 = %.0f/%.0f%% (floor %.0f%%)",
                    s5c4.stats.success_pct, s10.stats.success_pct, floor_pct));
    }

    // ---- criterion 3: population-size sweep shape --------------------------
    {
        const double tol = 5.0;
        bool ok = nc_points.size() == 4;
        for (std::size_t i = 0; ok && i + 1 < nc_points.size(); ++i) {
            const double cur = nc_points[i].stats.success_pct;
            const double nxt = nc_points[i + 1].stats.success_pct;
            if (nc_points[i + 1].point <= 11.0) {
                ok = nxt >= cur - tol;  // non-decreasing up to the plateau
            } else {
                ok = std::abs(nxt - cur) <= tol;  // flat afterwards
            }
        }
        std::string pts;
        for (const auto& p : nc_points) pts += fmt("%.0f:%.0f%% ", p.point, p.stats.success_pct);
        verdict(3, ok, "success vs N/C " + pts + fmt("(plateau at 11, +/-%.0fpt)", tol));
    }

    // ---- criterion 4: training-length averages and ordering ----------------
    {
        auto in_band = [](double v, double anchor) {
            return v >= 0.7 * anchor && v <= 1.3 * anchor;
        };
        const bool bands1 = in_band(a2.stats.ep_sat_avg, 149.0) &&
                            in_band(a4.stats.ep_sat_avg, 157.0) &&
                            in_band(a6.stats.ep_sat_avg, 165.0);
        const bool bands5 = in_band(s5c2.stats.ep_sat_avg, 210.0) &&
                            in_band(s5c4.stats.ep_sat_avg, 221.0) &&
                            in_band(s5c6.stats.ep_sat_avg, 230.0);
        const bool mono = a4.stats.ep_sat_avg < s5c4.stats.ep_sat_avg &&
                          s5c4.stats.ep_sat_avg < s10.stats.ep_sat_avg;
        verdict(4, bands1 && bands5 && mono,
                fmt("ep_sat n_sub=1 C=2/4/6 = %.0f/%.0f/%.0f (anchors 149/157/165 +/-30%%), "
                    "n_sub=5 = %.0f/%.0f/%.0f (anchors 210/221/230 +/-30%%), "
                    "ordering %.0f < %.0f < %.0f %s",
                    a2.stats.ep_sat_avg, a4.stats.ep_sat_avg, a6.stats.ep_sat_avg,
                    s5c2.stats.ep_sat_avg, s5c4.stats.ep_sat_avg, s5c6.stats.ep_sat_avg,
                    a4.stats.ep_sat_avg, s5c4.stats.ep_sat_avg, s10.stats.ep_sat_avg,
                    mono ? "holds" : "violated"));
    }

    // ---- criterion 5: convergence-measure decay shape ----------------------
    {
        bool shape = true;
        for (const Batch* b : {&a2, &a4, &a6})
            shape = shape && decays_monotonically(mean_cm_curve(b->results), 20, 0.10);
        verdict(5, shape,
                fmt("CM decays monotonically to saturation (block means, 10%% slack); "
                    "final CM C=2/4/6 = %.1f/%.1f/%.1f ms (soft anchors 44.8/53.1/56.1)",
                    1e3 * a2.stats.cm_final_avg, 1e3 * a4.stats.cm_final_avg,
                    1e3 * a6.stats.cm_final_avg));
    }

    // ---- criterion 6: jitter robustness ordering ---------------------------
    {
        const double tol = 5.0;
        auto ordered = [&](const Batch& b1, const Batch& b5, const Batch& b10) {
            return b1.stats.success_pct >= b5.stats.success_pct - tol &&
                   b5.stats.success_pct >= b10.stats.success_pct - tol;
        };
        const bool order_ok = ordered(j1b, j5b, j10b) && ordered(j1c, j5c, j10c);
        auto non_increasing = [&](std::vector<const Batch*> curve) {
            for (std::size_t i = 0; i + 1 < curve.size(); ++i)
                if (curve[i + 1]->stats.success_pct > curve[i]->stats.success_pct + tol)
                    return false;
            return true;
        };
        const bool curves_ok = non_increasing({&a4, &j1a, &j1b, &j1c}) &&
                               non_increasing({&s5c4, &j5a, &j5b, &j5c}) &&
                               non_increasing({&s10, &j10a, &j10b, &j10c});
        verdict(6, order_ok && curves_ok,
                fmt("success at sigma/tau_s=0.15: %.0f/%.0f/%.0f%%, 0.20: %.0f/%.0f/%.0f%% "
                    "for n_sub=1/5/10 (need 1 >= 5 >= 10 within %.0fpt; curves non-increasing %s)",
                    j1b.stats.success_pct, j5b.stats.success_pct, j10b.stats.success_pct,
                    j1c.stats.success_pct, j5c.stats.success_pct, j10c.stats.success_pct, tol,
                    curves_ok ? "ok" : "violated"));
    }

    // ---- criterion 7: failure-mode taxonomy at moderate jitter -------------
    {
        const bool f1_largest = j1a.stats.f1 >= j1a.stats.f2 && j1a.stats.f1 >= j1a.stats.f3;
        const bool f1_dip = j5a.stats.f1 <= j1a.stats.f1 && j5a.stats.f1 <= j10a.stats.f1;
        verdict(7, f1_largest && f1_dip,
                fmt("failure counts F1/F2/F3 at sigma/tau_s=0.1: n_sub=1 %d/%d/%d, "
                    "n_sub=5 %d/%d/%d, n_sub=10 %d/%d/%d (F1 weakly largest at n_sub=1: %s; "
                    "F1 dips at n_sub=5: %s)",
                    j1a.stats.f1, j1a.stats.f2, j1a.stats.f3, j5a.stats.f1, j5a.stats.f2,
                    j5a.stats.f3, j10a.stats.f1, j10a.stats.f2, j10a.stats.f3,
                    f1_largest ? "yes" : "no", f1_dip ? "yes" : "no"));
    }

    // ---- criterion 8: false-positive rates ---------------------------------
    {
        const bool ok = j1a.stats.fp_rate_pct >= 2.0 && j1a.stats.fp_rate_pct <= 15.0 &&
                        j5a.stats.fp_rate_pct <= 2.0 && j10a.stats.fp_rate_pct <= 2.0;
        verdict(8, ok,
                fmt("false-positive rates n_sub=1/5/10 = %.1f/%.1f/%.1f%% "
                    "(need 2-15%% / <=2%% / <=2%%)",
                    j1a.stats.fp_rate_pct, j5a.stats.fp_rate_pct, j10a.stats.fp_rate_pct));
    }

    // ---- criterion 9: hardware-spread degradation --------------------------
    {
        const double ideal1 = deg.front().success_pct;
        double all_drop = 0.0, cb_drop = 0.0, min_other = 1e9;
        for (const auto& r : deg) {
            const double drop = ideal1 - r.success_pct;
            if (r.label == "all") all_drop = drop;
            else if (r.label == "cb") cb_drop = drop;
            else if (r.label != "ideal") min_other = std::min(min_other, drop);
        }
        const double drop5 = mm5_ideal.stats.success_pct - mm5_all.stats.success_pct;
        const bool ok = all_drop <= 15.0 && drop5 <= 15.0 && cb_drop <= min_other + 5.0;
        verdict(9, ok,
                fmt("all-source drop %.0fpt (n_sub=1, anchor 8) / %.0fpt (n_sub=5, anchor 6), "
                    "bound 15pt; cb-only drop %.0fpt vs best other single %.0fpt (+5pt slack)",
                    all_drop, drop5, cb_drop, min_other));
    }

    // ---- criterion 10: deterministic property suite ------------------------
    {
        std::vector<std::string> failed = run_property_battery();
        verdict(10, failed.empty(),
                failed.empty() ? "property battery: all checks hold"
                               : "property battery failures: " + join(failed));
    }

    std::printf("\n%d of 10 criteria failed\n", g_failures);
    return g_failures;
}
