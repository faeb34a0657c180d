#include "wta/autotune.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace wta {

double capacity_bits(int d, int k, int m) {
    if (d < 1 || k < 1 || m < 1) throw ParamError("capacity requires d, k, m >= 1");
    // inner term T = C(k+d-1, k)
    const double log_t = std::lgamma(static_cast<double>(k + d)) -
                         std::lgamma(static_cast<double>(k + 1)) -
                         std::lgamma(static_cast<double>(d));
    double log_outer;
    if (log_t < 690.0) {
        // T fits a double; evaluate C(T+m-1, m) term by term
        const double t = std::exp(log_t);
        double sum = 0.0;
        for (int i = 0; i < m; ++i) sum += std::log(t + static_cast<double>(m - 1 - i));
        log_outer = sum - std::lgamma(static_cast<double>(m + 1));
    } else {
        // T >> m: C(T+m-1, m) ~ T^m / m!
        log_outer = m * log_t - std::lgamma(static_cast<double>(m + 1));
    }
    return log_outer / std::log(2.0);
}

std::pair<int, int> choose_m(int d) {
    if (d < 1) throw ParamError("choose_m requires d >= 1");
    int best_m = 1;
    double best = capacity_bits(d, d, 1);
    for (int m = 2; m <= d; ++m) {
        if (d % m != 0) continue;
        const double b = capacity_bits(d, d / m, m);
        if (b > best) {
            best = b;
            best_m = m;
        }
    }
    return {best_m, d / best_m};
}

double tau_s_opt_seconds(int d_active, double mean_rate_hz) {
    if (d_active < 1 || !(d_active * mean_rate_hz > 0.0))
        throw ParamError("tau_s_opt requires d * rate > 0");
    const double mu_isi_ms = 1000.0 / (d_active * mean_rate_hz);
    double tau_ms = 52.83 * mu_isi_ms - 3.1;
    if (tau_ms < 0.5) tau_ms = 0.5;  // floor; the affine fit goes negative here
    return tau_ms * 1e-3;
}

namespace {

// Single-NNLD probe run with threshold and inhibition disabled.
SimProbe probe_single_neuron(const Wiring& wiring, const KernelParams& kernel, double x_thr,
                             double tau_m, double dt,
                             const std::vector<PatternTemplate>& patterns, SimProbe probe = {}) {
    NeuronConfig cfg{x_thr, 1.0, tau_m, 1.0};
    SimOptions opt;
    opt.dt = dt;
    opt.inhibition = false;
    opt.threshold = false;
    InhibitionParams no_inh{1.0, 2.0, 1.0};
    Engine eng(wiring, cfg, kernel, no_inh, opt);
    for (const auto& p : patterns) eng.run(p, nullptr, &probe);
    return probe;
}

}  // namespace

double calibrate_x_thr(int branches, int slots_per_branch, int inputs,
                       const KernelParams& kernel, double tau_m, double dt,
                       const std::vector<PatternTemplate>& sample_patterns, int trials, Rng& rng) {
    if (trials < 1) throw ParamError("calibration needs trials >= 1");
    if (sample_patterns.empty()) throw ParamError("calibration needs a non-empty pattern set");
    WiringGeometry geom{1, branches, slots_per_branch, inputs};
    double sum = 0.0;
    u64 count = 0;
    for (int t = 0; t < trials; ++t) {
        Wiring w = Wiring::random(geom, rng);
        // x_thr itself is irrelevant to the branch-input probe
        SimProbe probe = probe_single_neuron(w, kernel, 1.0, tau_m, dt, sample_patterns);
        sum += probe.branch_in_sum;
        count += probe.branch_in_count;
    }
    const double x_thr = sum / static_cast<double>(count);
    if (!(x_thr > 0.0))
        throw CalibrationError("x_thr calibration yielded 0; the sample patterns carry no spikes");
    return x_thr;
}

double calibrate_v_thr(int branches, int slots_per_branch, int inputs,
                       const KernelParams& kernel, double x_thr, double tau_m, double dt,
                       const std::vector<PatternTemplate>& sample_patterns, int trials, Rng& rng) {
    if (trials < 1) throw ParamError("calibration needs trials >= 1");
    if (sample_patterns.empty()) throw ParamError("calibration needs a non-empty pattern set");
    if (!(x_thr > 0.0)) throw ParamError("V_thr calibration requires x_thr > 0");
    WiringGeometry geom{1, branches, slots_per_branch, inputs};
    double sum = 0.0;
    u64 count = 0;
    for (int t = 0; t < trials; ++t) {
        Wiring w = Wiring::random(geom, rng);
        for (const auto& p : sample_patterns) {
            SimProbe probe = probe_single_neuron(w, kernel, x_thr, tau_m, dt, {p});
            sum += probe.v_max[0];
            ++count;
        }
    }
    const double v_thr = sum / static_cast<double>(count);
    if (!(v_thr > 0.0))
        throw CalibrationError("V_thr calibration yielded 0; the sample patterns carry no spikes");
    return v_thr;
}

InhibitionCalibration calibrate_inhibition(const Wiring& wiring, const NeuronConfig& config,
                                           const KernelParams& kernel,
                                           const std::vector<PatternTemplate>& templates,
                                           const JitterSpec& jitter, int ep_ini, double t_sub,
                                           double i0_inh, double i0_inh_ratio, double dt,
                                           Rng& rng) {
    if (ep_ini < 1) throw ParamError("ep_ini must be >= 1");
    if (!(t_sub > 0.0)) throw ParamError("T_sub must be > 0");

    SimOptions opt;
    opt.dt = dt;
    opt.inhibition = false;
    opt.threshold = false;
    InhibitionParams no_inh{1.0, 2.0, 1.0};
    Engine eng(wiring, config, kernel, no_inh, opt);
    SimProbe probe;
    for (int e = 0; e < ep_ini; ++e) {
        Epoch ep = make_epoch(templates, jitter, rng);
        for (const auto& p : ep.patterns) eng.run(p, nullptr, &probe);
    }
    InhibitionCalibration out;
    out.I_e_av = probe.excitation_sum / static_cast<double>(probe.excitation_count);
    if (!(out.I_e_av > 0.0))
        throw CalibrationError("average excitatory current is 0; cannot calibrate inhibition");
    out.I0_inh = i0_inh > 0.0 ? i0_inh : i0_inh_ratio * out.I_e_av;
    if (out.I0_inh <= out.I_e_av)
        throw CalibrationError(
            "I0_inh must exceed the average excitatory current I_e_av = " +
            std::to_string(out.I_e_av) + "; increase I0_inh");
    out.tau_s_inh = t_sub / std::log(out.I0_inh / out.I_e_av);
    out.tau_f_inh = out.tau_s_inh / 10.0;
    return out;
}

double convergence_measure(double l_mean, int n_sub, double t_sub) {
    if (n_sub < 1) throw ParamError("n_sub must be >= 1");
    return l_mean / n_sub - (n_sub - 1) * t_sub / 2.0;
}

std::string TuneResult::to_json() const {
    nlohmann::json j{{"m", m},
                     {"k", k},
                     {"tau_s", tau_s},
                     {"tau_f", tau_f},
                     {"I0", I0},
                     {"x_thr", x_thr},
                     {"V_thr", v_thr},
                     {"tau_m", tau_m},
                     {"I_e_av", I_e_av},
                     {"I0_inh", I0_inh},
                     {"tau_s_inh", tau_s_inh},
                     {"tau_f_inh", tau_f_inh},
                     {"T_sub", t_sub},
                     {"n_sub", n_sub}};
    return j.dump(2);
}

TuneResult TuneResult::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    TuneResult r;
    r.m = j.at("m");
    r.k = j.at("k");
    r.tau_s = j.at("tau_s");
    r.tau_f = j.at("tau_f");
    r.I0 = j.at("I0");
    r.x_thr = j.at("x_thr");
    r.v_thr = j.at("V_thr");
    r.tau_m = j.value("tau_m", 0.020);
    r.I_e_av = j.at("I_e_av");
    r.I0_inh = j.at("I0_inh");
    r.tau_s_inh = j.at("tau_s_inh");
    r.tau_f_inh = j.at("tau_f_inh");
    r.t_sub = j.at("T_sub");
    r.n_sub = j.at("n_sub");
    return r;
}

TuneResult autotune(const std::vector<PatternTemplate>& templates, double rate_hz,
                    double active_fraction, const AutotuneSettings& settings) {
    if (templates.empty()) throw ParamError("autotune needs class templates");
    const int d = templates.front().afferent_count();
    const double t_p = templates.front().duration;
    if (settings.n_sub < 1) throw ParamError("n_sub must be >= 1");

    TuneResult r;
    r.n_sub = settings.n_sub;
    r.t_sub = t_p / settings.n_sub;
    r.tau_m = settings.tau_m;
    std::tie(r.m, r.k) = choose_m(d);

    const int d_active = std::max(1, static_cast<int>(std::lround(d * active_fraction)));
    r.tau_s = tau_s_opt_seconds(d_active, rate_hz);
    r.tau_f = r.tau_s / 10.0;
    r.I0 = 1.4351;

    Rng rng_x = make_rng(settings.seed, "calib-x-thr");
    r.x_thr = calibrate_x_thr(r.m, r.k, d, r.kernel(), r.tau_m, settings.dt, templates,
                              settings.calib_trials, rng_x);

    Rng rng_v = make_rng(settings.seed, "calib-v-thr");
    r.v_thr = calibrate_v_thr(r.m, r.k, d, r.kernel(), r.x_thr, r.tau_m, settings.dt, templates,
                              settings.calib_trials, rng_v);

    const int n_neurons = settings.neurons > 0 ? settings.neurons : 11 * settings.n_sub;
    Rng rng_i = make_rng(settings.seed, "calib-inhibition");
    Wiring net = Wiring::random({n_neurons, r.m, r.k, d}, rng_i);
    JitterSpec jitter{settings.sigma_jitter};
    InhibitionCalibration inh =
        calibrate_inhibition(net, r.neuron_config(), r.kernel(), templates, jitter,
                             settings.ep_ini, r.t_sub, settings.i0_inh, settings.i0_inh_ratio,
                             settings.dt, rng_i);
    r.I_e_av = inh.I_e_av;
    r.I0_inh = inh.I0_inh;
    r.tau_s_inh = inh.tau_s_inh;
    r.tau_f_inh = inh.tau_f_inh;
    return r;
}

}  // namespace wta
