#pragma once

#include <string>
#include <vector>

#include "wta/common.hpp"
#include "wta/engine.hpp"
#include "wta/kernel.hpp"
#include "wta/spike_data.hpp"
#include "wta/wiring.hpp"

namespace wta {

// Pattern memorization capacity B_N in bits, evaluated in the log domain.
double capacity_bits(int d, int k, int m);

// Divisor m of d maximizing capacity(d, d/m, m); returns (m, k).
std::pair<int, int> choose_m(int d);

// Optimal slow time constant in seconds from the mean inter-spike interval of
// the whole pattern (both sides of the affine formula in milliseconds),
// floored at 0.5 ms.
double tau_s_opt_seconds(int d_active, double mean_rate_hz);

// Average input current to the dendritic nonlinearity over random wirings of
// a single NNLD driven by the sample patterns.
double calibrate_x_thr(int branches, int slots_per_branch, int inputs,
                       const KernelParams& kernel, double tau_m, double dt,
                       const std::vector<PatternTemplate>& sample_patterns, int trials, Rng& rng);

// Average over random wirings and sample patterns of the peak membrane voltage
// of a lone NNLD (threshold and inhibition disabled).
double calibrate_v_thr(int branches, int slots_per_branch, int inputs,
                       const KernelParams& kernel, double x_thr, double tau_m, double dt,
                       const std::vector<PatternTemplate>& sample_patterns, int trials, Rng& rng);

struct InhibitionCalibration {
    double I_e_av = 0.0;
    double I0_inh = 0.0;
    double tau_s_inh = 0.0;
    double tau_f_inh = 0.0;
};

// Runs ep_ini epochs with plasticity and inhibition off over the given network
// wiring, measures the average excitatory current, and inverts the decay
// condition I_inh(T_sub) = I_e_av for tau_s_inh. I0_inh <= 0 selects the
// default amplitude I0_inh = i0_inh_ratio * I_e_av.
InhibitionCalibration calibrate_inhibition(const Wiring& wiring, const NeuronConfig& config,
                                           const KernelParams& kernel,
                                           const std::vector<PatternTemplate>& templates,
                                           const JitterSpec& jitter, int ep_ini, double t_sub,
                                           double i0_inh, double i0_inh_ratio, double dt,
                                           Rng& rng);

// CM = l_mean / n_sub - (n_sub - 1) * T_sub / 2. May be negative.
double convergence_measure(double l_mean, int n_sub, double t_sub);

// The full tuned parameter set consumed by the trial harness.
struct TuneResult {
    int m = 0;
    int k = 0;
    double tau_s = 0.0;
    double tau_f = 0.0;
    double I0 = 1.4351;
    double x_thr = 0.0;
    double v_thr = 0.0;
    double tau_m = 0.020;
    double I_e_av = 0.0;
    double I0_inh = 0.0;
    double tau_s_inh = 0.0;
    double tau_f_inh = 0.0;
    double t_sub = 0.0;
    int n_sub = 1;

    KernelParams kernel() const { return {I0, tau_s, tau_f}; }
    InhibitionParams inhibition() const { return {I0_inh, tau_s_inh, tau_f_inh}; }
    NeuronConfig neuron_config() const { return {x_thr, v_thr, tau_m, 1.0}; }

    std::string to_json() const;
    static TuneResult from_json(const std::string& text);
};

struct AutotuneSettings {
    int n_sub = 1;
    int neurons = 0;         // N of the network used for inhibition calibration
    int calib_trials = 200;  // Monte Carlo wirings for x_thr / V_thr
    int ep_ini = 5;
    double i0_inh = 0.0;     // <= 0: derive from ratio
    double i0_inh_ratio = 5.0;
    double tau_m = 0.020;
    double dt = 1e-4;
    double sigma_jitter = 0.0;
    u64 seed = 0;
};

// Runs the whole parameter pipeline on a class-template set.
TuneResult autotune(const std::vector<PatternTemplate>& templates, double rate_hz,
                    double active_fraction, const AutotuneSettings& settings);

}  // namespace wta
