#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wta/autotune.hpp"
#include "wta/common.hpp"
#include "wta/engine.hpp"
#include "wta/mismatch.hpp"
#include "wta/plasticity.hpp"
#include "wta/spike_data.hpp"

namespace wta {

struct StimulusParams {
    int d = 100;
    double rate_hz = 20.0;
    double t_p = 0.5;
    double active_fraction = 1.0;
};

// The class identifier the network learns: a single neuron index when
// n_sub = 1, the ordered firing sequence otherwise. Empty means "no
// representation".
using Representation = std::vector<int>;

enum class FailureMode { None, F1, F2, F3 };

const char* failure_mode_name(FailureMode f);

inline int default_neurons(int classes, int n_sub) {
    return n_sub == 1 ? 11 * classes : classes * n_sub;
}

struct TrialConfig {
    int classes = 0;
    int n_sub = 1;
    int neurons = 0;  // 0 -> default_neurons()
    int max_epochs = 500;
    int sat_window = 20;      // W
    double sat_tol = 0.003;   // relative change of consecutive W-epoch CM means
    int sat_patience = 5;     // epochs the criterion must hold back-to-back
    double sigma_jitter = 0.0;
    StimulusParams stim;
    double dt = 1e-4;
    int n_r = 0;       // 0 -> d/4
    RewireExclusion rewire_exclusion = RewireExclusion::None;
    int rewire_share_cap = 0;
    int n_probes = 0;  // false-positive probes after training
    u64 seed = 0;
    TuneResult tune;
    const MismatchSpec* mismatch = nullptr;
    std::ostream* audit_stream = nullptr;  // rewire decisions, JSON lines

    int effective_neurons() const { return neurons > 0 ? neurons : default_neurons(classes, n_sub); }
    int effective_n_r() const { return n_r > 0 ? n_r : std::max(1, stim.d / 4); }
};

struct TrialResult {
    bool success = false;
    FailureMode failure = FailureMode::None;
    int ep_sat = 0;
    bool saturated = false;
    std::vector<double> l_mean;  // per epoch, NaN when the epoch had no spikes
    std::vector<double> cm;      // per epoch
    std::vector<Representation> learned;  // indexed by class (0-based)
    std::vector<Representation> test;
    int fp_count = 0;
    int probes = 0;
    Wiring wiring;  // final connection state

    double final_cm() const;
};

Representation extract_representation(const EventLog& log, int n_sub);

FailureMode classify_outcome(const std::vector<Representation>& learned,
                             const std::vector<Representation>& test);

TrialResult run_trial(const TrialConfig& cfg);

// Presents fresh random patterns with the training statistics to a fixed
// (trained) network and counts representations colliding with any learned one.
int false_positive_probe(const Wiring& wiring, const TrialConfig& cfg,
                         const std::vector<Representation>& learned, int n_probes, Rng& rng);

// Independent trials with per-trial seeds derived from cfg.seed; jobs > 1 runs
// them on worker threads (results are deterministic regardless of jobs).
std::vector<TrialResult> run_trial_batch(const TrialConfig& cfg, int trials, int jobs);

struct BatchStats {
    int trials = 0;
    double success_pct = 0.0;
    double ep_sat_avg = 0.0;
    double cm_final_avg = 0.0;  // NaN-skipping mean of final-epoch CM, seconds
    int f1 = 0, f2 = 0, f3 = 0;
    double fp_rate_pct = 0.0;
};

BatchStats summarize(const std::vector<TrialResult>& results);

enum class SweepAxis { NOverC, SigmaJitter, NSub };

const char* sweep_axis_name(SweepAxis axis);

struct SweepPoint {
    double point = 0.0;
    BatchStats stats;
};

struct SweepSettings {
    SweepAxis axis = SweepAxis::NOverC;
    std::vector<double> grid;
    int trials_per_point = 50;
    int jobs = 1;
    AutotuneSettings tune_settings;  // seed/neurons/n_sub fields are filled per point
};

// Runs trials_per_point independent trials per grid point; every point is
// re-tuned for its own geometry/jitter/n_sub. Point seeds derive from
// hash(master seed, axis, point index) so each point reproduces individually.
std::vector<SweepPoint> sweep(const TrialConfig& base, const SweepSettings& settings);

// CSV emitters (fixed formatting: seconds 6 decimals, percentages 2).
void write_epoch_csv(const std::filesystem::path& path, const std::vector<TrialResult>& results);
void write_trial_csv(const std::filesystem::path& path, const std::vector<TrialResult>& results);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points);

// Wiring snapshot: geometry, per-neuron integer count matrices, tuned
// parameters and learned representations; loadable for probe-only runs.
void save_snapshot(const std::filesystem::path& path, const TrialResult& result,
                   const TrialConfig& cfg);

struct Snapshot {
    WiringGeometry geom;
    Wiring wiring;
    TuneResult tune;
    int n_sub = 1;
    StimulusParams stim;
    std::vector<Representation> learned;
};

Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace wta
