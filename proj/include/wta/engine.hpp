#pragma once

#include <iosfwd>
#include <vector>

#include "wta/common.hpp"
#include "wta/kernel.hpp"
#include "wta/mismatch.hpp"
#include "wta/spike_data.hpp"
#include "wta/wiring.hpp"

namespace wta {

struct NeuronConfig {
    double x_thr = 0.0;   // dendritic nonlinearity threshold
    double v_thr = 0.0;   // firing threshold
    double tau_m = 0.020; // membrane time constant R*C
    double r_m = 1.0;     // membrane resistance, fixed 1

    void validate() const {
        if (!(x_thr > 0.0)) throw ParamError("x_thr must be > 0");
        if (!(v_thr > 0.0)) throw ParamError("V_thr must be > 0");
        if (!(tau_m > 0.0)) throw ParamError("tau_m must be > 0");
    }
};

struct PreEvent {
    double t;
    int line;
};

struct PostEvent {
    double t;
    int neuron;
    double latency;  // from pattern start; equals t since state is zeroed there
};

struct EventLog {
    std::vector<PreEvent> pre;
    std::vector<PostEvent> post;
};

struct SimOptions {
    double dt = 1e-4;
    bool inhibition = true;
    bool threshold = true;
    std::ostream* debug_stream = nullptr;  // per-step "t,V_0..V_{N-1},I_inh" CSV
};

// Accumulators for the calibration routines.
struct SimProbe {
    double branch_in_sum = 0.0;   // sum of I_b,in over branches and steps
    u64 branch_in_count = 0;
    double excitation_sum = 0.0;  // sum over neurons and steps of sum_j b(I_b,in^j)
    u64 excitation_count = 0;
    std::vector<double> v_max;    // per neuron, threshold-free peak tracking
};

class Engine;

// Spike-event callbacks used by the plasticity rule. Invoked synchronously
// inside the step loop with full access to the engine state at event time.
class SpikeHook {
  public:
    virtual ~SpikeHook() = default;
    virtual void on_pre(const Engine& eng, int line, double t) = 0;
    virtual void on_post(const Engine& eng, int neuron, double t) = 0;
};

// Fixed-step clock-driven simulation of the WTA network over one pattern.
// State is zero-initialized at the start of every run. The double-exponential
// kernels are realized as slow/fast first-order exponential filter pairs, so
// the sampled branch response to a binned spike matches the analytic kernel
// exactly at step boundaries.
class Engine {
  public:
    Engine(const Wiring& wiring, const NeuronConfig& config, const KernelParams& kernel,
           const InhibitionParams& inhibition, const SimOptions& options,
           const MismatchInstance* mismatch = nullptr);

    EventLog run(const PatternTemplate& pattern, SpikeHook* hook = nullptr,
                 SimProbe* probe = nullptr);

    // State accessors for hooks, valid during callbacks.
    double branch_input(int neuron, int branch) const {
        return br_z_[static_cast<std::size_t>(neuron) * geom_.branches + branch];
    }
    double branch_deriv(int neuron, int branch) const {
        return branch_nonlinearity_deriv(branch_input(neuron, branch), config_.x_thr);
    }
    double pre_trace(int line) const { return pre_slow_[line] - pre_fast_[line]; }
    double post_trace(int neuron) const { return post_slow_[neuron] - post_fast_[neuron]; }
    const std::vector<int>& fired_neurons() const { return fired_list_; }

    const WiringGeometry& geometry() const { return geom_; }
    const NeuronConfig& config() const { return config_; }
    const KernelParams& kernel() const { return kernel_; }
    const MismatchInstance* mismatch() const { return mismatch_; }

  private:
    void build_adjacency();
    void reset_state();

    const Wiring& wiring_;
    WiringGeometry geom_;
    NeuronConfig config_;
    KernelParams kernel_;
    InhibitionParams inh_;
    SimOptions opt_;
    const MismatchInstance* mismatch_;  // nullptr or ideal -> aggregated branch filters
    bool per_slot_;

    // Ideal path: one slow/fast pair per branch. Per-line adjacency lists the
    // branches touched by that line with the summed injection amplitude.
    struct BranchTap {
        int branch;
        double amp;
    };
    std::vector<std::vector<BranchTap>> line_branches_;
    std::vector<double> br_slow_, br_fast_;

    // Mismatch path: one filter pair per synapse slot with its own decay
    // factors and amplitude.
    std::vector<std::vector<int>> line_slots_;
    std::vector<double> slot_slow_, slot_fast_, slot_decay_s_, slot_decay_f_, slot_amp_;

    std::vector<double> br_z_;      // I_b,in per branch, current step
    std::vector<double> br_cb_;     // squaring-block factors (1.0 when ideal)
    std::vector<double> v_thr_n_;   // per-neuron effective threshold
    std::vector<double> pre_slow_, pre_fast_;
    std::vector<double> post_slow_, post_fast_;
    std::vector<double> v_;
    double inh_slow_ = 0.0, inh_fast_ = 0.0;
    std::vector<std::uint8_t> fired_;
    std::vector<int> fired_list_;
};

}  // namespace wta
