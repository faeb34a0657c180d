#include "wta/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace wta {

Engine::Engine(const Wiring& wiring, const NeuronConfig& config, const KernelParams& kernel,
               const InhibitionParams& inhibition, const SimOptions& options,
               const MismatchInstance* mismatch)
    : wiring_(wiring),
      geom_(wiring.geometry()),
      config_(config),
      kernel_(kernel),
      inh_(inhibition),
      opt_(options),
      mismatch_(mismatch) {
    config_.validate();
    kernel_.validate();
    if (opt_.inhibition) inh_.validate();
    if (!(opt_.dt > 0.0)) throw ParamError("dt must be > 0");
    if (mismatch_ && mismatch_->geom != geom_)
        throw IntegrityError("mismatch instance geometry does not match wiring");

    per_slot_ = mismatch_ != nullptr && !mismatch_->is_ideal();

    const std::size_t nb = static_cast<std::size_t>(geom_.neurons) * geom_.branches;
    br_z_.assign(nb, 0.0);
    br_cb_.assign(nb, 1.0);
    v_thr_n_.assign(geom_.neurons, config_.v_thr);
    if (mismatch_) {
        for (int n = 0; n < geom_.neurons; ++n) {
            v_thr_n_[n] = config_.v_thr * mismatch_->neuron_Vthr(n);
            for (int j = 0; j < geom_.branches; ++j)
                br_cb_[static_cast<std::size_t>(n) * geom_.branches + j] =
                    mismatch_->branch_cb(n, j);
        }
    }
    if (!per_slot_) br_slow_.assign(nb, 0.0), br_fast_.assign(nb, 0.0);

    pre_slow_.assign(geom_.inputs, 0.0);
    pre_fast_.assign(geom_.inputs, 0.0);
    post_slow_.assign(geom_.neurons, 0.0);
    post_fast_.assign(geom_.neurons, 0.0);
    v_.assign(geom_.neurons, 0.0);
    fired_.assign(geom_.neurons, 0);

    build_adjacency();
}

void Engine::build_adjacency() {
    if (per_slot_) {
        const std::size_t n_slots =
            static_cast<std::size_t>(geom_.neurons) * geom_.slots_per_neuron();
        slot_slow_.assign(n_slots, 0.0);
        slot_fast_.assign(n_slots, 0.0);
        slot_decay_s_.resize(n_slots);
        slot_decay_f_.resize(n_slots);
        slot_amp_.resize(n_slots);
        line_slots_.assign(geom_.inputs, {});
        std::size_t s = 0;
        for (int n = 0; n < geom_.neurons; ++n) {
            for (int j = 0; j < geom_.branches; ++j) {
                for (int p = 0; p < geom_.slots_per_branch; ++p, ++s) {
                    // tau_f tracks the mismatched tau_s (shared bias current)
                    const double tau_s = kernel_.tau_s * mismatch_->slot_tau_s(n, j, p);
                    slot_decay_s_[s] = std::exp(-opt_.dt / tau_s);
                    slot_decay_f_[s] = std::exp(-opt_.dt / (tau_s / (kernel_.tau_s / kernel_.tau_f)));
                    slot_amp_[s] = kernel_.I0 * mismatch_->slot_I0(n, j, p);
                    line_slots_[wiring_.line(n, j, p)].push_back(static_cast<int>(s));
                }
            }
        }
    } else {
        line_branches_.assign(geom_.inputs, {});
        for (int n = 0; n < geom_.neurons; ++n) {
            for (int j = 0; j < geom_.branches; ++j) {
                const int b = n * geom_.branches + j;
                for (int p = 0; p < geom_.slots_per_branch; ++p) {
                    const int line = wiring_.line(n, j, p);
                    auto& taps = line_branches_[line];
                    auto it = std::find_if(taps.begin(), taps.end(),
                                           [b](const BranchTap& t) { return t.branch == b; });
                    if (it == taps.end())
                        taps.push_back({b, kernel_.I0});
                    else
                        it->amp += kernel_.I0;
                }
            }
        }
    }
}

void Engine::reset_state() {
    std::fill(br_z_.begin(), br_z_.end(), 0.0);
    if (per_slot_) {
        std::fill(slot_slow_.begin(), slot_slow_.end(), 0.0);
        std::fill(slot_fast_.begin(), slot_fast_.end(), 0.0);
    } else {
        std::fill(br_slow_.begin(), br_slow_.end(), 0.0);
        std::fill(br_fast_.begin(), br_fast_.end(), 0.0);
    }
    std::fill(pre_slow_.begin(), pre_slow_.end(), 0.0);
    std::fill(pre_fast_.begin(), pre_fast_.end(), 0.0);
    std::fill(post_slow_.begin(), post_slow_.end(), 0.0);
    std::fill(post_fast_.begin(), post_fast_.end(), 0.0);
    std::fill(v_.begin(), v_.end(), 0.0);
    std::fill(fired_.begin(), fired_.end(), 0);
    fired_list_.clear();
    inh_slow_ = inh_fast_ = 0.0;
}

EventLog Engine::run(const PatternTemplate& pattern, SpikeHook* hook, SimProbe* probe) {
    if (pattern.afferent_count() != geom_.inputs)
        throw ParamError("pattern afferent count does not match wiring input dimension");
    reset_state();

    const double dt = opt_.dt;
    const long steps = std::llround(pattern.duration / dt);
    if (steps < 1) throw ParamError("pattern shorter than one time step");

    // Bin spikes to their enclosing step, grouped per step.
    struct BinnedSpike {
        long step;
        int line;
    };
    std::vector<BinnedSpike> binned;
    binned.reserve(pattern.total_spikes());
    for (int i = 0; i < geom_.inputs; ++i)
        for (double t : pattern.afferents[i].times) {
            long s = static_cast<long>(t / dt);
            if (s >= steps) s = steps - 1;
            binned.push_back({s, i});
        }
    std::stable_sort(binned.begin(), binned.end(),
                     [](const BinnedSpike& a, const BinnedSpike& b) { return a.step < b.step; });

    EventLog log;
    log.pre.reserve(binned.size());

    const double decay_s = std::exp(-dt / kernel_.tau_s);
    const double decay_f = std::exp(-dt / kernel_.tau_f);
    const double decay_inh_s = opt_.inhibition ? std::exp(-dt / inh_.tau_s_inh) : 0.0;
    const double decay_inh_f = opt_.inhibition ? std::exp(-dt / inh_.tau_f_inh) : 0.0;
    const double alpha_m = std::exp(-dt / config_.tau_m);
    const double drive_m = (1.0 - alpha_m) * config_.r_m;
    const double inv_x_thr = 1.0 / config_.x_thr;

    const int N = geom_.neurons;
    const int m = geom_.branches;
    std::vector<double> exc(N, 0.0);
    if (probe && probe->v_max.empty()) probe->v_max.assign(N, 0.0);

    std::size_t cursor = 0;
    for (long step = 0; step < steps; ++step) {
        const double t = static_cast<double>(step) * dt;

        // 1. decay all states
        if (per_slot_) {
            const std::size_t ns = slot_slow_.size();
            for (std::size_t s = 0; s < ns; ++s) {
                slot_slow_[s] *= slot_decay_s_[s];
                slot_fast_[s] *= slot_decay_f_[s];
            }
        } else {
            const std::size_t nb = br_slow_.size();
            for (std::size_t b = 0; b < nb; ++b) {
                br_slow_[b] *= decay_s;
                br_fast_[b] *= decay_f;
            }
        }
        for (int i = 0; i < geom_.inputs; ++i) {
            pre_slow_[i] *= decay_s;
            pre_fast_[i] *= decay_f;
        }
        for (int n = 0; n < N; ++n) {
            post_slow_[n] *= decay_s;
            post_fast_[n] *= decay_f;
        }
        inh_slow_ *= decay_inh_s;
        inh_fast_ *= decay_inh_f;

        // 2. inject this step's pre-spikes into branch filters and pre-traces
        const std::size_t first_event = cursor;
        while (cursor < binned.size() && binned[cursor].step == step) {
            const int line = binned[cursor].line;
            if (per_slot_) {
                for (int s : line_slots_[line]) {
                    slot_slow_[s] += slot_amp_[s];
                    slot_fast_[s] += slot_amp_[s];
                }
            } else {
                for (const BranchTap& tap : line_branches_[line]) {
                    br_slow_[tap.branch] += tap.amp;
                    br_fast_[tap.branch] += tap.amp;
                }
            }
            pre_slow_[line] += kernel_.I0;
            pre_fast_[line] += kernel_.I0;
            log.pre.push_back({t, line});
            ++cursor;
        }

        // branch inputs and per-neuron excitatory currents
        if (per_slot_) {
            const int k = geom_.slots_per_branch;
            std::size_t s = 0;
            for (std::size_t b = 0; b < br_z_.size(); ++b) {
                double z = 0.0;
                for (int p = 0; p < k; ++p, ++s) z += slot_slow_[s] - slot_fast_[s];
                br_z_[b] = z;
            }
        } else {
            for (std::size_t b = 0; b < br_z_.size(); ++b)
                br_z_[b] = br_slow_[b] - br_fast_[b];
        }
        for (int n = 0; n < N; ++n) {
            double acc = 0.0;
            const std::size_t base = static_cast<std::size_t>(n) * m;
            for (int j = 0; j < m; ++j) {
                const double z = br_z_[base + j];
                acc += br_cb_[base + j] * z * z;
            }
            exc[n] = acc * inv_x_thr;
        }

        // 3. pre-spike plasticity callbacks
        if (hook) {
            for (std::size_t e = first_event; e < cursor; ++e)
                hook->on_pre(*this, binned[e].line, t);
        }

        // 4. integrate membranes
        const double i_inh = opt_.inhibition ? inh_slow_ - inh_fast_ : 0.0;
        for (int n = 0; n < N; ++n) {
            v_[n] = v_[n] * alpha_m + drive_m * (exc[n] - i_inh);
            if (!std::isfinite(v_[n]))
                throw SimulationError("membrane voltage diverged at step " +
                                      std::to_string(step) + ", neuron " + std::to_string(n));
        }

        if (probe) {
            for (double z : br_z_) probe->branch_in_sum += z;
            probe->branch_in_count += br_z_.size();
            for (int n = 0; n < N; ++n) probe->excitation_sum += exc[n];
            probe->excitation_count += static_cast<u64>(N);
            for (int n = 0; n < N; ++n) probe->v_max[n] = std::max(probe->v_max[n], v_[n]);
        }

        // 5. winner detection: largest overshoot, ties to lowest index
        if (opt_.threshold) {
            int winner = -1;
            double best = 0.0;
            for (int n = 0; n < N; ++n) {
                const double over = v_[n] - v_thr_n_[n];
                if (over >= 0.0 && (winner < 0 || over > best)) {
                    winner = n;
                    best = over;
                }
            }
            if (winner >= 0) {
                log.post.push_back({t, winner, t});
                v_[winner] = 0.0;
                if (!fired_[winner]) {
                    fired_[winner] = 1;
                    fired_list_.push_back(winner);
                }
                // 6. post-spike plasticity callback
                if (hook) hook->on_post(*this, winner, t);
                // 7. inhibition restart (most recent spike only) and post-trace
                if (opt_.inhibition) {
                    inh_slow_ = inh_.I0_inh;
                    inh_fast_ = inh_.I0_inh;
                }
                post_slow_[winner] += kernel_.I0;
                post_fast_[winner] += kernel_.I0;
            }
        }

        if (opt_.debug_stream) {
            auto& os = *opt_.debug_stream;
            os << t;
            for (int n = 0; n < N; ++n) os << ',' << v_[n];
            os << ',' << (opt_.inhibition ? inh_slow_ - inh_fast_ : 0.0) << '\n';
        }
    }
    return log;
}

}  // namespace wta
