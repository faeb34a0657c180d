#pragma once

#include <iosfwd>
#include <vector>

#include "wta/common.hpp"
#include "wta/engine.hpp"
#include "wta/wiring.hpp"

namespace wta {

// Correlation-coefficient fitness accumulators indexed by (neuron, branch,
// input line). The update rules depend on the triple only, so one accumulator
// per (n, j, i) covers every actual synapse and every silent candidate alike.
class FitnessTable {
  public:
    FitnessTable() = default;
    FitnessTable(int neurons, int branches, int inputs)
        : neurons_(neurons), branches_(branches), inputs_(inputs),
          c_(static_cast<std::size_t>(neurons) * branches * inputs, 0.0) {}

    double at(int n, int j, int i) const { return c_[index(n, j, i)]; }
    double& at(int n, int j, int i) { return c_[index(n, j, i)]; }

    void reset() { std::fill(c_.begin(), c_.end(), 0.0); }

    int neurons() const { return neurons_; }
    int branches() const { return branches_; }
    int inputs() const { return inputs_; }

  private:
    std::size_t index(int n, int j, int i) const {
        return (static_cast<std::size_t>(n) * branches_ + j) * inputs_ + i;
    }

    int neurons_ = 0, branches_ = 0, inputs_ = 0;
    std::vector<double> c_;
};

// Short-timescale half of STDP-NRW: depression at every pre-spike against the
// post-synaptic trace, potentiation of the firing neuron's full (branch, line)
// slice against the pre-synaptic traces. Self-gating: neurons that have not
// fired carry a zero post-trace and are skipped.
class StdpNrw : public SpikeHook {
  public:
    explicit StdpNrw(FitnessTable& table) : table_(&table) {}

    void on_pre(const Engine& eng, int line, double t) override;
    void on_post(const Engine& eng, int neuron, double t) override;

  private:
    FitnessTable* table_;
};

// Which already-wired lines are barred from the candidate set R^q.
enum class RewireExclusion {
    None,    // any line may be drawn (duplicates accumulate as weight > 1)
    Branch,  // lines on the branch of s_min excluded (binary per-branch weights)
    Neuron   // lines anywhere on the neuron excluded (distinct lines only)
};

struct RewireConfig {
    int n_r = 0;  // candidate-set size, in [1, d]
    RewireExclusion exclusion = RewireExclusion::None;
    // With exclusion != None, additionally bar lines whose total slot count
    // across the whole neuron has reached this cap (0 = no cap). Bounds how
    // often one line can be replicated across branches.
    int share_cap = 0;
};

struct RewireChoice {
    int neuron = -1;
    int branch = -1;            // branch of s_min
    int removed_line = -1;      // input line of s_min
    double removed_fitness = 0.0;
    std::vector<int> candidates;          // R^q, ascending
    std::vector<double> candidate_fitness;
    int chosen_line = -1;       // r_max
    bool swapped = false;       // false when r_max == removed line
};

struct RewireReport {
    std::vector<RewireChoice> choices;

    void to_jsonl(std::ostream& os) const;  // one JSON record per choice
};

// Long-timescale half: for every neuron that spiked during the pattern,
// replace the worst actual synapse with the best candidate drawn on its
// branch. Branch row sums are preserved.
RewireReport rewire_after_pattern(Wiring& wiring, const FitnessTable& c, const EventLog& log,
                                  const RewireConfig& cfg, Rng& rng);

inline void reset_fitness(FitnessTable& c) { c.reset(); }

}  // namespace wta
