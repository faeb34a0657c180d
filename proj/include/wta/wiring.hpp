#pragma once

#include <cstdint>
#include <vector>

#include "wta/common.hpp"

namespace wta {

struct WiringGeometry {
    int neurons = 0;           // N
    int branches = 0;          // m
    int slots_per_branch = 0;  // k
    int inputs = 0;            // d

    int slots_per_neuron() const { return branches * slots_per_branch; }
    bool operator==(const WiringGeometry&) const = default;
};

// Connection state of the whole network. Each synapse slot (neuron, branch,
// slot) is wired to one input line; the integer weight w[n][j][i] is the
// number of slots on branch j of neuron n assigned to line i. Row sums are k
// by construction, which is exactly the per-dendrite wiring constraint.
class Wiring {
  public:
    Wiring() = default;
    Wiring(WiringGeometry geom, std::vector<std::int16_t> slot_lines);

    // Each slot draws its line uniformly (with replacement) from the d lines.
    static Wiring random(const WiringGeometry& geom, Rng& rng);

    const WiringGeometry& geometry() const { return geom_; }

    int line(int neuron, int branch, int slot) const {
        return slot_lines_[slot_index(neuron, branch, slot)];
    }
    void set_line(int neuron, int branch, int slot, int input_line);

    // Integer weight of (branch, line); linear scan over k slots.
    int weight(int neuron, int branch, int input_line) const;

    // Dense m x d count matrix for one neuron.
    std::vector<int> count_matrix(int neuron) const;

    // Throws IntegrityError if any slot points outside [0, d) or the counts
    // fail the row-sum constraint.
    void check_invariant() const;

    const std::vector<std::int16_t>& slot_lines() const { return slot_lines_; }

  private:
    int slot_index(int neuron, int branch, int slot) const {
        return (neuron * geom_.branches + branch) * geom_.slots_per_branch + slot;
    }

    WiringGeometry geom_;
    std::vector<std::int16_t> slot_lines_;
};

}  // namespace wta
