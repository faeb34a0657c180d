#include "wta/wiring.hpp"

#include <numeric>

namespace wta {

Wiring::Wiring(WiringGeometry geom, std::vector<std::int16_t> slot_lines)
    : geom_(geom), slot_lines_(std::move(slot_lines)) {
    if (static_cast<int>(slot_lines_.size()) != geom_.neurons * geom_.slots_per_neuron())
        throw IntegrityError("slot table size does not match geometry");
    check_invariant();
}

Wiring Wiring::random(const WiringGeometry& geom, Rng& rng) {
    if (geom.neurons < 1 || geom.branches < 1 || geom.slots_per_branch < 1 || geom.inputs < 1)
        throw ParamError("wiring geometry fields must be >= 1");
    if (geom.inputs > INT16_MAX) throw ParamError("input dimension too large");
    Wiring w;
    w.geom_ = geom;
    w.slot_lines_.resize(static_cast<std::size_t>(geom.neurons) * geom.slots_per_neuron());
    std::uniform_int_distribution<int> pick(0, geom.inputs - 1);
    for (auto& s : w.slot_lines_) s = static_cast<std::int16_t>(pick(rng));
    return w;
}

void Wiring::set_line(int neuron, int branch, int slot, int input_line) {
    if (input_line < 0 || input_line >= geom_.inputs)
        throw IntegrityError("input line out of range in set_line");
    slot_lines_[slot_index(neuron, branch, slot)] = static_cast<std::int16_t>(input_line);
}

int Wiring::weight(int neuron, int branch, int input_line) const {
    int w = 0;
    for (int p = 0; p < geom_.slots_per_branch; ++p)
        if (line(neuron, branch, p) == input_line) ++w;
    return w;
}

std::vector<int> Wiring::count_matrix(int neuron) const {
    std::vector<int> counts(static_cast<std::size_t>(geom_.branches) * geom_.inputs, 0);
    for (int j = 0; j < geom_.branches; ++j)
        for (int p = 0; p < geom_.slots_per_branch; ++p)
            ++counts[static_cast<std::size_t>(j) * geom_.inputs + line(neuron, j, p)];
    return counts;
}

void Wiring::check_invariant() const {
    for (const auto s : slot_lines_)
        if (s < 0 || s >= geom_.inputs) throw IntegrityError("slot wired to invalid input line");
    for (int n = 0; n < geom_.neurons; ++n) {
        auto counts = count_matrix(n);
        for (int j = 0; j < geom_.branches; ++j) {
            int sum = std::accumulate(counts.begin() + static_cast<std::size_t>(j) * geom_.inputs,
                                      counts.begin() + static_cast<std::size_t>(j + 1) * geom_.inputs, 0);
            if (sum != geom_.slots_per_branch)
                throw IntegrityError("branch row sum violates the per-dendrite constraint");
        }
    }
}

}  // namespace wta
