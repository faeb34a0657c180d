#include "wta/plasticity.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace wta {

void StdpNrw::on_pre(const Engine& eng, int line, double /*t*/) {
    const int m = eng.geometry().branches;
    const MismatchInstance* mm = eng.mismatch();
    for (int n : eng.fired_neurons()) {
        const double f_trace = eng.post_trace(n);
        if (f_trace == 0.0) continue;
        for (int j = 0; j < m; ++j) {
            double delta = -eng.branch_deriv(n, j) * f_trace;
            if (mm) delta *= mm->branch_cc(n, j);
            table_->at(n, j, line) += delta;
        }
    }
}

void StdpNrw::on_post(const Engine& eng, int neuron, double /*t*/) {
    const int m = eng.geometry().branches;
    const int d = eng.geometry().inputs;
    const MismatchInstance* mm = eng.mismatch();
    for (int j = 0; j < m; ++j) {
        double bd = eng.branch_deriv(neuron, j);
        if (mm) bd *= mm->branch_cc(neuron, j);
        if (bd == 0.0) continue;
        for (int i = 0; i < d; ++i) {
            const double e_trace = eng.pre_trace(i);
            if (e_trace != 0.0) table_->at(neuron, j, i) += bd * e_trace;
        }
    }
}

void RewireReport::to_jsonl(std::ostream& os) const {
    for (const auto& ch : choices) {
        os << "{\"neuron\":" << ch.neuron << ",\"branch\":" << ch.branch
           << ",\"removed_line\":" << ch.removed_line
           << ",\"removed_fitness\":" << ch.removed_fitness << ",\"candidates\":[";
        for (std::size_t i = 0; i < ch.candidates.size(); ++i)
            os << (i ? "," : "") << ch.candidates[i];
        os << "],\"candidate_fitness\":[";
        for (std::size_t i = 0; i < ch.candidate_fitness.size(); ++i)
            os << (i ? "," : "") << ch.candidate_fitness[i];
        os << "],\"chosen_line\":" << ch.chosen_line
           << ",\"swapped\":" << (ch.swapped ? "true" : "false") << "}\n";
    }
}

RewireReport rewire_after_pattern(Wiring& wiring, const FitnessTable& c, const EventLog& log,
                                  const RewireConfig& cfg, Rng& rng) {
    const auto& geom = wiring.geometry();
    if (cfg.n_r < 1 || cfg.n_r > geom.inputs)
        throw ParamError("n_R must be in [1, d]");
    wiring.check_invariant();

    // Q: neurons with at least one post-spike, processed in ascending index.
    std::vector<std::uint8_t> in_q(geom.neurons, 0);
    for (const auto& ev : log.post) in_q[ev.neuron] = 1;

    RewireReport report;
    std::vector<int> pool(geom.inputs);
    for (int q = 0; q < geom.neurons; ++q) {
        if (!in_q[q]) continue;

        // s_min: worst actual synapse; ties to lowest branch, then lowest line.
        int j_min = -1, i_min = -1, p_min = -1;
        double c_min = 0.0;
        for (int j = 0; j < geom.branches; ++j) {
            for (int p = 0; p < geom.slots_per_branch; ++p) {
                const int i = wiring.line(q, j, p);
                const double cv = c.at(q, j, i);
                const bool better =
                    j_min < 0 || cv < c_min ||
                    (cv == c_min && (j < j_min || (j == j_min && i < i_min)));
                if (better) {
                    j_min = j;
                    i_min = i;
                    p_min = p;
                    c_min = cv;
                }
            }
        }

        // R^q: n_R distinct input lines, uniform without replacement, minus
        // any excluded lines (candidate count shrinks if fewer remain).
        pool.resize(geom.inputs);
        std::iota(pool.begin(), pool.end(), 0);
        if (cfg.exclusion != RewireExclusion::None) {
            std::vector<std::uint8_t> barred(geom.inputs, 0);
            const int j_lo = cfg.exclusion == RewireExclusion::Branch ? j_min : 0;
            const int j_hi = cfg.exclusion == RewireExclusion::Branch ? j_min + 1 : geom.branches;
            for (int j = j_lo; j < j_hi; ++j)
                for (int p = 0; p < geom.slots_per_branch; ++p)
                    barred[wiring.line(q, j, p)] = 1;
            if (cfg.share_cap > 0) {
                std::vector<int> totals(geom.inputs, 0);
                for (int j = 0; j < geom.branches; ++j)
                    for (int p = 0; p < geom.slots_per_branch; ++p)
                        ++totals[wiring.line(q, j, p)];
                for (int i = 0; i < geom.inputs; ++i)
                    if (totals[i] >= cfg.share_cap) barred[i] = 1;
            }
            pool.erase(std::remove_if(pool.begin(), pool.end(),
                                      [&](int i) { return barred[i] != 0; }),
                       pool.end());
        }
        const int n_cand = std::min<int>(cfg.n_r, static_cast<int>(pool.size()));
        for (int r = 0; r < n_cand; ++r) {
            std::uniform_int_distribution<int> pick(r, static_cast<int>(pool.size()) - 1);
            std::swap(pool[r], pool[pick(rng)]);
        }
        RewireChoice ch;
        ch.neuron = q;
        ch.branch = j_min;
        ch.removed_line = i_min;
        ch.removed_fitness = c_min;
        ch.candidates.assign(pool.begin(), pool.begin() + n_cand);
        std::sort(ch.candidates.begin(), ch.candidates.end());

        // r_max on the branch of s_min; ties to lowest input index.
        int r_max = -1;
        double c_max = 0.0;
        ch.candidate_fitness.reserve(ch.candidates.size());
        for (int cand : ch.candidates) {
            const double cv = c.at(q, j_min, cand);
            ch.candidate_fitness.push_back(cv);
            if (r_max < 0 || cv > c_max) {
                r_max = cand;
                c_max = cv;
            }
        }
        ch.chosen_line = r_max;
        ch.swapped = r_max >= 0 && r_max != i_min;
        if (ch.swapped) wiring.set_line(q, j_min, p_min, r_max);
        report.choices.push_back(std::move(ch));
    }
    return report;
}

}  // namespace wta
