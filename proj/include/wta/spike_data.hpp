#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "wta/common.hpp"

namespace wta {

// One afferent's spike times in seconds, sorted non-decreasing, all within
// [0, duration] of the owning pattern.
struct SpikeTrain {
    std::vector<double> times;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
};

// The stimulus unit: d afferent spike trains of duration T_p belonging to one
// class. Afferents with active_mask false carry no spikes (the half-empty
// benchmark variant).
struct PatternTemplate {
    int class_label = 0;
    double duration = 0.0;
    std::vector<SpikeTrain> afferents;
    std::vector<std::uint8_t> active_mask;

    int afferent_count() const { return static_cast<int>(afferents.size()); }
    std::size_t total_spikes() const;
    void validate() const;  // throws ParamError on invariant violation
};

struct JitterSpec {
    double sigma = 0.0;  // seconds; shifted spikes are clamped to [0, T_p]
};

// One pattern per class, freshly jittered, in uniformly random order.
struct Epoch {
    std::vector<PatternTemplate> patterns;
};

PatternTemplate gen_poisson_template(int d, double rate_hz, double duration_s,
                                     double active_fraction, int class_label, Rng& rng);

PatternTemplate apply_jitter(const PatternTemplate& tpl, const JitterSpec& spec, Rng& rng);

Epoch make_epoch(const std::vector<PatternTemplate>& templates, const JitterSpec& spec, Rng& rng);

// Metadata carried in the '#'-prefixed header of a spike file.
struct PatternSetMeta {
    int d = 0;
    double t_p = 0.0;
    int classes = 0;
    double rate_hz = 0.0;
    double active_fraction = 1.0;
    u64 seed = 0;
};

void save_patterns(const std::filesystem::path& path,
                   const std::vector<PatternTemplate>& templates, const PatternSetMeta& meta);

// Loads a spike file. Unsorted spike times are accepted and re-sorted; when
// that happens a warning message is appended to *warnings (if given).
std::vector<PatternTemplate> load_patterns(const std::filesystem::path& path,
                                           PatternSetMeta* meta_out = nullptr,
                                           std::vector<std::string>* warnings = nullptr);

}  // namespace wta
