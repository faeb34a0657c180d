#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wta/harness.hpp"
#include "wta/mismatch.hpp"

namespace wta {

struct DegradationRow {
    std::string label;       // "ideal", "I0", "tau_s", "cb", "V_thr", "cc", "all"
    double success_pct = 0.0;
    double ideal_pct = 0.0;  // the ideal baseline, repeated per row
};

// Trial batches with each nonideality injected individually and with all of
// them at once, against the ideal baseline. base.mismatch is ignored; the
// spec parameter supplies the sigma/mu ratios.
std::vector<DegradationRow> degradation_experiment(const TrialConfig& base,
                                                   const MismatchSpec& spec, int trials,
                                                   int jobs);

void write_degradation_csv(const std::filesystem::path& path,
                           const std::vector<DegradationRow>& rows);

}  // namespace wta
