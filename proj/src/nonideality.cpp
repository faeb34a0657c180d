#include "wta/nonideality.hpp"

#include <cstdio>
#include <fstream>

namespace wta {

std::vector<DegradationRow> degradation_experiment(const TrialConfig& base,
                                                   const MismatchSpec& spec, int trials,
                                                   int jobs) {
    spec.validate();
    std::vector<DegradationRow> rows;

    auto run_with = [&](const char* label, const MismatchSpec* mm) {
        TrialConfig cfg = base;
        cfg.mismatch = mm;
        BatchStats stats = summarize(run_trial_batch(cfg, trials, jobs));
        rows.push_back({label, stats.success_pct, 0.0});
    };

    run_with("ideal", nullptr);
    const MismatchSource singles[] = {MismatchSource::I0, MismatchSource::TauS,
                                      MismatchSource::Cb, MismatchSource::Vthr,
                                      MismatchSource::Cc};
    std::vector<MismatchSpec> specs;
    specs.reserve(6);
    for (MismatchSource s : singles) specs.push_back(spec.with_only(s));
    specs.push_back(spec.with_all());
    for (std::size_t i = 0; i < 5; ++i)
        run_with(mismatch_source_name(singles[i]), &specs[i]);
    run_with("all", &specs[5]);

    const double ideal_pct = rows.front().success_pct;
    for (auto& r : rows) r.ideal_pct = ideal_pct;
    return rows;
}

void write_degradation_csv(const std::filesystem::path& path,
                           const std::vector<DegradationRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string());
    out << "config_label,success_pct,ideal_pct\n";
    char buf[96];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.2f,%.2f\n", r.label.c_str(), r.success_pct,
                      r.ideal_pct);
        out << buf;
    }
}

}  // namespace wta
