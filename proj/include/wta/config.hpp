#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "wta/common.hpp"
#include "wta/harness.hpp"
#include "wta/mismatch.hpp"

namespace wta {

// Resolved experiment configuration: defaults <- config file <- explicit
// overrides, in that order. Defaults reproduce the standard benchmark setup
// (d = 100, 20 Hz Poisson afferents, T_p = 0.5 s, dt = 0.1 ms).
class ExperimentConfig {
  public:
    ExperimentConfig() : doc_(defaults_json()) {}

    static nlohmann::json defaults_json();

    void merge_file(const std::filesystem::path& path);
    void merge_json(const std::string& text);
    // dotted_key like "stimulus.C" or "training.max_epochs"; value is JSON.
    void set(const std::string& dotted_key, const std::string& json_value);

    const nlohmann::json& doc() const { return doc_; }
    std::string dump() const { return doc_.dump(2); }

    // typed accessors
    StimulusParams stimulus() const;
    int classes() const;
    double sigma_jitter() const;  // resolves sigma_jitter_over_tau_s if set
    int n_sub() const;
    int neurons() const;  // 0 = auto
    u64 seed() const;
    double dt() const;
    int jobs() const;
    int trials() const;
    int n_probes() const;
    bool audit() const;

    int max_epochs() const;
    int sat_window() const;
    double sat_tol() const;
    int sat_patience() const;
    int n_r() const;
    RewireExclusion rewire_exclusion() const;
    int rewire_share_cap() const;
    int ep_ini() const;
    int calib_trials() const;
    double i0_inh() const;
    double i0_inh_ratio() const;

    SweepAxis sweep_axis() const;
    std::vector<double> sweep_grid() const;
    int sweep_trials_per_point() const;

    MismatchSpec mismatch_spec() const;  // cv values + enabled set
    int mismatch_trials() const;

    void validate() const;

  private:
    nlohmann::json doc_;
};

}  // namespace wta
