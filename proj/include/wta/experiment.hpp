#pragma once

#include <filesystem>
#include <string>

#include "wta/config.hpp"

namespace wta {

// Ties the modules into the reproducible CLI-facing experiments. Every
// command creates the output directory, echoes the resolved configuration to
// config.json there, and derives all randomness from the single master seed.
class Experiment {
  public:
    explicit Experiment(ExperimentConfig cfg) : cfg_(std::move(cfg)) {}

    const ExperimentConfig& config() const { return cfg_; }

    // Runs autotune honoring any network.overrides entries.
    TuneResult tune() const;

    void run_gen(const std::filesystem::path& out_dir) const;
    TuneResult run_tune(const std::filesystem::path& out_dir) const;
    void run_train(const std::filesystem::path& out_dir) const;
    void run_sweep(const std::filesystem::path& out_dir) const;
    void run_mismatch(const std::filesystem::path& out_dir) const;
    void run_eval(const std::filesystem::path& snapshot_path,
                  const std::filesystem::path& patterns_path,
                  const std::filesystem::path& out_dir) const;

  private:
    TrialConfig trial_config(const TuneResult& tune) const;
    std::filesystem::path prepare_out_dir(const std::filesystem::path& out_dir) const;

    ExperimentConfig cfg_;
};

}  // namespace wta
