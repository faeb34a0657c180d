#include "wta/config.hpp"

#include <fstream>

namespace wta {

nlohmann::json ExperimentConfig::defaults_json() {
    return nlohmann::json{
        {"stimulus",
         {{"d", 100},
          {"rate", 20.0},
          {"T_p", 0.5},
          {"C", 4},
          {"active_fraction", 1.0},
          {"sigma_jitter", 0.0},
          {"sigma_jitter_over_tau_s", 0.0}}},
        {"network",
         {{"n_sub", 1},
          {"N", 0},  // 0: 11*C for n_sub=1, C*n_sub otherwise
          {"overrides", nlohmann::json::object()}}},
        {"training",
         {{"max_epochs", 500},
          {"W", 20},
          {"tolerance", 0.003},
          {"patience", 5},
          {"n_R", 0},  // 0: d/4
          {"candidate_exclusion", "branch"},
          {"line_share_cap", 2},
          {"ep_ini", 5},
          {"calib_trials", 200},
          {"I0_inh", 0.0},  // 0: I0_inh_ratio * I_e_av
          {"I0_inh_ratio", 5.0},
          {"trials", 1},
          {"n_probes", 0},
          {"audit", false}}},
        {"sweeps",
         {{"axis", "N_over_C"},
          {"grid", nlohmann::json::array()},
          {"trials_per_point", 50}}},
        {"mismatch",
         {{"cv_I0", 0.13},
          {"cv_tau_s", 0.101},
          {"cv_cb", 0.18},
          {"cv_Vthr", 0.125},
          {"cv_cc", 0.18},
          {"enabled", nlohmann::json::array()},
          {"trials", 50}}},
        {"seed", 1},
        {"dt", 1e-4},
        {"jobs", 1},
        {"output", "out"}};
}

namespace {
void deep_merge(nlohmann::json& base, const nlohmann::json& patch) {
    if (!patch.is_object()) {
        base = patch;
        return;
    }
    if (!base.is_object()) base = nlohmann::json::object();
    for (auto it = patch.begin(); it != patch.end(); ++it) deep_merge(base[it.key()], it.value());
}
}  // namespace

void ExperimentConfig::merge_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    nlohmann::json patch;
    try {
        in >> patch;
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError("config file " + path.string() + ": " + ex.what());
    }
    deep_merge(doc_, patch);
}

void ExperimentConfig::merge_json(const std::string& text) {
    try {
        deep_merge(doc_, nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("config JSON: ") + ex.what());
    }
}

void ExperimentConfig::set(const std::string& dotted_key, const std::string& json_value) {
    nlohmann::json value;
    try {
        value = nlohmann::json::parse(json_value);
    } catch (const nlohmann::json::exception&) {
        value = json_value;  // bare strings are taken literally
    }
    nlohmann::json* node = &doc_;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted_key.find('.', start);
        const std::string key = dotted_key.substr(start, dot - start);
        if (key.empty()) throw ParamError("empty segment in config key '" + dotted_key + "'");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

StimulusParams ExperimentConfig::stimulus() const {
    StimulusParams s;
    const auto& j = doc_.at("stimulus");
    s.d = j.at("d");
    s.rate_hz = j.at("rate");
    s.t_p = j.at("T_p");
    s.active_fraction = j.at("active_fraction");
    return s;
}

int ExperimentConfig::classes() const { return doc_.at("stimulus").at("C"); }

double ExperimentConfig::sigma_jitter() const {
    const auto& j = doc_.at("stimulus");
    const double ratio = j.at("sigma_jitter_over_tau_s");
    if (ratio > 0.0) {
        const StimulusParams s = stimulus();
        const int d_active = std::max(1, static_cast<int>(std::lround(s.d * s.active_fraction)));
        return ratio * tau_s_opt_seconds(d_active, s.rate_hz);
    }
    return j.at("sigma_jitter");
}

int ExperimentConfig::n_sub() const { return doc_.at("network").at("n_sub"); }
int ExperimentConfig::neurons() const { return doc_.at("network").at("N"); }
u64 ExperimentConfig::seed() const { return doc_.at("seed"); }
double ExperimentConfig::dt() const { return doc_.at("dt"); }
int ExperimentConfig::jobs() const { return doc_.at("jobs"); }
int ExperimentConfig::trials() const { return doc_.at("training").at("trials"); }
int ExperimentConfig::n_probes() const { return doc_.at("training").at("n_probes"); }
bool ExperimentConfig::audit() const { return doc_.at("training").at("audit"); }
int ExperimentConfig::max_epochs() const { return doc_.at("training").at("max_epochs"); }
int ExperimentConfig::sat_window() const { return doc_.at("training").at("W"); }
double ExperimentConfig::sat_tol() const { return doc_.at("training").at("tolerance"); }
int ExperimentConfig::sat_patience() const { return doc_.at("training").at("patience"); }
int ExperimentConfig::n_r() const { return doc_.at("training").at("n_R"); }
int ExperimentConfig::rewire_share_cap() const {
    return doc_.at("training").at("line_share_cap");
}

RewireExclusion ExperimentConfig::rewire_exclusion() const {
    const std::string v = doc_.at("training").at("candidate_exclusion");
    if (v == "none") return RewireExclusion::None;
    if (v == "branch") return RewireExclusion::Branch;
    if (v == "neuron") return RewireExclusion::Neuron;
    throw ParamError("training.candidate_exclusion must be none|branch|neuron");
}
int ExperimentConfig::ep_ini() const { return doc_.at("training").at("ep_ini"); }
int ExperimentConfig::calib_trials() const { return doc_.at("training").at("calib_trials"); }
double ExperimentConfig::i0_inh() const { return doc_.at("training").at("I0_inh"); }
double ExperimentConfig::i0_inh_ratio() const { return doc_.at("training").at("I0_inh_ratio"); }

SweepAxis ExperimentConfig::sweep_axis() const {
    const std::string axis = doc_.at("sweeps").at("axis");
    if (axis == "N_over_C") return SweepAxis::NOverC;
    if (axis == "sigma_jitter") return SweepAxis::SigmaJitter;
    if (axis == "n_sub") return SweepAxis::NSub;
    throw ParamError("unknown sweep axis '" + axis + "'");
}

std::vector<double> ExperimentConfig::sweep_grid() const {
    return doc_.at("sweeps").at("grid").get<std::vector<double>>();
}

int ExperimentConfig::sweep_trials_per_point() const {
    return doc_.at("sweeps").at("trials_per_point");
}

MismatchSpec ExperimentConfig::mismatch_spec() const {
    const auto& j = doc_.at("mismatch");
    MismatchSpec s;
    s.cv_I0 = j.at("cv_I0");
    s.cv_tau_s = j.at("cv_tau_s");
    s.cv_cb = j.at("cv_cb");
    s.cv_Vthr = j.at("cv_Vthr");
    s.cv_cc = j.at("cv_cc");
    for (const auto& name : j.at("enabled")) {
        const std::string v = name;
        if (v == "I0") s.enable_I0 = true;
        else if (v == "tau_s") s.enable_tau_s = true;
        else if (v == "cb") s.enable_cb = true;
        else if (v == "V_thr") s.enable_Vthr = true;
        else if (v == "cc") s.enable_cc = true;
        else throw ParamError("unknown mismatch source '" + v + "'");
    }
    return s;
}

int ExperimentConfig::mismatch_trials() const { return doc_.at("mismatch").at("trials"); }

void ExperimentConfig::validate() const {
    const StimulusParams s = stimulus();
    if (s.d < 1) throw ParamError("stimulus.d must be >= 1");
    if (s.rate_hz < 0.0) throw ParamError("stimulus.rate must be >= 0");
    if (s.t_p <= 0.0) throw ParamError("stimulus.T_p must be > 0");
    if (s.active_fraction <= 0.0 || s.active_fraction > 1.0)
        throw ParamError("stimulus.active_fraction must be in (0, 1]");
    if (classes() < 1) throw ParamError("stimulus.C must be >= 1");
    if (n_sub() < 1) throw ParamError("network.n_sub must be >= 1");
    if (!(dt() > 0.0)) throw ParamError("dt must be > 0");
    if (jobs() < 1) throw ParamError("jobs must be >= 1");
    if (trials() < 1) throw ParamError("training.trials must be >= 1");
    mismatch_spec().validate();
}

}  // namespace wta
