#pragma once

#include <string>
#include <vector>

#include "wta/common.hpp"
#include "wta/wiring.hpp"

namespace wta {

enum class MismatchSource { I0, TauS, Cb, Vthr, Cc };

constexpr const char* mismatch_source_name(MismatchSource s) {
    switch (s) {
        case MismatchSource::I0: return "I0";
        case MismatchSource::TauS: return "tau_s";
        case MismatchSource::Cb: return "cb";
        case MismatchSource::Vthr: return "V_thr";
        case MismatchSource::Cc: return "cc";
    }
    return "?";
}

// Fabrication spread (sigma/mu) of the analog subcircuits, plus which sources
// are injected. Defaults are the worst-case Monte Carlo figures of the
// reference circuits.
struct MismatchSpec {
    double cv_I0 = 0.13;
    double cv_tau_s = 0.101;
    double cv_cb = 0.18;
    double cv_Vthr = 0.125;
    double cv_cc = 0.18;
    bool enable_I0 = false;
    bool enable_tau_s = false;
    bool enable_cb = false;
    bool enable_Vthr = false;
    bool enable_cc = false;

    bool any_enabled() const {
        return enable_I0 || enable_tau_s || enable_cb || enable_Vthr || enable_cc;
    }
    void validate() const {
        if (cv_I0 < 0 || cv_tau_s < 0 || cv_cb < 0 || cv_Vthr < 0 || cv_cc < 0)
            throw ParamError("mismatch sigma/mu ratios must be >= 0");
    }
    MismatchSpec with_only(MismatchSource s) const;
    MismatchSpec with_all() const;
};

// Frozen multiplicative factors for one fabricated network instance:
// per synapse slot for the synapse circuit (I0, tau_s), per branch for the
// squaring block (cb) and the fitness calculator (cc), per neuron for the
// firing threshold.
struct MismatchInstance {
    WiringGeometry geom;
    std::vector<double> f_I0;     // [n][j][p]
    std::vector<double> f_tau_s;  // [n][j][p]
    std::vector<double> f_cb;     // [n][j]
    std::vector<double> f_cc;     // [n][j]
    std::vector<double> f_Vthr;   // [n]

    bool is_ideal() const;

    double slot_I0(int n, int j, int p) const {
        return f_I0[(static_cast<std::size_t>(n) * geom.branches + j) * geom.slots_per_branch + p];
    }
    double slot_tau_s(int n, int j, int p) const {
        return f_tau_s[(static_cast<std::size_t>(n) * geom.branches + j) * geom.slots_per_branch + p];
    }
    double branch_cb(int n, int j) const {
        return f_cb[static_cast<std::size_t>(n) * geom.branches + j];
    }
    double branch_cc(int n, int j) const {
        return f_cc[static_cast<std::size_t>(n) * geom.branches + j];
    }
    double neuron_Vthr(int n) const { return f_Vthr[static_cast<std::size_t>(n)]; }
};

// Draws one frozen instance: each enabled factor ~ Gaussian(1, cv^2) truncated
// to [0.1, inf); disabled sources stay exactly 1.
MismatchInstance sample_mismatch(const MismatchSpec& spec, const WiringGeometry& geom, Rng& rng);

}  // namespace wta
