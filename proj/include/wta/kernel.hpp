#pragma once

#include <cmath>

#include "wta/common.hpp"

namespace wta {

// Excitatory post-synaptic current kernel K(t) = I0 (e^{-t/tau_s} - e^{-t/tau_f}),
// zero for t < 0. With tau_f = tau_s/10 the peak value is I0 / 1.4351, so
// I0 = 1.4351 normalizes the per-unit-weight peak to 1.
struct KernelParams {
    double I0 = 1.4351;
    double tau_s = 0.0;
    double tau_f = 0.0;

    void validate() const {
        if (!(I0 > 0.0)) throw ParamError("kernel I0 must be > 0");
        if (!(tau_s > tau_f && tau_f > 0.0))
            throw ParamError("kernel requires tau_s > tau_f > 0");
    }
};

struct InhibitionParams {
    double I0_inh = 0.0;
    double tau_s_inh = 0.0;
    double tau_f_inh = 0.0;

    void validate() const {
        if (!(I0_inh > 0.0)) throw ParamError("inhibition I0 must be > 0");
        if (!(tau_s_inh > tau_f_inh && tau_f_inh > 0.0))
            throw ParamError("inhibition requires tau_s > tau_f > 0");
    }
};

inline double kernel_value(const KernelParams& p, double t) {
    if (t < 0.0) return 0.0;
    return p.I0 * (std::exp(-t / p.tau_s) - std::exp(-t / p.tau_f));
}

inline double kernel_value(double i0, double tau_s, double tau_f, double t) {
    if (t < 0.0) return 0.0;
    return i0 * (std::exp(-t / tau_s) - std::exp(-t / tau_f));
}

// argmax_t K(t) in closed form.
inline double kernel_peak_time(const KernelParams& p) {
    return std::log(p.tau_s / p.tau_f) / (1.0 / p.tau_f - 1.0 / p.tau_s);
}

// Square-law dendritic nonlinearity b(z) = z^2 / x_thr and its derivative.
inline double branch_nonlinearity(double z, double x_thr) { return z * z / x_thr; }
inline double branch_nonlinearity_deriv(double z, double x_thr) { return 2.0 * z / x_thr; }

}  // namespace wta
