#include "wta/mismatch.hpp"

#include <algorithm>

namespace wta {

MismatchSpec MismatchSpec::with_only(MismatchSource s) const {
    MismatchSpec out = *this;
    out.enable_I0 = s == MismatchSource::I0;
    out.enable_tau_s = s == MismatchSource::TauS;
    out.enable_cb = s == MismatchSource::Cb;
    out.enable_Vthr = s == MismatchSource::Vthr;
    out.enable_cc = s == MismatchSource::Cc;
    return out;
}

MismatchSpec MismatchSpec::with_all() const {
    MismatchSpec out = *this;
    out.enable_I0 = out.enable_tau_s = out.enable_cb = out.enable_Vthr = out.enable_cc = true;
    return out;
}

bool MismatchInstance::is_ideal() const {
    auto all_one = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x == 1.0; });
    };
    return all_one(f_I0) && all_one(f_tau_s) && all_one(f_cb) && all_one(f_cc) && all_one(f_Vthr);
}

namespace {
void fill_factors(std::vector<double>& out, std::size_t count, bool enabled, double cv, Rng& rng) {
    out.assign(count, 1.0);
    if (!enabled || cv == 0.0) return;
    std::normal_distribution<double> dist(1.0, cv);
    for (auto& f : out) {
        double v;
        do {
            v = dist(rng);
        } while (v < 0.1);
        f = v;
    }
}
}  // namespace

MismatchInstance sample_mismatch(const MismatchSpec& spec, const WiringGeometry& geom, Rng& rng) {
    spec.validate();
    MismatchInstance inst;
    inst.geom = geom;
    const std::size_t n_slots =
        static_cast<std::size_t>(geom.neurons) * geom.slots_per_neuron();
    const std::size_t n_branches = static_cast<std::size_t>(geom.neurons) * geom.branches;
    fill_factors(inst.f_I0, n_slots, spec.enable_I0, spec.cv_I0, rng);
    fill_factors(inst.f_tau_s, n_slots, spec.enable_tau_s, spec.cv_tau_s, rng);
    fill_factors(inst.f_cb, n_branches, spec.enable_cb, spec.cv_cb, rng);
    fill_factors(inst.f_cc, n_branches, spec.enable_cc, spec.cv_cc, rng);
    fill_factors(inst.f_Vthr, static_cast<std::size_t>(geom.neurons), spec.enable_Vthr,
                 spec.cv_Vthr, rng);
    return inst;
}

}  // namespace wta
