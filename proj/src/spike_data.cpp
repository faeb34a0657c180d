#include "wta/spike_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace wta {

std::size_t PatternTemplate::total_spikes() const {
    std::size_t n = 0;
    for (const auto& a : afferents) n += a.size();
    return n;
}

void PatternTemplate::validate() const {
    if (afferents.empty()) throw ParamError("pattern has no afferents");
    if (duration <= 0.0) throw ParamError("pattern duration must be > 0");
    if (active_mask.size() != afferents.size())
        throw ParamError("active_mask size does not match afferent count");
    for (std::size_t i = 0; i < afferents.size(); ++i) {
        const auto& ts = afferents[i].times;
        if (!active_mask[i] && !ts.empty())
            throw ParamError("inactive afferent " + std::to_string(i) + " contains spikes");
        if (!std::is_sorted(ts.begin(), ts.end()))
            throw ParamError("afferent " + std::to_string(i) + " spike times not sorted");
        if (!ts.empty() && (ts.front() < 0.0 || ts.back() > duration))
            throw ParamError("afferent " + std::to_string(i) + " spike time out of [0, T_p]");
    }
}

PatternTemplate gen_poisson_template(int d, double rate_hz, double duration_s,
                                     double active_fraction, int class_label, Rng& rng) {
    if (d < 1) throw ParamError("afferent count must be >= 1");
    if (rate_hz < 0.0) throw ParamError("rate must be >= 0");
    if (duration_s <= 0.0) throw ParamError("duration must be > 0");
    if (active_fraction <= 0.0 || active_fraction > 1.0)
        throw ParamError("active_fraction must be in (0, 1]");

    PatternTemplate tpl;
    tpl.class_label = class_label;
    tpl.duration = duration_s;
    tpl.afferents.resize(d);
    tpl.active_mask.assign(d, 1);

    // Choose the empty afferents once; the mask is a property of the template.
    const int n_empty = static_cast<int>(std::floor(d * (1.0 - active_fraction)));
    if (n_empty > 0) {
        std::vector<int> idx(d);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (int i = 0; i < n_empty; ++i) tpl.active_mask[idx[i]] = 0;
    }

    // Homogeneous Poisson process via exponential inter-arrival times. Spike
    // times stay continuous; the simulator bins them at its own dt.
    std::exponential_distribution<double> exp_dist(rate_hz > 0.0 ? rate_hz : 1.0);
    for (int i = 0; i < d; ++i) {
        if (!tpl.active_mask[i] || rate_hz <= 0.0) continue;
        double t = exp_dist(rng);
        auto& ts = tpl.afferents[i].times;
        while (t <= duration_s) {
            ts.push_back(t);
            t += exp_dist(rng);
        }
    }
    return tpl;
}

PatternTemplate apply_jitter(const PatternTemplate& tpl, const JitterSpec& spec, Rng& rng) {
    if (spec.sigma < 0.0) throw ParamError("jitter sigma must be >= 0");
    if (spec.sigma == 0.0) return tpl;

    PatternTemplate out = tpl;
    std::normal_distribution<double> noise(0.0, spec.sigma);
    for (auto& aff : out.afferents) {
        for (double& t : aff.times) {
            t = std::clamp(t + noise(rng), 0.0, tpl.duration);
        }
        std::sort(aff.times.begin(), aff.times.end());
    }
    return out;
}

Epoch make_epoch(const std::vector<PatternTemplate>& templates, const JitterSpec& spec, Rng& rng) {
    if (templates.empty()) throw ParamError("epoch needs at least one class template");
    std::vector<int> seen;
    for (const auto& tpl : templates) {
        if (std::find(seen.begin(), seen.end(), tpl.class_label) != seen.end())
            throw ParamError("duplicate class label " + std::to_string(tpl.class_label));
        seen.push_back(tpl.class_label);
    }

    Epoch ep;
    ep.patterns.reserve(templates.size());
    for (const auto& tpl : templates) ep.patterns.push_back(apply_jitter(tpl, spec, rng));
    std::shuffle(ep.patterns.begin(), ep.patterns.end(), rng);
    return ep;
}

void save_patterns(const std::filesystem::path& path,
                   const std::vector<PatternTemplate>& templates, const PatternSetMeta& meta) {
    if (templates.empty()) throw ParamError("refusing to save an empty pattern set");
    for (const auto& tpl : templates) tpl.validate();

    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");

    out << "# d=" << meta.d << "\n";
    out << "# T_p=" << meta.t_p << "\n";
    out << "# C=" << meta.classes << "\n";
    out << "# rate=" << meta.rate_hz << "\n";
    out << "# active_fraction=" << meta.active_fraction << "\n";
    out << "# seed=" << meta.seed << "\n";
    for (const auto& tpl : templates) {
        std::string inactive;
        for (int i = 0; i < tpl.afferent_count(); ++i) {
            if (!tpl.active_mask[i]) {
                if (!inactive.empty()) inactive += ' ';
                inactive += std::to_string(i);
            }
        }
        if (!inactive.empty())
            out << "# inactive " << tpl.class_label << " " << inactive << "\n";
    }
    out << "class_label,afferent_index,time_seconds\n";
    char buf[64];
    for (const auto& tpl : templates) {
        for (int i = 0; i < tpl.afferent_count(); ++i) {
            for (double t : tpl.afferents[i].times) {
                std::snprintf(buf, sizeof(buf), "%d,%d,%.9f\n", tpl.class_label, i, t);
                out << buf;
            }
        }
    }
    if (!out) throw IoError("write failure on " + path.string());
}

std::vector<PatternTemplate> load_patterns(const std::filesystem::path& path,
                                           PatternSetMeta* meta_out,
                                           std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    PatternSetMeta meta;
    std::vector<std::pair<int, std::vector<int>>> inactive_lists;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    std::vector<PatternTemplate> result;
    auto find_class = [&](int label) -> PatternTemplate& {
        for (auto& tpl : result)
            if (tpl.class_label == label) return tpl;
        PatternTemplate tpl;
        tpl.class_label = label;
        tpl.duration = meta.t_p;
        tpl.afferents.resize(meta.d);
        tpl.active_mask.assign(meta.d, 1);
        result.push_back(std::move(tpl));
        return result.back();
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string key;
            ss >> key;
            auto val_after = [&](const std::string& k) { return k.substr(k.find('=') + 1); };
            if (key.rfind("d=", 0) == 0) meta.d = std::stoi(val_after(key));
            else if (key.rfind("T_p=", 0) == 0) meta.t_p = std::stod(val_after(key));
            else if (key.rfind("C=", 0) == 0) meta.classes = std::stoi(val_after(key));
            else if (key.rfind("rate=", 0) == 0) meta.rate_hz = std::stod(val_after(key));
            else if (key.rfind("active_fraction=", 0) == 0)
                meta.active_fraction = std::stod(val_after(key));
            else if (key.rfind("seed=", 0) == 0) meta.seed = std::stoull(val_after(key));
            else if (key == "inactive") {
                int label = 0;
                ss >> label;
                std::vector<int> lines;
                int idx;
                while (ss >> idx) lines.push_back(idx);
                inactive_lists.emplace_back(label, std::move(lines));
            }
            continue;
        }
        if (!header_seen) {
            if (line.rfind("class_label", 0) != 0)
                throw FormatError(path.string() + ":" + std::to_string(lineno) +
                                  ": expected column header line");
            if (meta.d <= 0 || meta.t_p <= 0.0)
                throw FormatError(path.string() + ": missing d/T_p metadata in header");
            header_seen = true;
            continue;
        }
        int label = 0, aff = 0;
        double t = 0.0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf", &label, &aff, &t) != 3)
            throw FormatError(path.string() + ":" + std::to_string(lineno) +
                              ": malformed record '" + line + "'");
        if (aff < 0 || aff >= meta.d)
            throw FormatError(path.string() + ":" + std::to_string(lineno) +
                              ": afferent index out of range");
        if (t < 0.0 || t > meta.t_p)
            throw FormatError(path.string() + ":" + std::to_string(lineno) +
                              ": spike time out of [0, T_p]");
        find_class(label).afferents[aff].times.push_back(t);
    }
    if (!header_seen) throw FormatError(path.string() + ": no column header found");
    if (result.empty()) throw FormatError(path.string() + ": file contains no spike records");

    for (auto& [label, lines] : inactive_lists) {
        auto& tpl = find_class(label);
        for (int idx : lines) {
            if (idx < 0 || idx >= meta.d)
                throw FormatError(path.string() + ": inactive index out of range for class " +
                                  std::to_string(label));
            tpl.active_mask[idx] = 0;
        }
    }

    bool resorted = false;
    for (auto& tpl : result) {
        for (auto& aff : tpl.afferents) {
            if (!std::is_sorted(aff.times.begin(), aff.times.end())) {
                std::sort(aff.times.begin(), aff.times.end());
                resorted = true;
            }
        }
        tpl.validate();
    }
    if (resorted && warnings)
        warnings->push_back(path.string() + ": unsorted spike times were re-sorted on load");

    if (meta_out) *meta_out = meta;
    return result;
}

}  // namespace wta
