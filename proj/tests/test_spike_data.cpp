#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "wta/spike_data.hpp"

using namespace wta;

namespace {
std::filesystem::path tmp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}
}  // namespace

TEST_CASE("poisson template matches the requested rate") {
    Rng rng = make_rng(42, "poisson");
    const int d = 400;
    PatternTemplate tpl = gen_poisson_template(d, 20.0, 0.5, 1.0, 1, rng);
    CHECK(tpl.afferent_count() == d);
    CHECK(tpl.class_label == 1);
    tpl.validate();

    // mean count per afferent is rate * T = 10; se of the mean ~ sqrt(10/400)
    const double mean = static_cast<double>(tpl.total_spikes()) / d;
    CHECK(mean == doctest::Approx(10.0).epsilon(0.08));

    for (const auto& a : tpl.afferents)
        for (double t : a.times) {
            CHECK(t >= 0.0);
            CHECK(t <= 0.5);
        }
}

TEST_CASE("active_fraction empties the right number of afferents") {
    Rng rng = make_rng(7, "half");
    PatternTemplate tpl = gen_poisson_template(100, 20.0, 0.5, 0.5, 2, rng);
    int inactive = 0;
    for (int i = 0; i < 100; ++i) {
        if (!tpl.active_mask[i]) {
            ++inactive;
            CHECK(tpl.afferents[i].empty());
        }
    }
    CHECK(inactive == 50);
    tpl.validate();
}

TEST_CASE("template generation is deterministic under a fixed seed") {
    Rng a = make_rng(123, "gen");
    Rng b = make_rng(123, "gen");
    PatternTemplate ta = gen_poisson_template(50, 20.0, 0.5, 1.0, 1, a);
    PatternTemplate tb = gen_poisson_template(50, 20.0, 0.5, 1.0, 1, b);
    for (int i = 0; i < 50; ++i) CHECK(ta.afferents[i].times == tb.afferents[i].times);
}

TEST_CASE("validate rejects malformed patterns") {
    Rng rng = make_rng(1, "v");
    PatternTemplate tpl = gen_poisson_template(10, 20.0, 0.5, 1.0, 1, rng);

    PatternTemplate bad = tpl;
    bad.afferents[0].times = {0.2, 0.1};
    CHECK_THROWS_AS(bad.validate(), ParamError);

    bad = tpl;
    bad.afferents[0].times = {0.7};
    CHECK_THROWS_AS(bad.validate(), ParamError);

    bad = tpl;
    bad.active_mask[0] = 0;
    if (bad.afferents[0].empty()) bad.afferents[0].times = {0.1};
    CHECK_THROWS_AS(bad.validate(), ParamError);

    bad = tpl;
    bad.active_mask.pop_back();
    CHECK_THROWS_AS(bad.validate(), ParamError);
}

TEST_CASE("gen_poisson_template validates its arguments") {
    Rng rng = make_rng(1, "args");
    CHECK_THROWS_AS(gen_poisson_template(0, 20.0, 0.5, 1.0, 1, rng), ParamError);
    CHECK_THROWS_AS(gen_poisson_template(10, -1.0, 0.5, 1.0, 1, rng), ParamError);
    CHECK_THROWS_AS(gen_poisson_template(10, 20.0, 0.0, 1.0, 1, rng), ParamError);
    CHECK_THROWS_AS(gen_poisson_template(10, 20.0, 0.5, 0.0, 1, rng), ParamError);
    CHECK_THROWS_AS(gen_poisson_template(10, 20.0, 0.5, 1.1, 1, rng), ParamError);
}

TEST_CASE("jitter shifts spikes with the requested sigma") {
    Rng rng = make_rng(9, "jit");
    PatternTemplate tpl = gen_poisson_template(300, 20.0, 0.5, 1.0, 1, rng);

    SUBCASE("sigma zero is the identity") {
        PatternTemplate out = apply_jitter(tpl, {0.0}, rng);
        for (int i = 0; i < 300; ++i) CHECK(out.afferents[i].times == tpl.afferents[i].times);
    }

    SUBCASE("sigma sets the displacement spread") {
        const double sigma = 0.002;  // small against T_p: clamping is negligible
        PatternTemplate out = apply_jitter(tpl, {sigma}, rng);
        // per-afferent counts are preserved and times remain sorted in range
        double sq = 0.0;
        long n = 0;
        for (int i = 0; i < 300; ++i) {
            REQUIRE(out.afferents[i].size() == tpl.afferents[i].size());
            CHECK(std::is_sorted(out.afferents[i].times.begin(), out.afferents[i].times.end()));
            // sorting within an afferent can permute neighbours; compare the
            // displacement spread through per-afferent sums, which sorting
            // cannot change
            for (std::size_t s = 0; s < out.afferents[i].size(); ++s) {
                const double delta = out.afferents[i].times[s] - tpl.afferents[i].times[s];
                sq += delta * delta;
                ++n;
            }
        }
        // sorted pairing only shrinks displacements, so allow a loose band
        const double rms = std::sqrt(sq / static_cast<double>(n));
        CHECK(rms > 0.5 * sigma);
        CHECK(rms < 1.5 * sigma);
    }

    SUBCASE("negative sigma is rejected") {
        CHECK_THROWS_AS(apply_jitter(tpl, {-0.001}, rng), ParamError);
    }
}

TEST_CASE("epochs hold one fresh pattern per class in random order") {
    Rng rng = make_rng(5, "ep");
    std::vector<PatternTemplate> templates;
    for (int c = 1; c <= 4; ++c)
        templates.push_back(gen_poisson_template(30, 20.0, 0.5, 1.0, c, rng));

    Epoch ep = make_epoch(templates, {0.0}, rng);
    REQUIRE(ep.patterns.size() == 4);
    std::set<int> labels;
    for (const auto& p : ep.patterns) labels.insert(p.class_label);
    CHECK(labels == std::set<int>{1, 2, 3, 4});

    // order varies across epochs drawn from one stream
    bool reordered = false;
    for (int trial = 0; trial < 20 && !reordered; ++trial) {
        Epoch other = make_epoch(templates, {0.0}, rng);
        for (std::size_t i = 0; i < 4; ++i)
            if (other.patterns[i].class_label != ep.patterns[i].class_label) reordered = true;
    }
    CHECK(reordered);

    templates.push_back(templates.front());
    CHECK_THROWS_AS(make_epoch(templates, {0.0}, rng), ParamError);
}

TEST_CASE("pattern files round-trip") {
    Rng rng = make_rng(77, "io");
    std::vector<PatternTemplate> templates;
    for (int c = 1; c <= 3; ++c)
        templates.push_back(gen_poisson_template(40, 20.0, 0.5, 0.8, c, rng));
    PatternSetMeta meta{40, 0.5, 3, 20.0, 0.8, 77};

    const auto path = tmp_file("wta_patterns_roundtrip.csv");
    save_patterns(path, templates, meta);

    PatternSetMeta got;
    std::vector<std::string> warnings;
    auto loaded = load_patterns(path, &got, &warnings);
    CHECK(warnings.empty());
    CHECK(got.d == 40);
    CHECK(got.t_p == doctest::Approx(0.5));
    CHECK(got.classes == 3);
    CHECK(got.rate_hz == doctest::Approx(20.0));
    CHECK(got.active_fraction == doctest::Approx(0.8));
    CHECK(got.seed == 77);

    REQUIRE(loaded.size() == 3);
    for (std::size_t c = 0; c < 3; ++c) {
        const auto* src = &templates[c];
        const PatternTemplate* dst = nullptr;
        for (const auto& tpl : loaded)
            if (tpl.class_label == src->class_label) dst = &tpl;
        REQUIRE(dst != nullptr);
        CHECK(dst->active_mask == src->active_mask);
        REQUIRE(dst->afferent_count() == src->afferent_count());
        for (int i = 0; i < src->afferent_count(); ++i) {
            REQUIRE(dst->afferents[i].size() == src->afferents[i].size());
            for (std::size_t s = 0; s < src->afferents[i].size(); ++s)
                CHECK(std::abs(dst->afferents[i].times[s] - src->afferents[i].times[s]) <= 1e-9);
        }
        dst->validate();
    }
    std::filesystem::remove(path);
}

TEST_CASE("loading unsorted spike files sorts and warns") {
    const auto path = tmp_file("wta_patterns_unsorted.csv");
    {
        std::ofstream out(path);
        out << "# d=2\n# T_p=0.5\n# C=1\n";
        out << "class_label,afferent_index,time_seconds\n";
        out << "1,0,0.300000000\n1,0,0.100000000\n1,1,0.200000000\n";
    }
    std::vector<std::string> warnings;
    auto loaded = load_patterns(path, nullptr, &warnings);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].afferents[0].times == std::vector<double>{0.1, 0.3});
    CHECK(!warnings.empty());
    loaded[0].validate();
    std::filesystem::remove(path);
}

TEST_CASE("load failures raise the right error types") {
    CHECK_THROWS_AS(load_patterns(tmp_file("wta_no_such_file.csv")), IoError);

    const auto path = tmp_file("wta_patterns_bad.csv");
    {
        std::ofstream out(path);
        out << "not,a,header\n";
    }
    CHECK_THROWS_AS(load_patterns(path), FormatError);
    {
        std::ofstream out(path);
        out << "class_label,afferent_index,time_seconds\n";  // d/T_p metadata missing
    }
    CHECK_THROWS_AS(load_patterns(path), FormatError);
    std::filesystem::remove(path);
}
