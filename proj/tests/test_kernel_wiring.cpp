#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "wta/kernel.hpp"
#include "wta/wiring.hpp"

using namespace wta;

TEST_CASE("kernel peak is normalized to one") {
    const double tau_s = 0.0233;
    KernelParams p{1.4351, tau_s, tau_s / 10.0};
    p.validate();

    const double t_peak = kernel_peak_time(p);
    CHECK(kernel_value(p, t_peak) == doctest::Approx(1.0).epsilon(0.001));

    // closed-form argmax agrees with a fine numeric scan
    double best_t = 0.0, best_v = 0.0;
    for (double t = 0.0; t < 5.0 * tau_s; t += 1e-6) {
        const double v = kernel_value(p, t);
        if (v > best_v) {
            best_v = v;
            best_t = t;
        }
    }
    CHECK(t_peak == doctest::Approx(best_t).epsilon(1e-3));
    CHECK(best_v <= 1.001);
}

TEST_CASE("kernel is causal and vanishes at zero") {
    KernelParams p{1.4351, 0.02, 0.002};
    CHECK(kernel_value(p, -1e-9) == 0.0);
    CHECK(kernel_value(p, 0.0) == 0.0);
    CHECK(kernel_value(p, 1e-4) > 0.0);
    CHECK(kernel_value(p, 10.0) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("kernel and inhibition parameter validation") {
    CHECK_THROWS_AS((KernelParams{0.0, 0.02, 0.002}.validate()), ParamError);
    CHECK_THROWS_AS((KernelParams{1.0, 0.002, 0.02}.validate()), ParamError);
    CHECK_THROWS_AS((KernelParams{1.0, 0.02, 0.0}.validate()), ParamError);
    CHECK_THROWS_AS((InhibitionParams{0.0, 0.1, 0.01}.validate()), ParamError);
    CHECK_THROWS_AS((InhibitionParams{1.0, 0.01, 0.1}.validate()), ParamError);
}

TEST_CASE("square-law nonlinearity fixed points") {
    const double x_thr = 2.3;
    CHECK(branch_nonlinearity(0.0, x_thr) == 0.0);
    CHECK(branch_nonlinearity(x_thr, x_thr) == doctest::Approx(x_thr));
    CHECK(branch_nonlinearity_deriv(x_thr, x_thr) == doctest::Approx(2.0));
    CHECK(branch_nonlinearity(0.5 * x_thr, x_thr) == doctest::Approx(0.25 * x_thr));
}

TEST_CASE("random wiring satisfies the slot constraints") {
    WiringGeometry geom{6, 25, 4, 100};
    Rng rng = make_rng(3, "wiring");
    Wiring w = Wiring::random(geom, rng);
    w.check_invariant();
    CHECK(w.geometry() == geom);

    for (int n = 0; n < geom.neurons; ++n) {
        auto counts = w.count_matrix(n);
        REQUIRE(static_cast<int>(counts.size()) == geom.branches * geom.inputs);
        for (int j = 0; j < geom.branches; ++j) {
            int row = 0;
            for (int i = 0; i < geom.inputs; ++i) {
                row += counts[j * geom.inputs + i];
                CHECK(counts[j * geom.inputs + i] == w.weight(n, j, i));
            }
            CHECK(row == geom.slots_per_branch);
        }
    }
}

TEST_CASE("random wiring is deterministic and draws with replacement") {
    WiringGeometry geom{2, 4, 8, 10};
    Rng a = make_rng(5, "w");
    Rng b = make_rng(5, "w");
    Wiring wa = Wiring::random(geom, a);
    Wiring wb = Wiring::random(geom, b);
    CHECK(wa.slot_lines() == wb.slot_lines());

    // k=8 slots over d=10 lines: a duplicate line on some branch is near
    // certain across 8 branches
    bool duplicate = false;
    for (int n = 0; n < geom.neurons && !duplicate; ++n)
        for (int j = 0; j < geom.branches && !duplicate; ++j)
            for (int i = 0; i < geom.inputs; ++i)
                if (wa.weight(n, j, i) > 1) duplicate = true;
    CHECK(duplicate);
}

TEST_CASE("set_line rewires a single slot") {
    WiringGeometry geom{1, 2, 3, 20};
    Rng rng = make_rng(8, "set");
    Wiring w = Wiring::random(geom, rng);
    const int old_line = w.line(0, 1, 2);
    const int new_line = (old_line + 1) % geom.inputs;
    w.set_line(0, 1, 2, new_line);
    CHECK(w.line(0, 1, 2) == new_line);
    w.check_invariant();
    CHECK_THROWS_AS(w.set_line(0, 1, 2, geom.inputs), IntegrityError);
    CHECK_THROWS_AS(w.set_line(0, 1, 2, -1), IntegrityError);
}

TEST_CASE("corrupted slot tables fail the integrity check") {
    WiringGeometry geom{1, 2, 2, 5};
    CHECK_THROWS_AS(Wiring(geom, {0, 1, 2, 5}), IntegrityError);
    CHECK_THROWS_AS(Wiring(geom, {0, 1, 2}), IntegrityError);
    Wiring ok(geom, {0, 1, 2, 3});
    ok.check_invariant();
}
