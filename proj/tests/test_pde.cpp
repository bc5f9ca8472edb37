#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "r2f2/pde.hpp"

using namespace r2f2;

TEST_CASE("heat init") {
    const int n = 257;
    const std::vector<float> us = heat1d_init(HeatInit::Sin, n, 100.0, 0.0);
    CHECK(us[0] == 0.0f);
    CHECK(us[n - 1] == 0.0f);
    for (int i = 1; i < n - 1; ++i) {
        const double want = 100.0 * std::sin(2.0 * std::numbers::pi * i / (n - 1));
        CHECK(us[i] == doctest::Approx(want).epsilon(1e-6));
    }

    const std::vector<float> ue = heat1d_init(HeatInit::Exp, n, 500.0, 61.6971);
    CHECK(ue[n / 2] == doctest::Approx(500.0).epsilon(1e-3));  // peak at center
    for (int i = 1; i < n - 1; ++i) CHECK(ue[i] == ue[n - 1 - i]);  // symmetric

    CHECK_THROWS(heat1d_init(HeatInit::Sin, 2, 1.0, 0.0));
}

TEST_CASE("heat single steps") {
    Backend b32 = Backend::binary32();

    SUBCASE("zero field stays zero") {
        std::vector<float> u(64, 0.0f);
        for (float v : heat1d_step(u, 0.25, b32)) CHECK(v == 0.0f);
    }

    SUBCASE("r = 0 leaves the interior unchanged") {
        std::vector<float> u = heat1d_init(HeatInit::Sin, 64, 10.0, 0.0);
        const std::vector<float> next = heat1d_step(u, 0.0, b32);
        for (size_t i = 1; i + 1 < u.size(); ++i) CHECK(next[i] == u[i]);
    }

    SUBCASE("binary32 backend tracks a binary64 evaluation to 2^-20") {
        const std::vector<float> u = heat1d_init(HeatInit::Exp, 256, 500.0, 61.6971);
        const std::vector<float> got = heat1d_step(u, 0.25, b32);
        for (size_t i = 1; i + 1 < u.size(); ++i) {
            const double stencil = double(u[i - 1]) - 2.0 * double(u[i]) + double(u[i + 1]);
            const double want = double(u[i]) + 0.25 * stencil;
            if (want != 0.0)
                CHECK(std::fabs(double(got[i]) - want) / std::fabs(want) <=
                      std::ldexp(1.0, -20));
        }
    }

    SUBCASE("parallel and serial steps are bit-identical") {
        const std::vector<float> u = heat1d_init(HeatInit::Exp, 1024, 500.0, 61.6971);
        Backend bk = Backend::fixed(make_fixed_format(5, 10));
        Backend bk2 = bk;
        const std::vector<float> a = heat1d_step(u, 0.25, bk);
        const std::vector<float> b = heat1d_step_serial(u, 0.25, bk2);
        CHECK(a == b);
    }
}

TEST_CASE("heat runs") {
    SUBCASE("steps = 0 returns the initial field") {
        HeatConfig cfg;
        cfg.n = 64;
        cfg.steps = 0;
        const HeatRun run = heat1d_run(cfg);
        REQUIRE(run.snapshots.size() == 1);
        CHECK(run.snapshots[0].step == 0);
        CHECK(run.mult_count == 0);
    }

    SUBCASE("binary64 backend equals the serial reference bit-for-bit") {
        HeatConfig cfg;
        cfg.n = 200;
        cfg.steps = 150;
        cfg.backend = Backend::binary64();
        cfg.snapshot_steps = {0, 75, 150};
        const HeatRun a = heat1d_run(cfg);
        const HeatRun b = heat1d_run_serial(cfg);
        REQUIRE(a.snapshots.size() == b.snapshots.size());
        for (size_t i = 0; i < a.snapshots.size(); ++i) CHECK(a.snapshots[i].u == b.snapshots[i].u);
    }

    SUBCASE("maximum principle: max|u| never grows (binary64, r <= 0.5)") {
        HeatConfig cfg;
        cfg.n = 128;
        cfg.steps = 200;
        cfg.r = 0.5;
        cfg.backend = Backend::binary64();
        cfg.snapshot_steps.resize(201);
        for (int i = 0; i <= 200; ++i) cfg.snapshot_steps[i] = i;
        const HeatRun run = heat1d_run(cfg);
        double prev = 1e300;
        for (const HeatSnapshot& s : run.snapshots) {
            double peak = 0.0;
            for (float v : s.u) peak = std::max(peak, double(std::fabs(v)));
            CHECK(peak <= prev * (1.0 + 1e-12));
            prev = peak;
        }
    }

    SUBCASE("runs are deterministic") {
        HeatConfig cfg;
        cfg.n = 96;
        cfg.steps = 120;
        cfg.backend = Backend::r2f2(make_descriptor(3, 9, 3, 0), true);
        const HeatRun a = heat1d_run(cfg);
        const HeatRun b = heat1d_run(cfg);
        CHECK(a.final_field() == b.final_field());
        CHECK(a.events.size() == b.events.size());
        CHECK(a.mult_count == uint64_t(cfg.n - 2) * cfg.steps);
    }

    SUBCASE("rejects unstable r") {
        HeatConfig cfg;
        cfg.r = 0.6;
        CHECK_THROWS_AS(heat1d_run(cfg), std::invalid_argument);
    }
}

TEST_CASE("swe init") {
    SweConfig cfg;
    cfg.nx = 48;
    cfg.ny = 40;

    SUBCASE("flat init is uniform with zero momenta") {
        SweConfig flat = cfg;
        flat.bump_amplitude = 0.0;
        const SweState s = swe2d_init(flat);
        for (double h : s.h) CHECK(h == flat.depth);
        for (double m : s.hu) CHECK(m == 0.0);
        for (double m : s.hv) CHECK(m == 0.0);
    }

    SUBCASE("total mass matches the Gaussian integral within 0.1%") {
        const SweState s = swe2d_init(cfg);
        const double L2 = cfg.nx * cfg.dx * cfg.ny * cfg.dy;
        const double analytic =
            cfg.depth * L2 +
            cfg.bump_amplitude * 2.0 * std::numbers::pi * cfg.bump_sigma * cfg.bump_sigma;
        CHECK(swe_total_mass(s, cfg) == doctest::Approx(analytic).epsilon(1e-3));
    }

    SUBCASE("CFL violation is rejected at init") {
        SweConfig bad = cfg;
        bad.dt = 100.0;  // sqrt(g*165)*100/1000 > 1
        CHECK_THROWS_AS(swe2d_init(bad), std::invalid_argument);
    }
}

TEST_CASE("swe steps") {
    SweConfig cfg;
    cfg.nx = 32;
    cfg.ny = 32;

    SUBCASE("lake at rest is an exact fixed point") {
        SweConfig flat = cfg;
        flat.bump_amplitude = 0.0;
        const SweState s0 = swe2d_init(flat);
        Backend bk = Backend::binary64();
        const SweState s1 = swe2d_step(s0, flat, bk);
        CHECK(s1.h == s0.h);
        CHECK(s1.hu == s0.hu);
        CHECK(s1.hv == s0.hv);
    }

    SUBCASE("mass is conserved to 1e-10 relative over 100 steps") {
        const SweState s0 = swe2d_init(cfg);
        const double m0 = swe_total_mass(s0, cfg);
        Backend bk = Backend::binary64();
        SweState s = s0;
        for (int t = 0; t < 100; ++t) s = swe2d_step(s, cfg, bk);
        CHECK(std::fabs(swe_total_mass(s, cfg) - m0) / m0 < 1e-10);
    }

    SUBCASE("parallel step equals the serial reference bit-for-bit") {
        const SweState s0 = swe2d_init(cfg);
        Backend a = Backend::r2f2(make_descriptor(3, 9, 3, 0), false);
        Backend b = a;
        SweState sa = s0, sb = s0;
        for (int t = 0; t < 5; ++t) {
            sa = swe2d_step(sa, cfg, a);
            sb = swe2d_step_serial(sb, cfg, b);
        }
        CHECK(sa.h == sb.h);
        CHECK(sa.hu == sb.hu);
        CHECK(sa.hv == sb.hv);
    }
}

TEST_CASE("swe runs and comparison") {
    SweConfig cfg;
    cfg.nx = 32;
    cfg.ny = 32;
    cfg.steps = 60;
    cfg.snapshot_steps = {0, 30, 60};

    SUBCASE("self comparison is all zeros") {
        const SweRun run = swe2d_run(cfg);
        for (const SnapshotMetrics& m : compare_runs(run, run)) {
            CHECK(m.rmse == 0.0);
            CHECK(m.linf_rel == 0.0);
        }
    }

    SUBCASE("binary64 run equals the serial reference bit-for-bit") {
        const SweRun a = swe2d_run(cfg);
        const SweRun b = swe2d_run_serial(cfg);
        for (size_t i = 0; i < a.snapshots.size(); ++i)
            CHECK(a.snapshots[i].state.h == b.snapshots[i].state.h);
    }

    SUBCASE("adaptive runs emit deterministic event logs") {
        SweConfig acfg = cfg;
        acfg.steps = 20;
        acfg.backend = Backend::r2f2(make_descriptor(3, 9, 3, 0), true);
        const SweRun a = swe2d_run(acfg);
        const SweRun b = swe2d_run(acfg);
        REQUIRE(a.events.size() == b.events.size());
        for (size_t i = 0; i < a.events.size(); ++i) {
            CHECK(a.events[i].kind == b.events[i].kind);
            CHECK(a.events[i].step_index == b.events[i].step_index);
        }
        CHECK(a.mult_count == uint64_t(acfg.nx) * acfg.ny * 3 * acfg.steps);
    }

    SUBCASE("shape mismatch is rejected") {
        SweConfig other = cfg;
        other.nx = 16;
        const SweRun a = swe2d_run(cfg);
        const SweRun b = swe2d_run(other);
        CHECK_THROWS_AS(compare_runs(a, b), std::invalid_argument);
    }
}

TEST_CASE("snapshot CSV schemas") {
    HeatConfig hcfg;
    hcfg.n = 8;
    hcfg.steps = 2;
    const HeatRun hrun = heat1d_run(hcfg);
    CHECK(snapshots_to_csv(hrun).rfind("step,index,value\n", 0) == 0);

    SweConfig scfg;
    scfg.nx = 4;
    scfg.ny = 4;
    scfg.steps = 1;
    const SweRun srun = swe2d_run(scfg);
    CHECK(snapshots_to_csv(srun).rfind("step,i,j,h,hu,hv\n", 0) == 0);
}
