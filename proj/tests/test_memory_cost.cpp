#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "snf/cost.hpp"
#include "snf/memory.hpp"

using namespace snf;
using doctest::Approx;

TEST_CASE("round_cycles overlap model") {
    MemSpec spec{32.0, 0, 64};
    CHECK(round_cycles(100, 6400, spec) == 200);
    CHECK(round_cycles(100, 0, spec) == 100);
    MemSpec lat{64.0, 10, 64};
    CHECK(round_cycles(0, 64, lat) == 11);
}

TEST_CASE("round_cycles monotonicity") {
    MemSpec spec{21.3, 5, 64};
    uint64_t prev = 0;
    for (uint64_t bytes = 0; bytes < 4096; bytes += 123) {
        uint64_t c = round_cycles(50, bytes, spec);
        CHECK(c >= prev);
        prev = c;
    }
    MemSpec fast{256.0, 5, 64};
    CHECK(round_cycles(50, 4096, fast) <= round_cycles(50, 4096, spec));
}

TEST_CASE("energy_report") {
    EnergyModel m{3.0, 2.0, 1.0};
    EnergyReport r = energy_report(5, 10, 100, m);
    CHECK(r.compute_pj == Approx(15.0));
    CHECK(r.cache_pj == Approx(20.0));
    CHECK(r.dram_pj == Approx(100.0));
    CHECK(r.total_pj == Approx(135.0));

    EnergyReport zero = energy_report(0, 0, 0, m);
    CHECK(zero.total_pj == 0.0);

    EnergyReport twice = energy_report(10, 20, 200, m);
    CHECK(twice.total_pj == Approx(2 * r.total_pj));
}

TEST_CASE("m_row instantiation") {
    auto one = MissRateFn::constant(1.0);
    CostReport r = m_row(4, 8, 2, one);
    CHECK(r.topology_words == Approx(12));
    CHECK(r.cached_feature_words == Approx(16));
    CHECK(r.output_words == Approx(8));
    CHECK(r.total_words == Approx(36));

    CostReport r0 = m_row(4, 8, 2, MissRateFn::constant(0.0));
    CHECK(r0.total_words == Approx(20));
}

TEST_CASE("m_fs instantiation and degenerate case") {
    auto one = MissRateFn::constant(1.0);
    CostReport r = m_fs(4, 8, 4, 2, 2, one);
    CHECK(r.topology_words == Approx(32));
    CHECK(r.cached_feature_words == Approx(32));
    CHECK(r.output_words == Approx(32));
    CHECK(r.total_words == Approx(96));

    for (double miss : {0.0, 0.3, 1.0}) {
        auto m = MissRateFn::constant(miss);
        CostReport fs = m_fs(100, 700, 16, 1, 1, m);
        CostReport row = m_row(100, 700, 16, m);
        CHECK(fs.total_words == Approx(row.total_words));
        CHECK(fs.topology_words == Approx(row.topology_words));
    }
}

TEST_CASE("crossover condition") {
    CHECK(crossover_favors_feature_slicing(100, 800, 16));
    CHECK_FALSE(crossover_favors_feature_slicing(100, 800, 4));
    CHECK_FALSE(crossover_favors_feature_slicing(100, 800, 8));  // strict

    // the extreme-case totals flip exactly past F = E/V under m == 0
    auto zero = MissRateFn::constant(0.0);
    for (uint64_t b : {2ull, 4ull, 8ull}) {
        for (uint64_t f : {4ull, 8ull, 16ull}) {
            double vertex_only = m_fs(100, 800, f, 1, b, zero).total_words;
            double feature_only = m_fs(100, 800, f, b, 1, zero).total_words;
            if (f > 8)
                CHECK(feature_only < vertex_only);
            else if (f < 8)
                CHECK(vertex_only < feature_only);
        }
    }
}

TEST_CASE("m_fs monotone in B_F when the cached term vanishes") {
    auto zero = MissRateFn::constant(0.0);
    double prev = 0;
    for (uint64_t b_f = 1; b_f <= 32; b_f *= 2) {
        double t = m_fs(64, 512, 32, b_f, 2, zero).total_words;
        CHECK(t >= prev);
        prev = t;
    }
}

TEST_CASE("perfect_tiling") {
    auto pt = perfect_tiling(64, 16, 4, 4096, false);
    CHECK(pt.b_f == 1);
    CHECK(pt.b_v == 1);

    pt = perfect_tiling(64, 16, 4, 1024, false);
    CHECK(pt.b_f == 4);
    CHECK(pt.b_v == 1);

    // strict slice width: F=256 4B features caps B_F at 16
    pt = perfect_tiling(1 << 20, 256, 4, 1 << 20, true);
    CHECK(pt.b_f <= 16);

    CHECK_THROWS(perfect_tiling(64, 16, 4, 0, false));
    CHECK_THROWS(perfect_tiling(64, 16, 4096, 64, false));
}

TEST_CASE("perfect_tiling satisfies capacity and minimality") {
    auto ceil_div = [](uint64_t a, uint64_t b) { return (a + b - 1) / b; };
    for (uint64_t cache : {512ull, 1024ull, 2048ull, 8192ull}) {
        auto pt = perfect_tiling(100, 24, 4, cache, false);
        CHECK(ceil_div(100, pt.b_v) * ceil_div(24, pt.b_f) * 4 <= cache);
        // no smaller product is feasible
        for (uint64_t bv = 1; bv <= 128; bv *= 2) {
            for (uint64_t bf = 1; bf <= 24; bf++) {
                if (bf * bv >= pt.b_f * pt.b_v) continue;
                CHECK(ceil_div(100, bv) * ceil_div(24, bf) * 4 > cache);
            }
        }
    }
}

TEST_CASE("fit_miss_fn interpolation and clamping") {
    auto fn = fit_miss_fn({{0.0, 0.0}, {100.0, 1.0}});
    CHECK(fn(50.0) == Approx(0.5));
    CHECK(fn(-1.0) == Approx(0.0));
    CHECK(fn(1000.0) == Approx(1.0));

    auto single = fit_miss_fn({{64.0, 0.25}});
    CHECK(single(0.0) == Approx(0.25));
    CHECK(single(1e9) == Approx(0.25));

    // non-monotone samples are forced monotone; values clamped to [0,1]
    auto messy = fit_miss_fn({{10.0, 0.8}, {20.0, 0.4}, {30.0, 1.7}});
    CHECK(messy(20.0) == Approx(0.8));
    CHECK(messy(30.0) == Approx(1.0));

    CHECK_THROWS(fit_miss_fn({}));
}
