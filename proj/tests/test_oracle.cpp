#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "finray/errors.hpp"
#include "finray/oracle.hpp"

using namespace finray;

TEST_CASE("closed-form values at the box corners and center") {
    const Responses lo = oracle_evaluate({1.5, 0.8, 10.0}, {});
    CHECK(lo.fx == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(lo.fy == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lo.dx == doctest::Approx(33.0).epsilon(1e-15));
    CHECK(lo.dy == doctest::Approx(9.0).epsilon(1e-15));

    const Responses hi = oracle_evaluate({4.0, 1.6, 10.0}, {});
    CHECK(hi.fx == doctest::Approx(82.0).epsilon(1e-15));
    CHECK(hi.fy == doctest::Approx(22.5).epsilon(1e-15));
    CHECK(hi.dx == doctest::Approx(15.0).epsilon(1e-15));
    CHECK(hi.dy == doctest::Approx(4.0).epsilon(1e-15));

    const Responses mid = oracle_evaluate({2.75, 1.2, 13.0}, {});
    CHECK(mid.fx == doctest::Approx(35.25).epsilon(1e-15));
    CHECK(mid.fy == doctest::Approx(9.8125).epsilon(1e-15));
    CHECK(mid.dx == doctest::Approx(26.0).epsilon(1e-15));
    CHECK(mid.dy == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("out-of-bounds designs are rejected, never extrapolated") {
    CHECK_THROWS_AS(oracle_evaluate({4.5, 1.0, 12.0}, {}), ValidationError);
    CHECK_THROWS_AS(oracle_evaluate({2.0, 0.6, 12.0}, {}), ValidationError);
    CHECK_THROWS_AS(generate_dataset(DesignSpace::default_space(), {-0.1, 0}), ValidationError);
}

TEST_CASE("noise-free generation is deterministic; seeded noise is reproducible") {
    const DesignSpace space = DesignSpace::default_space();

    const Dataset a = generate_dataset(space, {0.0, 1});
    const Dataset b = generate_dataset(space, {0.0, 2});
    REQUIRE(a.size() == 120);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].fx == b[i].fx);
        CHECK(a[i].dy == b[i].dy);
    }

    const Dataset n1 = generate_dataset(space, {0.01, 7});
    const Dataset n2 = generate_dataset(space, {0.01, 7});
    const Dataset n3 = generate_dataset(space, {0.01, 8});
    bool any_differs = false;
    for (std::size_t i = 0; i < n1.size(); ++i) {
        CHECK(n1[i].fx == n2[i].fx);
        CHECK(n1[i].design == n3[i].design); // designs never perturbed
        if (n1[i].fx != n3[i].fx)
            any_differs = true;
    }
    CHECK(any_differs);
}

TEST_CASE("noise stream is counter-style: single evaluations match dataset rows") {
    const DesignSpace space = DesignSpace::default_space();
    const OracleConfig cfg{0.02, 31};
    const Dataset ds = generate_dataset(space, cfg);
    const auto grid = enumerate_grid(space);
    for (std::size_t i : {std::size_t{0}, std::size_t{17}, std::size_t{119}}) {
        const Responses r = oracle_evaluate(grid[i], cfg, i);
        CHECK(r.fx == ds[i].fx);
        CHECK(r.fy == ds[i].fy);
        CHECK(r.dx == ds[i].dx);
        CHECK(r.dy == ds[i].dy);
    }
}

TEST_CASE("fx rises and dx falls along t_beam over the whole grid") {
    const auto grid = enumerate_grid(DesignSpace::default_space());
    // 20 (t_cross, spacing) combinations per t_beam level, 6 levels
    for (std::size_t inner = 0; inner < 20; ++inner) {
        for (std::size_t level = 0; level + 1 < 6; ++level) {
            const Responses lo = oracle_evaluate(grid[level * 20 + inner], {});
            const Responses hi = oracle_evaluate(grid[(level + 1) * 20 + inner], {});
            CHECK(hi.fx > lo.fx);
            CHECK(hi.dx < lo.dx);
        }
    }
}

TEST_CASE("force and displacement magnitudes stay inside the formula envelope") {
    double f_lo = 1e30, f_hi = -1e30, d_lo = 1e30, d_hi = -1e30;
    for (const SimRecord& rec : generate_dataset(DesignSpace::default_space(), {}).records()) {
        const double f = std::hypot(rec.fx, rec.fy);
        const double d = std::hypot(rec.dx, rec.dy);
        f_lo = std::min(f_lo, f);
        f_hi = std::max(f_hi, f);
        d_lo = std::min(d_lo, d);
        d_hi = std::max(d_hi, d);
    }
    CHECK(f_lo >= 4.1);
    CHECK(f_hi <= 86.0);
    CHECK(d_lo >= 15.0);
    CHECK(d_hi <= 36.5);
}

TEST_CASE("the grid's exact Pareto set is non-degenerate") {
    const Dataset ds = generate_dataset(DesignSpace::default_space(), {});
    std::vector<std::pair<double, double>> objs; // maximize both
    for (const SimRecord& rec : ds.records())
        objs.emplace_back(std::hypot(rec.fx, rec.fy), std::hypot(rec.dx, rec.dy));

    std::size_t pareto = 0;
    for (std::size_t i = 0; i < objs.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < objs.size() && !dominated; ++j) {
            if (j == i)
                continue;
            if (objs[j].first >= objs[i].first && objs[j].second >= objs[i].second &&
                (objs[j].first > objs[i].first || objs[j].second > objs[i].second))
                dominated = true;
        }
        if (!dominated)
            ++pareto;
    }
    CHECK(pareto >= 3);
}
