#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "finray/errors.hpp"
#include "finray/nsga2.hpp"
#include "finray/rng.hpp"

using namespace finray;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// O(n^2 m) reference: peel non-dominated sets rank by rank.
std::vector<int> brute_force_ranks(const std::vector<std::vector<double>>& objs) {
    const std::size_t n = objs.size();
    std::vector<int> rank(n, -1);
    int current = 0;
    std::size_t assigned = 0;
    while (assigned < n) {
        std::vector<std::size_t> layer;
        for (std::size_t i = 0; i < n; ++i) {
            if (rank[i] != -1)
                continue;
            bool dominated = false;
            for (std::size_t j = 0; j < n && !dominated; ++j) {
                if (j == i || rank[j] != -1)
                    continue;
                if (dominates(objs[j], objs[i]))
                    dominated = true;
            }
            if (!dominated)
                layer.push_back(i);
        }
        for (std::size_t i : layer)
            rank[i] = current;
        assigned += layer.size();
        ++current;
    }
    return rank;
}

std::vector<Individual> population_from(const std::vector<std::vector<double>>& objs) {
    std::vector<Individual> pop(objs.size());
    for (std::size_t i = 0; i < objs.size(); ++i)
        pop[i].objectives = objs[i];
    return pop;
}

} // namespace

TEST_CASE("dominance on minimization objectives") {
    CHECK(dominates({1, 1}, {2, 2}));
    CHECK(!dominates({1, 2}, {2, 1}));
    CHECK(!dominates({2, 1}, {1, 2}));
    CHECK(!dominates({1, 1}, {1, 1}));
    CHECK(dominates({1, 2}, {1, 3}));
    CHECK_THROWS_AS(dominates({1, 2}, {1, 2, 3}), ValidationError);
}

TEST_CASE("sort splits a chain into singleton fronts and keeps an antichain whole") {
    auto chain = population_from({{1, 1}, {2, 2}, {3, 3}});
    const auto fronts = fast_non_dominated_sort(chain);
    REQUIRE(fronts.size() == 3);
    CHECK(fronts[0] == std::vector<std::size_t>{0});
    CHECK(fronts[1] == std::vector<std::size_t>{1});
    CHECK(fronts[2] == std::vector<std::size_t>{2});
    CHECK(chain[2].rank == 2);

    auto anti = population_from({{1, 3}, {2, 2}, {3, 1}});
    const auto one = fast_non_dominated_sort(anti);
    REQUIRE(one.size() == 1);
    CHECK(one[0].size() == 3);

    std::vector<Individual> unevaluated(2);
    unevaluated[0].objectives = {1, 2};
    CHECK_THROWS_AS(fast_non_dominated_sort(unevaluated), ValidationError);
}

TEST_CASE("sort agrees with the brute-force oracle on random instances") {
    Rng rng(404);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + rng.index(200);
        const std::size_t m = 2 + rng.index(3);
        std::vector<std::vector<double>> objs(n, std::vector<double>(m));
        for (auto& row : objs)
            for (double& v : row)
                v = rng.uniform(0.0, 10.0);
        auto pop = population_from(objs);
        fast_non_dominated_sort(pop);
        const auto expect = brute_force_ranks(objs);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(pop[i].rank == expect[i]);
    }
}

TEST_CASE("crowding distances per Deb's formula") {
    CHECK(crowding_distance({{1.0, 2.0}}) == std::vector<double>{kInf});
    CHECK(crowding_distance({{1, 3}, {3, 1}}) == std::vector<double>(2, kInf));

    const auto d = crowding_distance({{1, 3}, {2, 2}, {3, 1}});
    CHECK(d[0] == kInf);
    CHECK(d[2] == kInf);
    CHECK(d[1] == doctest::Approx(2.0).epsilon(1e-15));

    // degenerate objective contributes nothing
    const auto d2 = crowding_distance({{1, 5}, {2, 5}, {3, 5}});
    CHECK(d2[0] == kInf);
    CHECK(d2[2] == kInf);
    CHECK(d2[1] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(crowding_distance({}), ValidationError);
}

TEST_CASE("crowding non-negative, exactly the boundaries infinite") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng.index(40);
        std::vector<std::vector<double>> objs(n, std::vector<double>(2));
        for (auto& row : objs) {
            row[0] = rng.uniform(0.0, 1.0);
            row[1] = rng.uniform(0.0, 1.0);
        }
        const auto d = crowding_distance(objs);
        std::size_t lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(d[i] >= 0.0);
            if (objs[i][0] < objs[lo0][0])
                lo0 = i;
            if (objs[i][0] > objs[hi0][0])
                hi0 = i;
            if (objs[i][1] < objs[lo1][1])
                lo1 = i;
            if (objs[i][1] > objs[hi1][1])
                hi1 = i;
        }
        for (std::size_t i : {lo0, hi0, lo1, hi1})
            CHECK(d[i] == kInf);
    }
}

TEST_CASE("tournament prefers rank, then crowding, then the first drawn") {
    std::vector<Individual> pop(2);
    pop[0].rank = 0;
    pop[1].rank = 1;
    Rng rng(1);
    for (int i = 0; i < 20; ++i)
        CHECK(tournament_select(pop, rng) == 0);

    pop[0].rank = pop[1].rank = 0;
    pop[0].crowding = kInf;
    pop[1].crowding = 1.0;
    for (int i = 0; i < 20; ++i)
        CHECK(tournament_select(pop, rng) == 0);

    pop[1].crowding = kInf; // full tie: first drawn wins; both must appear over many draws
    bool saw0 = false, saw1 = false;
    for (int i = 0; i < 100; ++i) {
        const std::size_t w = tournament_select(pop, rng);
        (w == 0 ? saw0 : saw1) = true;
    }
    CHECK(saw0);
    CHECK(saw1);

    std::vector<Individual> tiny(1);
    CHECK_THROWS_AS(tournament_select(tiny, rng), ValidationError);
}

TEST_CASE("sbx identities") {
    CHECK(sbx_spread(0.5, 15.0) == doctest::Approx(1.0).epsilon(1e-15));

    // u = 0.5 -> beta = 1 -> children equal parents
    const auto [c1, c2] = sbx_gene_pair(0.3, 0.7, 0.5, 15.0);
    CHECK(c1 == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(c2 == doctest::Approx(0.7).epsilon(1e-15));

    // identical parents stay identical through the full operator
    Rng rng(5);
    const std::vector<double> p{0.25, 0.5, 0.75};
    const auto [a, b] = sbx_crossover(p, p, 1.0, 15.0, rng);
    CHECK(a == p);
    CHECK(b == p);
}

TEST_CASE("sbx preserves the parent mean per gene before clamping") {
    Rng rng(77);
    for (int trial = 0; trial < 2000; ++trial) {
        const double p1 = rng.uniform();
        const double p2 = rng.uniform();
        const auto [c1, c2] = sbx_gene_pair(p1, p2, rng.uniform(), 15.0);
        CHECK(std::abs((c1 + c2) - (p1 + p2)) < 1e-12);
    }
}

TEST_CASE("rate 0 crossover copies parents") {
    Rng rng(5);
    const std::vector<double> p1{0.1, 0.9};
    const std::vector<double> p2{0.4, 0.6};
    const auto [a, b] = sbx_crossover(p1, p2, 0.0, 15.0, rng);
    CHECK(a == p1);
    CHECK(b == p2);
}

TEST_CASE("polynomial mutation identities and bounds") {
    CHECK(pm_delta(0.5, 0.5, 20.0) == doctest::Approx(0.0).epsilon(1e-15));

    Rng rng(6);
    const std::vector<double> genes{0.2, 0.5, 0.8};
    CHECK(polynomial_mutation(genes, 0.0, 20.0, rng) == genes);

    // rate 1 at the lower bound stays inside [0,1]
    for (int i = 0; i < 200; ++i) {
        const auto mutated = polynomial_mutation({0.0}, 1.0, 20.0, rng);
        CHECK(mutated[0] >= 0.0);
        CHECK(mutated[0] <= 1.0);
    }
}

TEST_CASE("genes stay in [0,1] after operators") {
    Rng rng(2718);
    for (int trial = 0; trial < 50000; ++trial) {
        std::vector<double> p1(3), p2(3);
        for (std::size_t g = 0; g < 3; ++g) {
            p1[g] = rng.uniform();
            p2[g] = rng.uniform();
        }
        auto [c1, c2] = sbx_crossover(p1, p2, 0.9, 15.0, rng);
        c1 = polynomial_mutation(c1, 0.5, 20.0, rng);
        c2 = polynomial_mutation(c2, 0.5, 20.0, rng);
        for (std::size_t g = 0; g < 3; ++g) {
            CHECK(c1[g] >= 0.0);
            CHECK(c1[g] <= 1.0);
            CHECK(c2[g] >= 0.0);
            CHECK(c2[g] <= 1.0);
        }
    }
}

TEST_CASE("config validation") {
    NsgaConfig cfg;
    cfg.population_size = 5;
    CHECK_THROWS_AS(validate_nsga_config(cfg), ValidationError);
    cfg = {};
    cfg.population_size = 2;
    CHECK_THROWS_AS(validate_nsga_config(cfg), ValidationError);
    cfg = {};
    cfg.crossover_rate = 1.5;
    CHECK_THROWS_AS(validate_nsga_config(cfg), ValidationError);
    cfg = {};
    cfg.sbx_eta = 0.0;
    CHECK_THROWS_AS(validate_nsga_config(cfg), ValidationError);
}

TEST_CASE("identity evaluator collapses to the origin") {
    const Evaluator identity = [](const std::vector<double>& g) { return g; };
    NsgaConfig cfg;
    cfg.population_size = 100;
    cfg.generations = 50;
    cfg.mutation_rate = 0.5;
    cfg.seed = 3;
    const NsgaResult res = nsga2_run(identity, 2, cfg);
    REQUIRE(!res.front.empty());
    for (const FrontMember& m : res.front) {
        CHECK(m.objectives[0] <= 0.05);
        CHECK(m.objectives[1] <= 0.05);
    }
    CHECK(res.stats.size() == 50);
    // stats count the rank-0 set; the returned front is deduplicated
    CHECK(res.stats.back().front_size >= res.front.size());
}

TEST_CASE("same seed, same front; returned front is internally non-dominated") {
    const Evaluator eval = [](const std::vector<double>& g) {
        return std::vector<double>{g[0], (1.0 - g[0]) * (1.0 + g[1])};
    };
    NsgaConfig cfg;
    cfg.population_size = 60;
    cfg.generations = 30;
    cfg.seed = 9;
    const NsgaResult a = nsga2_run(eval, 2, cfg);
    const NsgaResult b = nsga2_run(eval, 2, cfg);
    REQUIRE(a.front.size() == b.front.size());
    for (std::size_t i = 0; i < a.front.size(); ++i) {
        CHECK(a.front[i].genes == b.front[i].genes);
        CHECK(a.front[i].objectives == b.front[i].objectives);
    }
    for (std::size_t i = 0; i < a.front.size(); ++i)
        for (std::size_t j = 0; j < a.front.size(); ++j)
            if (i != j)
                CHECK(!dominates(a.front[i].objectives, a.front[j].objectives));
}

TEST_CASE("elitism: no old rank-0 point dominates the whole new front") {
    const Evaluator eval = [](const std::vector<double>& g) {
        return std::vector<double>{g[0] + 0.2 * g[2], (1.0 - g[0]) * (1.0 + g[1]) + 0.1 * g[2]};
    };
    NsgaConfig cfg;
    cfg.population_size = 40;
    cfg.generations = 25;
    cfg.seed = 21;
    std::vector<std::vector<std::vector<double>>> fronts_by_gen;
    nsga2_run(eval, 3, cfg, [&](int, const std::vector<std::vector<double>>& objs) { fronts_by_gen.push_back(objs); });
    REQUIRE(fronts_by_gen.size() == 25);
    for (std::size_t g = 0; g + 1 < fronts_by_gen.size(); ++g) {
        for (const auto& old_point : fronts_by_gen[g]) {
            bool dominates_all = true;
            for (const auto& new_point : fronts_by_gen[g + 1]) {
                if (!dominates(old_point, new_point)) {
                    dominates_all = false;
                    break;
                }
            }
            CHECK(!dominates_all);
        }
    }
}

TEST_CASE("non-finite evaluator output is reported with the genes") {
    const Evaluator bad = [](const std::vector<double>& g) {
        return std::vector<double>{g[0], std::numeric_limits<double>::quiet_NaN()};
    };
    NsgaConfig cfg;
    cfg.population_size = 8;
    cfg.generations = 2;
    CHECK_THROWS_WITH_AS(nsga2_run(bad, 2, cfg), doctest::Contains("genes"), NumericError);
}

TEST_CASE("duplicate genomes are removed from the returned front") {
    // two genes, second irrelevant: many duplicates at the optimum after clamping
    const Evaluator eval = [](const std::vector<double>& g) { return std::vector<double>{g[0], -g[0]}; };
    NsgaConfig cfg;
    cfg.population_size = 30;
    cfg.generations = 20;
    cfg.seed = 2;
    const NsgaResult res = nsga2_run(eval, 1, cfg);
    for (std::size_t i = 0; i < res.front.size(); ++i)
        for (std::size_t j = i + 1; j < res.front.size(); ++j)
            CHECK(std::abs(res.front[i].genes[0] - res.front[j].genes[0]) > 1e-12);
}

TEST_CASE("stats csv header carries one min/max pair per objective") {
    GenerationStats s;
    s.gen = 1;
    s.front_size = 3;
    s.objective_range = {{-1.0, 2.0}, {0.0, 5.0}};
    const auto path = std::filesystem::temp_directory_path() / "finray_nsga_tests" / "stats.csv";
    std::filesystem::create_directories(path.parent_path());
    write_stats_csv({s}, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "gen,front_size,min_f1,max_f1,min_f2,max_f2");
    std::getline(in, line);
    CHECK(line == "1,3,-1,2,0,5");
}
