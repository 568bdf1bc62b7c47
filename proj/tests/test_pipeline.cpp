#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "finray/errors.hpp"
#include "finray/mlp.hpp"
#include "finray/oracle.hpp"
#include "finray/pipeline.hpp"
#include "finray/rng.hpp"

using namespace finray;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
    const fs::path dir = fs::temp_directory_path() / "finray_pipeline_tests";
    fs::create_directories(dir);
    return dir / name;
}

// small but genuinely trained model, shared across cases
const MlpModel& fitted_model() {
    static const TrainResult result = [] {
        const Dataset ds = generate_dataset(DesignSpace::default_space(), {});
        const SplitIndices parts = split(ds.size(), 44, {}, 5);
        MlpConfig cfg;
        cfg.seed = 45;
        cfg.epochs = 60;
        return train(ds, parts, cfg);
    }();
    return result.model;
}

std::vector<DesignSolution> toy_front() {
    std::vector<DesignSolution> front;
    front.push_back({{2.0, 1.0, 12.0}, {1.0, 10.0}, ""});
    front.push_back({{3.0, 1.2, 12.0}, {10.0, 1.0}, ""});
    front.push_back({{2.5, 1.1, 12.0}, {8.0, 8.0}, ""});
    return front;
}

} // namespace

TEST_CASE("objective composition is the Euclidean magnitude") {
    const ObjectivePair a = compose_objectives({3.0, 4.0, 0.0, 0.0});
    CHECK(a.f == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(a.d == 0.0);

    const ObjectivePair b = compose_objectives({0.0, 0.0, 6.0, 8.0});
    CHECK(b.f == 0.0);
    CHECK(b.d == doctest::Approx(10.0).epsilon(1e-15));

    CHECK_THROWS_AS(compose_objectives({std::nan(""), 0, 0, 0}), ValidationError);
}

TEST_CASE("evaluator negates the composed model outputs and decodes via the input scaler") {
    const MlpModel& model = fitted_model();
    const Evaluator eval = make_evaluator(model);

    const std::vector<double> genes{0.0, 0.0, 0.0};
    const auto objs = eval(genes);
    REQUIRE(objs.size() == 2);

    // genes (0,0,0) decode to the scaler minima, which span the grid lower corner
    const DesignPoint lo{model.input_scaler().min(0), model.input_scaler().min(1), model.input_scaler().min(2)};
    CHECK(lo.t_beam == 1.5);
    CHECK(lo.t_cross == 0.8);
    CHECK(lo.spacing == 10.0);
    const ObjectivePair direct = compose_objectives(model.predict_physical(lo));
    CHECK(objs[0] == doctest::Approx(-direct.f).epsilon(1e-12));
    CHECK(objs[1] == doctest::Approx(-direct.d).epsilon(1e-12));

    CHECK(eval(genes) == objs); // deterministic
    CHECK_THROWS_AS(eval({0.1, 0.2}), ValidationError);
}

TEST_CASE("evaluator tracks the oracle at the stiff corner within the surrogate budget") {
    const MlpModel& model = fitted_model();
    const Evaluator eval = make_evaluator(model);
    const auto objs = eval({1.0, 1.0, 0.0});
    const double truth_f = std::hypot(82.0, 22.5);
    CHECK(std::abs(-objs[0] - truth_f) / truth_f < 0.15);
}

TEST_CASE("decode_front flips objectives back to maximization space") {
    const MlpModel& model = fitted_model();
    ParetoFrontRaw raw;
    raw.push_back({{0.5, 0.5, 0.5}, {-30.0, -25.0}});
    const auto front = decode_front(raw, model);
    REQUIRE(front.size() == 1);
    CHECK(front[0].objectives.f == 30.0);
    CHECK(front[0].objectives.d == 25.0);
    CHECK_NOTHROW(validate_design(front[0].design));
}

TEST_CASE("A/B/C selection on a hand-checkable front") {
    auto front = toy_front();
    const SelectedPoints sel = select_points(front);
    CHECK(sel.a == 0); // d = 10
    CHECK(sel.b == 1); // f = 10
    CHECK(sel.c == 2); // normalized (0.78, 0.78) nearest (1,1)
    CHECK(front[0].label == "A");
    CHECK(front[1].label == "B");
    CHECK(front[2].label == "C");
}

TEST_CASE("single-member front carries all three labels") {
    std::vector<DesignSolution> front;
    front.push_back({{2.0, 1.0, 12.0}, {5.0, 5.0}, ""});
    const SelectedPoints sel = select_points(front);
    CHECK(sel.a == 0);
    CHECK(sel.b == 0);
    CHECK(sel.c == 0);
    CHECK(front[0].label == "ABC");
}

TEST_CASE("degenerate objective axis drops out of the balance distance") {
    std::vector<DesignSolution> front;
    front.push_back({{2.0, 1.0, 12.0}, {5.0, 10.0}, ""});
    front.push_back({{2.5, 1.0, 12.0}, {5.0, 20.0}, ""});
    front.push_back({{3.0, 1.0, 12.0}, {5.0, 15.0}, ""});
    const SelectedPoints sel = select_points(front);
    CHECK(sel.b == 0);  // equal f everywhere: ties resolve to the first index
    CHECK(sel.a == 1);
    CHECK(sel.c == 1);  // distance reduces to the d axis alone

    std::vector<DesignSolution> empty;
    CHECK_THROWS_AS(select_points(empty), ValidationError);
}

TEST_CASE("A and B are the per-objective maxima by construction") {
    const MlpModel& model = fitted_model();
    Rng rng(12);
    std::vector<DesignSolution> front;
    for (int i = 0; i < 25; ++i) {
        DesignSolution s;
        s.design = {rng.uniform(1.5, 4.0), rng.uniform(0.8, 1.6), rng.uniform(10.0, 16.0)};
        s.objectives = compose_objectives(model.predict_physical(s.design));
        front.push_back(std::move(s));
    }
    const SelectedPoints sel = select_points(front);
    for (const DesignSolution& s : front) {
        CHECK(front[sel.a].objectives.d >= s.objectives.d);
        CHECK(front[sel.b].objectives.f >= s.objectives.f);
    }
}

TEST_CASE("an optimized front decodes to mutually non-dominated designs") {
    const MlpModel& model = fitted_model();
    NsgaConfig cfg;
    cfg.population_size = 40;
    cfg.generations = 20;
    cfg.seed = 4;
    const NsgaResult res = nsga2_run(make_evaluator(model), kInputWidth, cfg);
    const auto front = decode_front(res.front, model);
    REQUIRE(front.size() >= 3);
    for (const DesignSolution& p : front)
        for (const DesignSolution& q : front)
            if (&p != &q) {
                const bool dominates_max = p.objectives.f >= q.objectives.f && p.objectives.d >= q.objectives.d &&
                                           (p.objectives.f > q.objectives.f || p.objectives.d > q.objectives.d);
                CHECK(!dominates_max);
            }
}

TEST_CASE("validate_front is seeded-deterministic and rejects n_random = 0") {
    const MlpModel& model = fitted_model();
    auto front = toy_front();
    CHECK_THROWS_AS(validate_front(front, model, 0, 1), ValidationError);

    const ValidationReport a = validate_front(front, model, 500, 77);
    const ValidationReport b = validate_front(front, model, 500, 77);
    CHECK(a.n_samples == 500);
    CHECK(a.n_dominating == b.n_dominating);
    REQUIRE(a.violations.size() == b.violations.size());
    for (std::size_t i = 0; i < a.violations.size(); ++i)
        CHECK(a.violations[i].genes == b.violations[i].genes);

    // the toy front is far below the model's attainable set, so most samples dominate it
    CHECK(a.n_dominating > 0);
}

TEST_CASE("percent error reproduces published-table arithmetic") {
    CHECK(percent_error(31.609, 33.223) == doctest::Approx(4.857).epsilon(1e-3));
    CHECK(percent_error(5.0, 5.0) == 0.0);
    CHECK_THROWS_AS(percent_error(1.0, 0.0), ValidationError);
}

TEST_CASE("compare_to_truth uses the noise-free oracle on labeled points only") {
    auto front = toy_front();
    select_points(front);
    const auto rows = compare_to_truth(front, {0.0, 0});
    REQUIRE(rows.size() == 3);
    for (const ComparisonRow& row : rows) {
        CHECK(row.err_f_pct >= 0.0);
        CHECK(row.err_d_pct >= 0.0);
        CHECK(!row.label.empty());
    }

    // a perfect prediction shows zero error
    std::vector<DesignSolution> exact;
    DesignSolution s;
    s.design = {2.0, 1.0, 12.0};
    s.objectives = compose_objectives(oracle_evaluate(s.design, {}));
    s.label = "A";
    exact.push_back(s);
    const auto r = compare_to_truth(exact, {0.0, 0});
    REQUIRE(r.size() == 1);
    CHECK(r[0].err_f_pct == 0.0);
    CHECK(r[0].err_d_pct == 0.0);

    CHECK_THROWS_AS(compare_to_truth(exact, {0.5, 0}), ValidationError);
}

TEST_CASE("front csv round trips with labels and pinned header") {
    auto front = toy_front();
    select_points(front);
    const fs::path path = temp_file("front.csv");
    write_front_csv(front, path);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t_beam_mm,t_cross_mm,spacing_mm,f_n,d_mm,label");
    in.close();

    const auto back = read_front_csv(path);
    REQUIRE(back.size() == front.size());
    for (std::size_t i = 0; i < front.size(); ++i) {
        CHECK(back[i].design == front[i].design);
        CHECK(back[i].objectives.f == front[i].objectives.f);
        CHECK(back[i].objectives.d == front[i].objectives.d);
        CHECK(back[i].label == front[i].label);
    }

    std::ofstream(path) << "t_beam_mm,oops\n";
    CHECK_THROWS_WITH_AS(read_front_csv(path), doctest::Contains("header"), ValidationError);
    std::ofstream(path) << "t_beam_mm,t_cross_mm,spacing_mm,f_n,d_mm,label\n9.0,1.0,12.0,1.0,1.0,\n";
    CHECK_THROWS_AS(read_front_csv(path), ValidationError);
}

TEST_CASE("validation json records sample counts and violations") {
    const MlpModel& model = fitted_model();
    auto front = toy_front();
    const ValidationReport report = validate_front(front, model, 50, 3);
    const fs::path path = temp_file("validation.json");
    write_validation_json(report, path);
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("\"n_samples\": 50") != std::string::npos);
    CHECK(text.find("n_dominating") != std::string::npos);
    CHECK(text.find(kPrngName) != std::string::npos);
}

TEST_CASE("comparison csv carries the pinned header") {
    auto front = toy_front();
    select_points(front);
    const fs::path path = temp_file("comparison.csv");
    write_comparison_csv(compare_to_truth(front, {0.0, 0}), path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "label,pred_d_mm,pred_f_n,truth_d_mm,truth_f_n,err_d_pct,err_f_pct");
}
