// finray: surrogate-assisted multi-objective design optimization for Fin-Ray
// style gripper fingers.
//
//   finray gen-dataset --config cfg.json --out dataset.csv
//   finray train       --config cfg.json --data dataset.csv --out-model model.json [--grid-search]
//   finray optimize    --config cfg.json --model model.json --out-front front.csv
//   finray analyze     --config cfg.json --front front.csv --model model.json --out-report reports/
//   finray eval        --model model.json --design 2.5,1.2,12
//
// Exit status: 0 success, 2 user/config error, 1 internal error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "finray/dataset.hpp"
#include "finray/errors.hpp"
#include "finray/mlp.hpp"
#include "finray/nsga2.hpp"
#include "finray/oracle.hpp"
#include "finray/pipeline.hpp"
#include "finray/run_config.hpp"
#include "finray/text.hpp"

namespace {

namespace fs = std::filesystem;
using namespace finray;

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;

    std::string out;
    std::string data;
    std::string model;
    std::string out_model;
    std::string front;
    std::string out_front;
    std::string out_report;
    std::string design;
    bool grid_search = false;
};

RunConfig resolve_config(const CliOptions& opts) {
    if (!opts.config_path.empty())
        return load_run_config(opts.config_path, opts.seed);
    return make_run_config(opts.seed);
}

fs::path sibling(const fs::path& base, const char* suffix) {
    fs::path p = base;
    p.replace_extension();
    p += suffix;
    return p;
}

int cmd_gen_dataset(const CliOptions& opts) {
    const RunConfig cfg = resolve_config(opts);
    const fs::path out = opts.out.empty() ? cfg.paths.dataset : fs::path(opts.out);
    const Dataset ds = generate_dataset(cfg.space, cfg.oracle);
    write_csv(ds, out);
    std::cout << "wrote " << ds.size() << " records to " << out.string() << " (seed " << cfg.oracle.seed << ", prng "
              << kPrngName << ")\n";
    return 0;
}

int cmd_train(const CliOptions& opts) {
    const RunConfig cfg = resolve_config(opts);
    const fs::path data_path = opts.data.empty() ? cfg.paths.dataset : fs::path(opts.data);
    const fs::path model_path = opts.out_model.empty() ? cfg.paths.model : fs::path(opts.out_model);

    const Dataset ds = read_csv(data_path);
    if (ds.empty())
        throw ValidationError(data_path.string() + " holds no records; nothing to train on");
    for (const OutlierNote& note : zscore_outliers(ds))
        std::cerr << "warning: record " << note.row << " column " << note.column << " has z-score "
                  << format_double(note.z) << " (kept)\n";

    const SplitIndices parts = split(ds.size(), cfg.split_seed, cfg.training.ratios, cfg.training.k_folds);

    std::optional<CorrelationMatrix> corr;
    try {
        corr = correlation_matrix(ds);
    } catch (const ValidationError& e) {
        std::cerr << "warning: correlation matrix skipped: " << e.what() << "\n";
    }

    MlpConfig final_config = cfg.training.mlp;
    std::optional<GridSearchResult> searched;
    if (opts.grid_search) {
        const SearchSpace space = cfg.training.grid ? *cfg.training.grid : SearchSpace::full_space();
        searched = grid_search(ds, parts, cfg.training.mlp, space);
        final_config = searched->best;
        std::cout << "grid search over " << space.size() << " configurations selected hidden sizes ("
                  << final_config.hidden_sizes[0] << ", " << final_config.hidden_sizes[1] << ", "
                  << final_config.hidden_sizes[2] << ") with "
                  << activation_name(final_config.hidden_activation) << "\n";
    }

    const TrainResult result = train(ds, parts, final_config);
    const Metrics train_m = evaluate_metrics(result.model, ds, parts.train);
    const Metrics val_m = evaluate_metrics(result.model, ds, parts.val);
    const Metrics test_m = evaluate_metrics(result.model, ds, parts.test);

    save_model(result.model, model_path);
    write_loss_csv(result.curves, sibling(model_path, "_loss.csv"));
    write_metrics_json({{"train", train_m}, {"val", val_m}, {"test", test_m}}, sibling(model_path, "_metrics.json"));
    if (corr)
        write_correlation_csv(*corr, sibling(model_path, "_correlation.csv"));
    if (searched)
        write_grid_csv(searched->table, sibling(model_path, "_grid.csv"));

    std::cout << "trained on " << parts.train.size() << "/" << parts.val.size() << "/" << parts.test.size()
              << " train/val/test records; final val mse " << format_double(result.curves.val_mse.back()) << "\n";
    std::cout << "test r2: fx " << format_double(test_m.r2[0]) << ", fy " << format_double(test_m.r2[1]) << ", dx "
              << format_double(test_m.r2[2]) << ", dy " << format_double(test_m.r2[3]) << "\n";
    std::cout << "model written to " << model_path.string() << "\n";
    return 0;
}

int cmd_optimize(const CliOptions& opts) {
    const RunConfig cfg = resolve_config(opts);
    const fs::path model_path = opts.model.empty() ? cfg.paths.model : fs::path(opts.model);
    const fs::path front_path = opts.out_front.empty() ? cfg.paths.front : fs::path(opts.out_front);

    const MlpModel model = load_model(model_path);
    const NsgaResult result = nsga2_run(make_evaluator(model), kInputWidth, cfg.nsga);
    const std::vector<DesignSolution> front = decode_front(result.front, model);

    write_front_csv(front, front_path);
    write_stats_csv(result.stats, sibling(front_path, "_stats.csv"));
    std::cout << "front of " << front.size() << " designs written to " << front_path.string() << " after "
              << cfg.nsga.generations << " generations (seed " << cfg.nsga.seed << ")\n";
    return 0;
}

int cmd_analyze(const CliOptions& opts) {
    const RunConfig cfg = resolve_config(opts);
    const fs::path front_path = opts.front.empty() ? cfg.paths.front : fs::path(opts.front);
    const fs::path model_path = opts.model.empty() ? cfg.paths.model : fs::path(opts.model);
    const fs::path report_dir = opts.out_report.empty() ? cfg.paths.reports : fs::path(opts.out_report);

    std::vector<DesignSolution> front = read_front_csv(front_path);
    if (front.empty())
        throw ValidationError(front_path.string() + " holds no front members");
    const MlpModel model = load_model(model_path);

    select_points(front);
    const ValidationReport report = validate_front(front, model, cfg.analysis.n_random, cfg.analysis.seed);
    const std::vector<ComparisonRow> comparison = compare_to_truth(front, OracleConfig{0.0, 0});

    fs::create_directories(report_dir);
    write_front_csv(front, report_dir / "front_labeled.csv");
    write_validation_json(report, report_dir / "validation.json");
    write_comparison_csv(comparison, report_dir / "comparison.csv");

    std::cout << report.n_dominating << " of " << report.n_samples << " random surrogate samples dominate the front\n";
    for (const ComparisonRow& row : comparison) {
        std::cout << "point " << row.label << ": F " << format_double(row.predicted.f) << " N (truth "
                  << format_double(row.truth.f) << ", err " << format_double(row.err_f_pct) << "%), D "
                  << format_double(row.predicted.d) << " mm (truth " << format_double(row.truth.d) << ", err "
                  << format_double(row.err_d_pct) << "%)\n";
    }
    std::cout << "reports written to " << report_dir.string() << "\n";
    return 0;
}

int cmd_eval(const CliOptions& opts) {
    if (opts.model.empty())
        throw ValidationError("eval requires --model");
    std::vector<double> values;
    std::string token;
    std::stringstream ss(opts.design);
    while (std::getline(ss, token, ','))
        values.push_back(parse_double(token, "--design"));
    if (values.size() != 3)
        throw ValidationError("--design expects t_beam,t_cross,spacing (three comma-separated values)");
    const DesignPoint design{values[0], values[1], values[2]};
    validate_design(design);

    const MlpModel model = load_model(opts.model);
    const auto normalized = scale_row({design.t_beam, design.t_cross, design.spacing}, model.input_scaler());
    for (double g : normalized)
        if (g < 0.0 || g > 1.0) {
            std::cerr << "warning: design lies outside the model's training range (extrapolating)\n";
            break;
        }
    const Responses r = model.predict_physical(design);
    const ObjectivePair obj = compose_objectives(r);
    std::cout << "fx_n=" << format_double(r.fx) << "\nfy_n=" << format_double(r.fy) << "\ndx_mm="
              << format_double(r.dx) << "\ndy_mm=" << format_double(r.dy) << "\nf_n=" << format_double(obj.f)
              << "\nd_mm=" << format_double(obj.d) << "\n";
    return 0;
}

int run_main(int argc, char** argv) {
    CLI::App app{"Surrogate-assisted multi-objective design optimization of Fin-Ray gripper fingers"};
    app.require_subcommand(1);

    CliOptions opts;
    app.add_option("--config", opts.config_path, "JSON run configuration")->envname("FINRAY_CONFIG");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Override the config's global seed");

    auto* gen = app.add_subcommand("gen-dataset", "Generate the oracle dataset over the design grid");
    gen->add_option("--out", opts.out, "Output dataset CSV (default: config paths.dataset)");

    auto* train_cmd = app.add_subcommand("train", "Train the MLP surrogate on a dataset CSV");
    train_cmd->add_option("--data", opts.data, "Input dataset CSV (default: config paths.dataset)");
    train_cmd->add_option("--out-model", opts.out_model, "Output model JSON (default: config paths.model)");
    train_cmd->add_flag("--grid-search", opts.grid_search,
                        "Select the architecture by K-fold grid search before the final training run");

    auto* optimize_cmd = app.add_subcommand("optimize", "Run NSGA-II on the trained surrogate");
    optimize_cmd->add_option("--model", opts.model, "Model JSON (default: config paths.model)");
    optimize_cmd->add_option("--out-front", opts.out_front, "Output front CSV (default: config paths.front)");

    auto* analyze_cmd = app.add_subcommand("analyze", "Label A/B/C, validate and compare a Pareto front");
    analyze_cmd->add_option("--front", opts.front, "Front CSV (default: config paths.front)");
    analyze_cmd->add_option("--model", opts.model, "Model JSON (default: config paths.model)");
    analyze_cmd->add_option("--out-report", opts.out_report, "Report directory (default: config paths.reports)");

    auto* eval_cmd = app.add_subcommand("eval", "Predict responses for one design");
    eval_cmd->add_option("--model", opts.model, "Model JSON")->required();
    eval_cmd->add_option("--design", opts.design, "t_beam,t_cross,spacing in mm")->required();

    for (auto* sub : {gen, train_cmd, optimize_cmd, analyze_cmd, eval_cmd})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (seed_opt->count() > 0)
        opts.seed = seed_value;

    try {
        if (gen->parsed())
            return cmd_gen_dataset(opts);
        if (train_cmd->parsed())
            return cmd_train(opts);
        if (optimize_cmd->parsed())
            return cmd_optimize(opts);
        if (analyze_cmd->parsed())
            return cmd_analyze(opts);
        if (eval_cmd->parsed())
            return cmd_eval(opts);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
