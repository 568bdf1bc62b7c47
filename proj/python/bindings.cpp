#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "finray/dataset.hpp"
#include "finray/design_space.hpp"
#include "finray/errors.hpp"
#include "finray/mlp.hpp"
#include "finray/nsga2.hpp"
#include "finray/oracle.hpp"
#include "finray/pipeline.hpp"
#include "finray/rng.hpp"
#include "finray/run_config.hpp"
#include "finray/text.hpp"

namespace py = pybind11;
using namespace finray;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Surrogate-assisted multi-objective design optimization of Fin-Ray gripper fingers";
    m.attr("PRNG_NAME") = kPrngName;

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    // ---- design space -------------------------------------------------------
    py::class_<DesignPoint>(m, "DesignPoint")
        .def(py::init<double, double, double>(), py::arg("t_beam"), py::arg("t_cross"), py::arg("spacing"))
        .def_readwrite("t_beam", &DesignPoint::t_beam)
        .def_readwrite("t_cross", &DesignPoint::t_cross)
        .def_readwrite("spacing", &DesignPoint::spacing)
        .def("__repr__", [](const DesignPoint& p) {
            return "DesignPoint(t_beam=" + format_double(p.t_beam) + ", t_cross=" + format_double(p.t_cross) +
                   ", spacing=" + format_double(p.spacing) + ")";
        });

    py::class_<VarRange>(m, "VarRange")
        .def(py::init<double, double, double>(), py::arg("min"), py::arg("max"), py::arg("step"))
        .def_readwrite("min", &VarRange::min)
        .def_readwrite("max", &VarRange::max)
        .def_readwrite("step", &VarRange::step);

    py::class_<DesignSpace>(m, "DesignSpace")
        .def(py::init<>())
        .def_static("default_space", &DesignSpace::default_space)
        .def_readwrite("t_beam", &DesignSpace::t_beam)
        .def_readwrite("t_cross", &DesignSpace::t_cross)
        .def_readwrite("spacing", &DesignSpace::spacing);

    m.def("validate_design", &validate_design, py::arg("design"));
    m.def("enumerate_grid", &enumerate_grid, py::arg("space"));

    // ---- dataset ------------------------------------------------------------
    py::class_<Responses>(m, "Responses")
        .def(py::init<double, double, double, double>(), py::arg("fx"), py::arg("fy"), py::arg("dx"), py::arg("dy"))
        .def_readwrite("fx", &Responses::fx)
        .def_readwrite("fy", &Responses::fy)
        .def_readwrite("dx", &Responses::dx)
        .def_readwrite("dy", &Responses::dy)
        .def("__repr__", [](const Responses& r) {
            return "Responses(fx=" + format_double(r.fx) + ", fy=" + format_double(r.fy) +
                   ", dx=" + format_double(r.dx) + ", dy=" + format_double(r.dy) + ")";
        });

    py::class_<SimRecord>(m, "SimRecord")
        .def(py::init<>())
        .def_readwrite("design", &SimRecord::design)
        .def_readwrite("fx", &SimRecord::fx)
        .def_readwrite("fy", &SimRecord::fy)
        .def_readwrite("dx", &SimRecord::dx)
        .def_readwrite("dy", &SimRecord::dy);

    py::enum_<Provenance>(m, "Provenance")
        .value("ORACLE_GENERATED", Provenance::OracleGenerated)
        .value("FILE_IMPORTED", Provenance::FileImported);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<>())
        .def("add", &Dataset::add, py::arg("record"))
        .def("__len__", &Dataset::size)
        .def("__getitem__",
             [](const Dataset& ds, std::size_t i) {
                 if (i >= ds.size())
                     throw py::index_error();
                 return ds[i];
             })
        .def_property_readonly("records", &Dataset::records)
        .def_property_readonly("provenance", &Dataset::provenance)
        .def_property_readonly("seed", [](const Dataset& ds) -> py::object {
            if (ds.seed())
                return py::cast(*ds.seed());
            return py::none();
        });

    m.def("read_csv", &read_csv, py::arg("path"));
    m.def("write_csv", &write_csv, py::arg("dataset"), py::arg("path"));
    m.def("pearson", &pearson, py::arg("x"), py::arg("y"));
    m.def(
        "correlation_matrix",
        [](const Dataset& ds) {
            const CorrelationMatrix matrix = correlation_matrix(ds);
            std::vector<std::vector<double>> out;
            for (const auto& row : matrix)
                out.emplace_back(row.begin(), row.end());
            return out;
        },
        py::arg("dataset"));
    m.attr("COLUMN_NAMES") = std::vector<std::string>(kColumnNames.begin(), kColumnNames.end());

    py::class_<SplitRatios>(m, "SplitRatios")
        .def(py::init<double, double, double>(), py::arg("train") = 0.8, py::arg("val") = 0.1, py::arg("test") = 0.1)
        .def_readwrite("train", &SplitRatios::train)
        .def_readwrite("val", &SplitRatios::val)
        .def_readwrite("test", &SplitRatios::test);

    py::class_<SplitIndices>(m, "SplitIndices")
        .def_readonly("train", &SplitIndices::train)
        .def_readonly("val", &SplitIndices::val)
        .def_readonly("test", &SplitIndices::test)
        .def_readonly("fold_of", &SplitIndices::fold_of)
        .def_readonly("k", &SplitIndices::k)
        .def("fold", &SplitIndices::fold, py::arg("id"));

    m.def("split", &split, py::arg("n_records"), py::arg("seed"), py::arg("ratios") = SplitRatios{}, py::arg("k") = 5);

    // ---- oracle ---------------------------------------------------------------
    py::class_<OracleConfig>(m, "OracleConfig")
        .def(py::init<double, std::uint64_t>(), py::arg("noise_sigma") = 0.0, py::arg("seed") = 0)
        .def_readwrite("noise_sigma", &OracleConfig::noise_sigma)
        .def_readwrite("seed", &OracleConfig::seed);

    m.def("oracle_evaluate", &oracle_evaluate, py::arg("design"), py::arg("config") = OracleConfig{},
          py::arg("record_index") = 0);
    m.def("generate_dataset", &generate_dataset, py::arg("space"), py::arg("config") = OracleConfig{});

    // ---- surrogate -------------------------------------------------------------
    py::enum_<Activation>(m, "Activation")
        .value("RELU", Activation::Relu)
        .value("SIGMOID", Activation::Sigmoid)
        .value("TANH", Activation::Tanh);

    py::class_<MlpConfig>(m, "MlpConfig")
        .def(py::init<>())
        .def_readwrite("hidden_sizes", &MlpConfig::hidden_sizes)
        .def_readwrite("hidden_activation", &MlpConfig::hidden_activation)
        .def_readwrite("dropout_rate", &MlpConfig::dropout_rate)
        .def_readwrite("learning_rate", &MlpConfig::learning_rate)
        .def_readwrite("batch_size", &MlpConfig::batch_size)
        .def_readwrite("epochs", &MlpConfig::epochs)
        .def_readwrite("seed", &MlpConfig::seed);

    py::class_<MlpModel>(m, "MlpModel")
        .def("forward", &MlpModel::forward, py::arg("input"))
        .def("predict_physical", &MlpModel::predict_physical, py::arg("design"))
        .def_property_readonly("config", &MlpModel::config);

    py::class_<LossCurves>(m, "LossCurves")
        .def_readonly("train_mse", &LossCurves::train_mse)
        .def_readonly("val_mse", &LossCurves::val_mse);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("model", &TrainResult::model)
        .def_readonly("curves", &TrainResult::curves);

    m.def("train", &train, py::arg("dataset"), py::arg("split"), py::arg("config"));

    py::class_<Metrics>(m, "Metrics")
        .def_readonly("mse", &Metrics::mse)
        .def_readonly("mae", &Metrics::mae)
        .def_readonly("r2", &Metrics::r2)
        .def_readonly("mse_mean", &Metrics::mse_mean)
        .def_readonly("mae_mean", &Metrics::mae_mean)
        .def_readonly("r2_mean", &Metrics::r2_mean);

    m.def("evaluate_metrics", &evaluate_metrics, py::arg("model"), py::arg("dataset"), py::arg("rows"));

    py::class_<SearchSpace>(m, "SearchSpace")
        .def(py::init<>())
        .def_static("full_space", &SearchSpace::full_space)
        .def_readwrite("h1", &SearchSpace::h1)
        .def_readwrite("h2", &SearchSpace::h2)
        .def_readwrite("h3", &SearchSpace::h3)
        .def_readwrite("activations", &SearchSpace::activations)
        .def("__len__", &SearchSpace::size);

    py::class_<GridRow>(m, "GridRow")
        .def_readonly("config", &GridRow::config)
        .def_readonly("mean_val_mse", &GridRow::mean_val_mse)
        .def_readonly("rank", &GridRow::rank);

    py::class_<GridSearchResult>(m, "GridSearchResult")
        .def_readonly("best", &GridSearchResult::best)
        .def_readonly("table", &GridSearchResult::table);

    m.def("grid_search", &grid_search, py::arg("dataset"), py::arg("split"), py::arg("base"), py::arg("space"),
          py::call_guard<py::gil_scoped_release>());

    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
    m.def("load_model", &load_model, py::arg("path"));

    // ---- optimizer -------------------------------------------------------------
    py::class_<NsgaConfig>(m, "NsgaConfig")
        .def(py::init<>())
        .def_readwrite("population_size", &NsgaConfig::population_size)
        .def_readwrite("generations", &NsgaConfig::generations)
        .def_readwrite("crossover_rate", &NsgaConfig::crossover_rate)
        .def_readwrite("mutation_rate", &NsgaConfig::mutation_rate)
        .def_readwrite("sbx_eta", &NsgaConfig::sbx_eta)
        .def_readwrite("pm_eta", &NsgaConfig::pm_eta)
        .def_readwrite("seed", &NsgaConfig::seed);

    py::class_<FrontMember>(m, "FrontMember")
        .def_readonly("genes", &FrontMember::genes)
        .def_readonly("objectives", &FrontMember::objectives);

    py::class_<GenerationStats>(m, "GenerationStats")
        .def_readonly("gen", &GenerationStats::gen)
        .def_readonly("front_size", &GenerationStats::front_size)
        .def_readonly("objective_range", &GenerationStats::objective_range);

    py::class_<NsgaResult>(m, "NsgaResult")
        .def_readonly("front", &NsgaResult::front)
        .def_readonly("stats", &NsgaResult::stats);

    m.def(
        "nsga2_run",
        [](const Evaluator& evaluator, std::size_t n_genes, const NsgaConfig& config) {
            return nsga2_run(evaluator, n_genes, config);
        },
        py::arg("evaluator"), py::arg("n_genes"), py::arg("config"));
    m.def("dominates", &dominates, py::arg("a"), py::arg("b"));

    // ---- pipeline ----------------------------------------------------------------
    py::class_<ObjectivePair>(m, "ObjectivePair")
        .def(py::init<double, double>(), py::arg("f"), py::arg("d"))
        .def_readwrite("f", &ObjectivePair::f)
        .def_readwrite("d", &ObjectivePair::d);

    py::class_<DesignSolution>(m, "DesignSolution")
        .def(py::init<>())
        .def_readwrite("design", &DesignSolution::design)
        .def_readwrite("objectives", &DesignSolution::objectives)
        .def_readwrite("label", &DesignSolution::label);

    py::class_<SelectedPoints>(m, "SelectedPoints")
        .def_readonly("a", &SelectedPoints::a)
        .def_readonly("b", &SelectedPoints::b)
        .def_readonly("c", &SelectedPoints::c);

    py::class_<Violation>(m, "Violation")
        .def_readonly("genes", &Violation::genes)
        .def_readonly("objectives", &Violation::objectives);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("n_samples", &ValidationReport::n_samples)
        .def_readonly("n_dominating", &ValidationReport::n_dominating)
        .def_readonly("violations", &ValidationReport::violations);

    py::class_<ComparisonRow>(m, "ComparisonRow")
        .def_readonly("label", &ComparisonRow::label)
        .def_readonly("predicted", &ComparisonRow::predicted)
        .def_readonly("truth", &ComparisonRow::truth)
        .def_readonly("err_f_pct", &ComparisonRow::err_f_pct)
        .def_readonly("err_d_pct", &ComparisonRow::err_d_pct);

    m.def("compose_objectives", &compose_objectives, py::arg("responses"));
    m.def(
        "optimize_front",
        [](const MlpModel& model, const NsgaConfig& config) {
            const NsgaResult res = nsga2_run(make_evaluator(model), kInputWidth, config);
            return py::make_tuple(decode_front(res.front, model), res.stats);
        },
        py::arg("model"), py::arg("config"),
        "Runs NSGA-II on the trained surrogate and decodes the front to physical designs.");
    m.def(
        "select_points",
        [](std::vector<DesignSolution> front) {
            const SelectedPoints sel = select_points(front);
            return py::make_tuple(front, sel);
        },
        py::arg("front"), "Returns the front with A/B/C labels applied plus the selected indices.");
    m.def("validate_front", &validate_front, py::arg("front"), py::arg("model"), py::arg("n_random"), py::arg("seed"));
    m.def("compare_to_truth", &compare_to_truth, py::arg("front"), py::arg("oracle") = OracleConfig{});
    m.def("percent_error", &percent_error, py::arg("predicted"), py::arg("truth"));
    m.def("write_front_csv", &write_front_csv, py::arg("front"), py::arg("path"));
    m.def("read_front_csv", &read_front_csv, py::arg("path"));
}
