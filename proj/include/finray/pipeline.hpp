#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "finray/mlp.hpp"
#include "finray/nsga2.hpp"
#include "finray/oracle.hpp"

namespace finray {

// The two optimization objectives in maximization space.
struct ObjectivePair {
    double f = 0.0; // contact-force magnitude, N
    double d = 0.0; // tip-displacement magnitude, mm
};

// f = sqrt(fx^2 + fy^2), d = sqrt(dx^2 + dy^2).
ObjectivePair compose_objectives(const Responses& r);

// One decoded front member; label holds any of "A", "B", "C" (concatenated in
// that order when a member carries several).
struct DesignSolution {
    DesignPoint design;
    ObjectivePair objectives;
    std::string label;
};

// Wraps a trained model as the engine's evaluator: genes feed the network
// directly as normalized inputs, predictions are denormalized, composed into
// (f, d), and negated because the engine minimizes.
Evaluator make_evaluator(const MlpModel& model);

// Decodes a raw engine front into physical designs via the model's input
// scaler, flipping objectives back to maximization space.
std::vector<DesignSolution> decode_front(const ParetoFrontRaw& raw, const MlpModel& model);

struct SelectedPoints {
    std::size_t a = 0; // argmax d (delicate handling)
    std::size_t b = 0; // argmax f (load capacity)
    std::size_t c = 0; // nearest (1,1) after per-objective min-max normalization
};

// Labels A/B/C in front (ties resolved toward the first index; an axis whose
// values coincide across the front contributes nothing to C's distance).
SelectedPoints select_points(std::vector<DesignSolution>& front);

struct Violation {
    std::vector<double> genes;
    ObjectivePair objectives;
};

struct ValidationReport {
    std::size_t n_samples = 0;
    std::size_t n_dominating = 0; // samples dominating at least one front member
    std::vector<Violation> violations;
};

// Draws n_random uniform gene vectors, evaluates them through the model, and
// counts samples that dominate any front member in (f, d) maximization space.
ValidationReport validate_front(const std::vector<DesignSolution>& front, const MlpModel& model,
                                std::size_t n_random, std::uint64_t seed);

struct ComparisonRow {
    std::string label;
    ObjectivePair predicted;
    ObjectivePair truth;
    double err_f_pct = 0.0; // 100 |pred - truth| / truth
    double err_d_pct = 0.0;
};

// Re-evaluates each labeled design through the noise-free oracle and reports
// per-objective percent errors.
std::vector<ComparisonRow> compare_to_truth(const std::vector<DesignSolution>& front, const OracleConfig& oracle);

double percent_error(double predicted, double truth);

// Front CSV: t_beam_mm,t_cross_mm,spacing_mm,f_n,d_mm,label
void write_front_csv(const std::vector<DesignSolution>& front, const std::filesystem::path& path);
std::vector<DesignSolution> read_front_csv(const std::filesystem::path& path);

// Validation report JSON: {n_samples, n_dominating, violations: [...]}
void write_validation_json(const ValidationReport& report, const std::filesystem::path& path);

// Comparison CSV: label,pred_d_mm,pred_f_n,truth_d_mm,truth_f_n,err_d_pct,err_f_pct
void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path);

} // namespace finray
