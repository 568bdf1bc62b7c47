#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "finray/dataset.hpp"
#include "finray/design_space.hpp"
#include "finray/rng.hpp"

namespace finray {

inline constexpr int kInputWidth = 3;  // t_beam, t_cross, spacing (normalized)
inline constexpr int kOutputWidth = 4; // fx, fy, dx, dy (normalized)

enum class Activation { Relu, Sigmoid, Tanh };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct MlpConfig {
    std::array<int, 3> hidden_sizes = {9, 10, 9};
    Activation hidden_activation = Activation::Relu;
    double dropout_rate = 0.1;    // probability a hidden unit is dropped while training
    double learning_rate = 0.001;
    int batch_size = 1;
    int epochs = 50;
    std::uint64_t seed = 0;
};

void validate_mlp_config(const MlpConfig& config);

// Dense row-major matrix; rows = outputs, cols = inputs.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct Layer {
    Matrix weights;
    std::vector<double> bias;
    Activation activation; // applied to this layer's output
};

// Feedforward regressor 3 -> h1 -> h2 -> h3 -> 4, sigmoid output layer, with the
// min-max scalers for inputs and targets embedded so callers can move between
// physical and normalized units.
class MlpModel {
public:
    MlpModel() = default;
    MlpModel(std::vector<Layer> layers, ScalerParams input_scaler, ScalerParams target_scaler, MlpConfig config);

    // Inference-mode pass (dropout off) on a normalized 3-vector. Inputs outside
    // [0,1] are extrapolation and permitted; non-finite inputs are rejected.
    std::vector<double> forward(const std::vector<double>& input) const;

    // scale -> forward -> unscale convenience for physical-unit callers.
    Responses predict_physical(const DesignPoint& design) const;

    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& mutable_layers() { return layers_; }
    const ScalerParams& input_scaler() const { return input_scaler_; }
    const ScalerParams& target_scaler() const { return target_scaler_; }
    const MlpConfig& config() const { return config_; }

private:
    std::vector<Layer> layers_;
    ScalerParams input_scaler_;
    ScalerParams target_scaler_;
    MlpConfig config_;
};

// Fresh model with uniform +-sqrt(6/(fan_in+fan_out)) weights and zero biases,
// drawn from rng layer by layer (weights row-major, then the next layer).
MlpModel init_model(const MlpConfig& config, const ScalerParams& input_scaler, const ScalerParams& target_scaler,
                    Rng& rng);

// Everything one forward pass produces, kept for backpropagation and for
// dropout diagnostics: pre-activations, activations, and the dropout factor
// applied to each hidden unit (1/(1-rate) kept, 0 dropped; empty in inference).
struct ForwardTrace {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> act;
    std::vector<std::vector<double>> dropout;
};

ForwardTrace forward_trace(const std::vector<Layer>& layers, const std::vector<double>& input, Rng* dropout_rng,
                           double dropout_rate);

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> bias;

    static Gradients zeros_like(const std::vector<Layer>& layers);
};

// MSE loss (mean over batch and over the 4 outputs) and its gradient for every
// weight and bias, by backpropagation. Passing a PRNG enables training-mode
// inverted dropout with masks drawn from it; pass nullptr for inference-mode
// gradients.
std::pair<double, Gradients> loss_and_gradients(const MlpModel& model,
                                                const std::vector<std::vector<double>>& inputs,
                                                const std::vector<std::vector<double>>& targets, Rng* dropout_rng);

// Adam optimizer state (first/second moments per parameter, shared step count).
struct AdamState {
    std::vector<Matrix> m_w, v_w;
    std::vector<std::vector<double>> m_b, v_b;
    long step = 0;

    static AdamState zeros_like(const std::vector<Layer>& layers);
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

// One bias-corrected Adam update; increments state.step.
void adam_step(std::vector<Layer>& layers, AdamState& state, const Gradients& grads, double learning_rate);

struct LossCurves {
    std::vector<double> train_mse; // mean of the epoch's batch losses (dropout active)
    std::vector<double> val_mse;   // full validation MSE at epoch end (dropout off)
};

struct TrainResult {
    MlpModel model;
    LossCurves curves;
};

// Trains on explicit index lists. Scalers are fit on the training rows only.
// Batches are reshuffled every epoch from the model seed; the returned weights
// are the final epoch's. Divergence raises NumericError naming epoch and batch.
TrainResult train_on(const Dataset& dataset, const std::vector<std::size_t>& train_idx,
                     const std::vector<std::size_t>& val_idx, const MlpConfig& config);

// Trains on the split's train/validation parts.
TrainResult train(const Dataset& dataset, const SplitIndices& split, const MlpConfig& config);

// Per-target MSE / MAE / R^2 in normalized target space, plus the mean over the
// four targets. R^2 = 1 - sum((y-yhat)^2)/sum((y-ybar)^2) with ybar taken over
// the evaluated rows.
struct Metrics {
    std::array<double, 4> mse{}, mae{}, r2{};
    double mse_mean = 0.0, mae_mean = 0.0, r2_mean = 0.0;
};

Metrics evaluate_metrics(const MlpModel& model, const Dataset& dataset, const std::vector<std::size_t>& rows);

// Hyperparameter search space over the three hidden widths and the activation.
// Configs enumerate h1 -> h2 -> h3 -> activation, innermost fastest, exactly as
// the candidate lists are ordered.
struct SearchSpace {
    std::vector<int> h1;
    std::vector<int> h2;
    std::vector<int> h3;
    std::vector<Activation> activations;

    // 1..10 per hidden layer, all three activations: 3000 configurations.
    static SearchSpace full_space();

    std::size_t size() const { return h1.size() * h2.size() * h3.size() * activations.size(); }
};

struct GridRow {
    MlpConfig config;
    double mean_val_mse = 0.0;
    int rank = 0; // 1 = selected
};

struct GridSearchResult {
    MlpConfig best; // carries the base seed, so retraining it equals plain train
    std::vector<GridRow> table;
};

// K-fold cross-validated grid search over the non-test portion of the split.
// Per config, score = mean final-epoch validation MSE across the K folds; a
// diverging fold marks the config's score infinite instead of aborting. Ties
// break toward fewer total neurons, then the earlier config in enumeration
// order. Configs are scored concurrently; per-(config, fold) seeds derive from
// the base seed, so the result is independent of scheduling.
GridSearchResult grid_search(const Dataset& dataset, const SplitIndices& split, const MlpConfig& base,
                             const SearchSpace& space);

// Model file round trip (JSON; weights at full precision). load_model rejects
// files whose layer shapes do not chain 3 -> h1 -> h2 -> h3 -> 4.
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

void write_loss_csv(const LossCurves& curves, const std::filesystem::path& path);
void write_grid_csv(const std::vector<GridRow>& table, const std::filesystem::path& path);
void write_metrics_json(const std::vector<std::pair<std::string, Metrics>>& sections,
                        const std::filesystem::path& path);

} // namespace finray
