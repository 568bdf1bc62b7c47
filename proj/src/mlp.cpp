#include "finray/mlp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "finray/errors.hpp"
#include "finray/text.hpp"

namespace finray {

using nlohmann::json;

namespace {

double apply_activation(Activation a, double z) {
    switch (a) {
    case Activation::Relu: return z > 0.0 ? z : 0.0;
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::Tanh: return std::tanh(z);
    }
    return z;
}

// Derivative expressed through the activation value where that is cheaper.
double activation_grad(Activation a, double z, double value) {
    switch (a) {
    case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::Sigmoid: return value * (1.0 - value);
    case Activation::Tanh: return 1.0 - value * value;
    }
    return 1.0;
}

std::vector<double> input_row(const SimRecord& rec) {
    return {rec.design.t_beam, rec.design.t_cross, rec.design.spacing};
}

std::vector<double> target_row(const SimRecord& rec) {
    return {rec.fx, rec.fy, rec.dx, rec.dy};
}

// Mean over rows and over the four outputs of squared error, dropout off.
double inference_mse(const MlpModel& model, const std::vector<std::vector<double>>& inputs,
                     const std::vector<std::vector<double>>& targets) {
    double sum = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto pred = model.forward(inputs[i]);
        for (int k = 0; k < kOutputWidth; ++k) {
            const double e = pred[k] - targets[i][k];
            sum += e * e;
        }
    }
    return sum / (static_cast<double>(inputs.size()) * kOutputWidth);
}

const char* const kTargetNames[kOutputWidth] = {"fx", "fy", "dx", "dy"};

} // namespace

const char* activation_name(Activation a) {
    switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
    }
    return "?";
}

Activation activation_from_name(const std::string& name) {
    if (name == "relu")
        return Activation::Relu;
    if (name == "sigmoid")
        return Activation::Sigmoid;
    if (name == "tanh")
        return Activation::Tanh;
    throw ValidationError("unknown activation '" + name + "' (expected relu, sigmoid or tanh)");
}

void validate_mlp_config(const MlpConfig& config) {
    for (int h : config.hidden_sizes)
        if (h < 1)
            throw ValidationError("hidden layer sizes must be positive integers");
    if (!(config.dropout_rate >= 0.0) || config.dropout_rate >= 1.0)
        throw ValidationError("dropout_rate must lie in [0, 1), got " + format_double(config.dropout_rate));
    if (!(config.learning_rate > 0.0))
        throw ValidationError("learning_rate must be positive, got " + format_double(config.learning_rate));
    if (config.batch_size < 1)
        throw ValidationError("batch_size must be >= 1, got " + std::to_string(config.batch_size));
    if (config.epochs < 1)
        throw ValidationError("epochs must be >= 1, got " + std::to_string(config.epochs));
}

MlpModel::MlpModel(std::vector<Layer> layers, ScalerParams input_scaler, ScalerParams target_scaler, MlpConfig config)
    : layers_(std::move(layers)), input_scaler_(std::move(input_scaler)), target_scaler_(std::move(target_scaler)),
      config_(config) {
    validate_mlp_config(config_);
    if (layers_.size() != 4)
        throw ValidationError("model must have 3 hidden layers plus the output layer");
    std::size_t width = kInputWidth;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer& layer = layers_[l];
        const std::size_t expected_rows =
            l < 3 ? static_cast<std::size_t>(config_.hidden_sizes[l]) : static_cast<std::size_t>(kOutputWidth);
        if (layer.weights.rows != expected_rows || layer.weights.cols != width)
            throw ValidationError("layer " + std::to_string(l) + " weight matrix is " +
                                  std::to_string(layer.weights.rows) + "x" + std::to_string(layer.weights.cols) +
                                  ", expected " + std::to_string(expected_rows) + "x" + std::to_string(width));
        if (layer.bias.size() != expected_rows)
            throw ValidationError("layer " + std::to_string(l) + " bias length " + std::to_string(layer.bias.size()) +
                                  ", expected " + std::to_string(expected_rows));
        if (layer.weights.data.size() != layer.weights.rows * layer.weights.cols)
            throw ValidationError("layer " + std::to_string(l) + " weight storage inconsistent");
        for (double w : layer.weights.data)
            if (!std::isfinite(w))
                throw ValidationError("layer " + std::to_string(l) + " contains non-finite weights");
        for (double b : layer.bias)
            if (!std::isfinite(b))
                throw ValidationError("layer " + std::to_string(l) + " contains non-finite biases");
        const Activation expected_act = l < 3 ? config_.hidden_activation : Activation::Sigmoid;
        if (layer.activation != expected_act)
            throw ValidationError("layer " + std::to_string(l) + " activation mismatch");
        width = expected_rows;
    }
    if (input_scaler_.columns() != kInputWidth)
        throw ValidationError("input scaler must have 3 columns");
    if (target_scaler_.columns() != kOutputWidth)
        throw ValidationError("target scaler must have 4 columns");
}

std::vector<double> MlpModel::forward(const std::vector<double>& input) const {
    for (double v : input)
        if (!std::isfinite(v))
            throw ValidationError("forward: non-finite input component");
    const ForwardTrace trace = forward_trace(layers_, input, nullptr, 0.0);
    return trace.act.back();
}

Responses MlpModel::predict_physical(const DesignPoint& design) const {
    const auto normalized = scale_row({design.t_beam, design.t_cross, design.spacing}, input_scaler_);
    const auto out = unscale_row(forward(normalized), target_scaler_);
    return {out[0], out[1], out[2], out[3]};
}

MlpModel init_model(const MlpConfig& config, const ScalerParams& input_scaler, const ScalerParams& target_scaler,
                    Rng& rng) {
    validate_mlp_config(config);
    std::vector<Layer> layers;
    std::size_t fan_in = kInputWidth;
    for (int l = 0; l < 4; ++l) {
        const std::size_t fan_out =
            l < 3 ? static_cast<std::size_t>(config.hidden_sizes[l]) : static_cast<std::size_t>(kOutputWidth);
        Layer layer;
        layer.weights = Matrix(fan_out, fan_in);
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (double& w : layer.weights.data)
            w = rng.uniform(-limit, limit);
        layer.bias.assign(fan_out, 0.0);
        layer.activation = l < 3 ? config.hidden_activation : Activation::Sigmoid;
        layers.push_back(std::move(layer));
        fan_in = fan_out;
    }
    return MlpModel(std::move(layers), input_scaler, target_scaler, config);
}

ForwardTrace forward_trace(const std::vector<Layer>& layers, const std::vector<double>& input, Rng* dropout_rng,
                           double dropout_rate) {
    ForwardTrace trace;
    trace.pre.reserve(layers.size());
    trace.act.reserve(layers.size() + 1);
    trace.act.push_back(input);
    const bool training = dropout_rng != nullptr && dropout_rate > 0.0;
    if (training)
        trace.dropout.reserve(layers.size() - 1);

    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Layer& layer = layers[l];
        const std::vector<double>& prev = trace.act.back();
        std::vector<double> z(layer.weights.rows);
        for (std::size_t r = 0; r < layer.weights.rows; ++r) {
            double acc = layer.bias[r];
            const double* wrow = layer.weights.data.data() + r * layer.weights.cols;
            for (std::size_t c = 0; c < layer.weights.cols; ++c)
                acc += wrow[c] * prev[c];
            z[r] = acc;
        }
        std::vector<double> a(z.size());
        for (std::size_t r = 0; r < z.size(); ++r)
            a[r] = apply_activation(layer.activation, z[r]);
        const bool hidden = l + 1 < layers.size();
        if (hidden && training) {
            std::vector<double> factors(a.size());
            const double keep_scale = 1.0 / (1.0 - dropout_rate);
            for (std::size_t r = 0; r < a.size(); ++r) {
                factors[r] = dropout_rng->uniform() < dropout_rate ? 0.0 : keep_scale;
                a[r] *= factors[r];
            }
            trace.dropout.push_back(std::move(factors));
        }
        trace.pre.push_back(std::move(z));
        trace.act.push_back(std::move(a));
    }
    return trace;
}

Gradients Gradients::zeros_like(const std::vector<Layer>& layers) {
    Gradients g;
    for (const Layer& layer : layers) {
        g.weights.emplace_back(layer.weights.rows, layer.weights.cols);
        g.bias.emplace_back(layer.bias.size(), 0.0);
    }
    return g;
}

std::pair<double, Gradients> loss_and_gradients(const MlpModel& model, const std::vector<std::vector<double>>& inputs,
                                                const std::vector<std::vector<double>>& targets, Rng* dropout_rng) {
    if (inputs.empty() || inputs.size() != targets.size())
        throw ValidationError("loss_and_gradients: batch must be non-empty with matching inputs/targets");
    const auto& layers = model.layers();
    const double rate = model.config().dropout_rate;
    Gradients grads = Gradients::zeros_like(layers);
    const double batch_norm = 1.0 / (static_cast<double>(inputs.size()) * kOutputWidth);

    double loss = 0.0;
    for (std::size_t s = 0; s < inputs.size(); ++s) {
        const ForwardTrace trace = forward_trace(layers, inputs[s], dropout_rng, rate);
        const std::vector<double>& pred = trace.act.back();
        const std::vector<double>& y = targets[s];
        if (y.size() != static_cast<std::size_t>(kOutputWidth))
            throw ValidationError("loss_and_gradients: target width must be 4");

        // delta for the sigmoid output layer
        std::vector<double> delta(pred.size());
        for (std::size_t k = 0; k < pred.size(); ++k) {
            const double err = pred[k] - y[k];
            loss += err * err * batch_norm;
            delta[k] = 2.0 * err * batch_norm * activation_grad(Activation::Sigmoid, trace.pre.back()[k], pred[k]);
        }

        for (std::size_t l = layers.size(); l-- > 0;) {
            const std::vector<double>& prev_act = trace.act[l];
            Matrix& gw = grads.weights[l];
            std::vector<double>& gb = grads.bias[l];
            for (std::size_t r = 0; r < delta.size(); ++r) {
                gb[r] += delta[r];
                double* grow = gw.data.data() + r * gw.cols;
                for (std::size_t c = 0; c < gw.cols; ++c)
                    grow[c] += delta[r] * prev_act[c];
            }
            if (l == 0)
                break;
            const Matrix& w = layers[l].weights;
            const std::size_t prev_size = w.cols;
            std::vector<double> next_delta(prev_size, 0.0);
            for (std::size_t r = 0; r < delta.size(); ++r) {
                const double* wrow = w.data.data() + r * w.cols;
                for (std::size_t c = 0; c < prev_size; ++c)
                    next_delta[c] += wrow[c] * delta[r];
            }
            const bool training = dropout_rng != nullptr && rate > 0.0;
            const Activation act = layers[l - 1].activation;
            for (std::size_t c = 0; c < prev_size; ++c) {
                const double z = trace.pre[l - 1][c];
                // the derivative needs the pre-dropout activation value;
                // trace.act carries the masked one while training
                const double value = training ? apply_activation(act, z) : trace.act[l][c];
                double factor = activation_grad(act, z, value);
                if (training)
                    factor *= trace.dropout[l - 1][c];
                next_delta[c] *= factor;
            }
            delta = std::move(next_delta);
        }
    }
    if (!std::isfinite(loss))
        throw NumericError("loss is not finite");
    return {loss, std::move(grads)};
}

AdamState AdamState::zeros_like(const std::vector<Layer>& layers) {
    AdamState st;
    for (const Layer& layer : layers) {
        st.m_w.emplace_back(layer.weights.rows, layer.weights.cols);
        st.v_w.emplace_back(layer.weights.rows, layer.weights.cols);
        st.m_b.emplace_back(layer.bias.size(), 0.0);
        st.v_b.emplace_back(layer.bias.size(), 0.0);
    }
    return st;
}

void adam_step(std::vector<Layer>& layers, AdamState& state, const Gradients& grads, double learning_rate) {
    if (state.m_w.size() != layers.size() || grads.weights.size() != layers.size())
        throw ValidationError("adam_step: state/gradient shapes do not match the model");
    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double mc = 1.0 - std::pow(kAdamBeta1, t);
    const double vc = 1.0 - std::pow(kAdamBeta2, t);

    auto update = [&](double& param, double g, double& m, double& v) {
        m = kAdamBeta1 * m + (1.0 - kAdamBeta1) * g;
        v = kAdamBeta2 * v + (1.0 - kAdamBeta2) * g * g;
        param -= learning_rate * (m / mc) / (std::sqrt(v / vc) + kAdamEpsilon);
    };

    for (std::size_t l = 0; l < layers.size(); ++l) {
        Layer& layer = layers[l];
        for (std::size_t i = 0; i < layer.weights.data.size(); ++i)
            update(layer.weights.data[i], grads.weights[l].data[i], state.m_w[l].data[i], state.v_w[l].data[i]);
        for (std::size_t i = 0; i < layer.bias.size(); ++i)
            update(layer.bias[i], grads.bias[l][i], state.m_b[l][i], state.v_b[l][i]);
    }
}

TrainResult train_on(const Dataset& dataset, const std::vector<std::size_t>& train_idx,
                     const std::vector<std::size_t>& val_idx, const MlpConfig& config) {
    validate_mlp_config(config);
    if (train_idx.empty() || val_idx.empty())
        throw ValidationError("train: training and validation parts must be non-empty");
    for (std::size_t i : train_idx)
        if (i >= dataset.size())
            throw ValidationError("train: index " + std::to_string(i) + " out of range");
    for (std::size_t i : val_idx)
        if (i >= dataset.size())
            throw ValidationError("train: index " + std::to_string(i) + " out of range");

    // scalers see training rows only
    std::vector<std::vector<double>> train_inputs, train_targets;
    train_inputs.reserve(train_idx.size());
    train_targets.reserve(train_idx.size());
    for (std::size_t i : train_idx) {
        train_inputs.push_back(input_row(dataset[i]));
        train_targets.push_back(target_row(dataset[i]));
    }
    const ScalerParams input_scaler = fit_scaler(train_inputs);
    const ScalerParams target_scaler = fit_scaler(train_targets);

    for (auto& row : train_inputs)
        row = scale_row(row, input_scaler);
    for (auto& row : train_targets)
        row = scale_row(row, target_scaler);

    std::vector<std::vector<double>> val_inputs, val_targets;
    val_inputs.reserve(val_idx.size());
    val_targets.reserve(val_idx.size());
    for (std::size_t i : val_idx) {
        val_inputs.push_back(scale_row(input_row(dataset[i]), input_scaler));
        val_targets.push_back(scale_row(target_row(dataset[i]), target_scaler));
    }

    Rng rng(config.seed);
    MlpModel model = init_model(config, input_scaler, target_scaler, rng);
    AdamState adam = AdamState::zeros_like(model.layers());

    std::vector<std::size_t> order(train_idx.size());
    std::iota(order.begin(), order.end(), 0);

    LossCurves curves;
    curves.train_mse.reserve(static_cast<std::size_t>(config.epochs));
    curves.val_mse.reserve(static_cast<std::size_t>(config.epochs));

    const auto batch = static_cast<std::size_t>(config.batch_size);
    std::vector<std::vector<double>> bx, by;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t seen = 0;
        std::size_t batch_no = 0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            ++batch_no;
            const std::size_t stop = std::min(order.size(), start + batch);
            bx.clear();
            by.clear();
            for (std::size_t p = start; p < stop; ++p) {
                bx.push_back(train_inputs[order[p]]);
                by.push_back(train_targets[order[p]]);
            }
            double loss = 0.0;
            try {
                auto [l, grads] = loss_and_gradients(model, bx, by, &rng);
                loss = l;
                adam_step(model.mutable_layers(), adam, grads, config.learning_rate);
            } catch (const NumericError& e) {
                throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                                   std::to_string(batch_no) + ": " + e.what());
            }
            epoch_loss += loss * static_cast<double>(stop - start);
            seen += stop - start;
        }
        curves.train_mse.push_back(epoch_loss / static_cast<double>(seen));
        const double val = inference_mse(model, val_inputs, val_targets);
        if (!std::isfinite(val))
            throw NumericError("training diverged at epoch " + std::to_string(epoch) + ": validation loss not finite");
        curves.val_mse.push_back(val);
    }
    return {std::move(model), std::move(curves)};
}

TrainResult train(const Dataset& dataset, const SplitIndices& split, const MlpConfig& config) {
    return train_on(dataset, split.train, split.val, config);
}

Metrics evaluate_metrics(const MlpModel& model, const Dataset& dataset, const std::vector<std::size_t>& rows) {
    if (rows.empty())
        throw ValidationError("evaluate_metrics: no rows");
    const std::size_t n = rows.size();
    std::vector<std::array<double, 4>> y(n), yhat(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SimRecord& rec = dataset[rows[i]];
        const auto ny = scale_row(target_row(rec), model.target_scaler());
        const auto pred = model.forward(scale_row(input_row(rec), model.input_scaler()));
        for (int k = 0; k < kOutputWidth; ++k) {
            y[i][static_cast<std::size_t>(k)] = ny[static_cast<std::size_t>(k)];
            yhat[i][static_cast<std::size_t>(k)] = pred[static_cast<std::size_t>(k)];
        }
    }

    Metrics m;
    for (std::size_t k = 0; k < kOutputWidth; ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            mean += y[i][k];
        mean /= static_cast<double>(n);
        double sse = 0.0, sae = 0.0, sst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = y[i][k] - yhat[i][k];
            sse += e * e;
            sae += std::abs(e);
            const double d = y[i][k] - mean;
            sst += d * d;
        }
        if (sst == 0.0)
            throw ValidationError(std::string("evaluate_metrics: R^2 undefined, target column ") + kTargetNames[k] +
                                  " is constant over the evaluated rows");
        m.mse[k] = sse / static_cast<double>(n);
        m.mae[k] = sae / static_cast<double>(n);
        m.r2[k] = 1.0 - sse / sst;
    }
    m.mse_mean = (m.mse[0] + m.mse[1] + m.mse[2] + m.mse[3]) / 4.0;
    m.mae_mean = (m.mae[0] + m.mae[1] + m.mae[2] + m.mae[3]) / 4.0;
    m.r2_mean = (m.r2[0] + m.r2[1] + m.r2[2] + m.r2[3]) / 4.0;
    return m;
}

SearchSpace SearchSpace::full_space() {
    SearchSpace s;
    for (int i = 1; i <= 10; ++i) {
        s.h1.push_back(i);
        s.h2.push_back(i);
        s.h3.push_back(i);
    }
    s.activations = {Activation::Relu, Activation::Sigmoid, Activation::Tanh};
    return s;
}

GridSearchResult grid_search(const Dataset& dataset, const SplitIndices& split, const MlpConfig& base,
                             const SearchSpace& space) {
    validate_mlp_config(base);
    if (space.size() == 0)
        throw ValidationError("grid_search: empty search space");
    if (split.k < 2)
        throw ValidationError("grid_search: split carries no folds");

    std::vector<MlpConfig> configs;
    configs.reserve(space.size());
    for (int h1 : space.h1)
        for (int h2 : space.h2)
            for (int h3 : space.h3)
                for (Activation act : space.activations) {
                    MlpConfig c = base;
                    c.hidden_sizes = {h1, h2, h3};
                    c.hidden_activation = act;
                    configs.push_back(c);
                }

    // per-fold train/validation index lists, shared by every config
    std::vector<std::vector<std::size_t>> fold_train(static_cast<std::size_t>(split.k));
    std::vector<std::vector<std::size_t>> fold_val(static_cast<std::size_t>(split.k));
    for (std::size_t i = 0; i < split.fold_of.size(); ++i) {
        const int f = split.fold_of[i];
        if (f < 0)
            continue;
        for (int g = 0; g < split.k; ++g)
            (g == f ? fold_val : fold_train)[static_cast<std::size_t>(g)].push_back(i);
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> scores(configs.size(), inf);
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (std::size_t ci; (ci = cursor.fetch_add(1)) < configs.size();) {
            double sum = 0.0;
            bool failed = false;
            for (int f = 0; f < split.k && !failed; ++f) {
                MlpConfig c = configs[ci];
                c.seed = Rng::mix(Rng::mix(base.seed, ci), static_cast<std::uint64_t>(f));
                try {
                    const TrainResult res = train_on(dataset, fold_train[static_cast<std::size_t>(f)],
                                                     fold_val[static_cast<std::size_t>(f)], c);
                    sum += res.curves.val_mse.back();
                } catch (const NumericError&) {
                    failed = true;
                }
            }
            const double score = sum / static_cast<double>(split.k);
            scores[ci] = (failed || !std::isfinite(score)) ? inf : score;
        }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), configs.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();

    auto neurons = [&](std::size_t ci) {
        const auto& h = configs[ci].hidden_sizes;
        return h[0] + h[1] + h[2];
    };
    auto better = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b])
            return scores[a] < scores[b];
        if (neurons(a) != neurons(b))
            return neurons(a) < neurons(b);
        return a < b;
    };
    std::vector<std::size_t> by_rank(configs.size());
    std::iota(by_rank.begin(), by_rank.end(), 0);
    std::sort(by_rank.begin(), by_rank.end(), better);

    GridSearchResult result;
    result.table.resize(configs.size());
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        result.table[ci].config = configs[ci];
        result.table[ci].mean_val_mse = scores[ci];
    }
    for (std::size_t pos = 0; pos < by_rank.size(); ++pos)
        result.table[by_rank[pos]].rank = static_cast<int>(pos) + 1;
    result.best = configs[by_rank.front()];
    result.best.seed = base.seed; // retraining the winner must match plain train
    return result;
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
    json j;
    j["prng"] = kPrngName;
    j["seed"] = model.config().seed;
    j["config"] = {{"hidden_sizes", model.config().hidden_sizes},
                   {"hidden_activation", activation_name(model.config().hidden_activation)},
                   {"dropout_rate", model.config().dropout_rate},
                   {"learning_rate", model.config().learning_rate},
                   {"batch_size", model.config().batch_size},
                   {"epochs", model.config().epochs}};
    auto scaler_json = [](const ScalerParams& s) {
        json out;
        for (std::size_t c = 0; c < s.columns(); ++c) {
            out["min"].push_back(s.min(c));
            out["max"].push_back(s.max(c));
        }
        return out;
    };
    j["input_scaler"] = scaler_json(model.input_scaler());
    j["target_scaler"] = scaler_json(model.target_scaler());
    for (const Layer& layer : model.layers()) {
        json lj;
        for (std::size_t r = 0; r < layer.weights.rows; ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < layer.weights.cols; ++c)
                row.push_back(layer.weights.at(r, c));
            lj["weights"].push_back(std::move(row));
        }
        lj["bias"] = layer.bias;
        lj["activation"] = activation_name(layer.activation);
        j["layers"].push_back(std::move(lj));
    }

    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write model file: " + path.string());
    out << j.dump(2) << '\n';
    if (!out)
        throw IoError("write failed: " + path.string());
}

MlpModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open model file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("model file parse error in " + path.string() + ": " + e.what());
    }
    try {
        MlpConfig config;
        const json& cj = j.at("config");
        const auto sizes = cj.at("hidden_sizes").get<std::vector<int>>();
        if (sizes.size() != 3)
            throw ValidationError("config.hidden_sizes must have 3 entries");
        config.hidden_sizes = {sizes[0], sizes[1], sizes[2]};
        config.hidden_activation = activation_from_name(cj.at("hidden_activation").get<std::string>());
        config.dropout_rate = cj.at("dropout_rate").get<double>();
        config.learning_rate = cj.at("learning_rate").get<double>();
        config.batch_size = cj.at("batch_size").get<int>();
        config.epochs = cj.at("epochs").get<int>();
        config.seed = j.at("seed").get<std::uint64_t>();

        auto scaler_from = [](const json& sj) {
            return ScalerParams(sj.at("min").get<std::vector<double>>(), sj.at("max").get<std::vector<double>>());
        };
        ScalerParams input_scaler = scaler_from(j.at("input_scaler"));
        ScalerParams target_scaler = scaler_from(j.at("target_scaler"));

        std::vector<Layer> layers;
        for (const json& lj : j.at("layers")) {
            Layer layer;
            const auto rows = lj.at("weights").get<std::vector<std::vector<double>>>();
            layer.weights = Matrix(rows.size(), rows.empty() ? 0 : rows.front().size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r].size() != layer.weights.cols)
                    throw ValidationError("layer " + std::to_string(layers.size()) + " has ragged weight rows");
                for (std::size_t c = 0; c < rows[r].size(); ++c)
                    layer.weights.at(r, c) = rows[r][c];
            }
            layer.bias = lj.at("bias").get<std::vector<double>>();
            layer.activation = activation_from_name(lj.at("activation").get<std::string>());
            layers.push_back(std::move(layer));
        }
        return MlpModel(std::move(layers), std::move(input_scaler), std::move(target_scaler), config);
    } catch (const json::exception& e) {
        throw ValidationError("model file schema mismatch in " + path.string() + ": " + e.what());
    }
}

void write_loss_csv(const LossCurves& curves, const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write loss file: " + path.string());
    out << "epoch,train_mse,val_mse\n";
    for (std::size_t e = 0; e < curves.train_mse.size(); ++e)
        out << e + 1 << ',' << format_double(curves.train_mse[e]) << ',' << format_double(curves.val_mse[e]) << '\n';
}

void write_grid_csv(const std::vector<GridRow>& table, const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write grid-search file: " + path.string());
    out << "h1,h2,h3,activation,mean_val_mse,rank\n";
    for (const GridRow& row : table) {
        out << row.config.hidden_sizes[0] << ',' << row.config.hidden_sizes[1] << ',' << row.config.hidden_sizes[2]
            << ',' << activation_name(row.config.hidden_activation) << ',' << format_double(row.mean_val_mse) << ','
            << row.rank << '\n';
    }
}

void write_metrics_json(const std::vector<std::pair<std::string, Metrics>>& sections,
                        const std::filesystem::path& path) {
    json j;
    j["prng"] = kPrngName;
    for (const auto& [name, m] : sections) {
        json sj;
        for (std::size_t k = 0; k < kOutputWidth; ++k)
            sj[kTargetNames[k]] = {{"mse", m.mse[k]}, {"mae", m.mae[k]}, {"r2", m.r2[k]}};
        sj["mean"] = {{"mse", m.mse_mean}, {"mae", m.mae_mean}, {"r2", m.r2_mean}};
        j[name] = std::move(sj);
    }
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write metrics file: " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace finray
