#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "alphalab/data.hpp"
#include "alphalab/error.hpp"
#include "alphalab/losses.hpp"
#include "alphalab/matrix.hpp"
#include "alphalab/panel.hpp"

namespace alphalab::models {

class ModelError : public Error {
public:
    enum class Kind { DimensionMismatch, DivergenceDetected, MissingWindow, BadConfig };
    ModelError(Kind kind, std::string what, int epoch = -1) : Error(std::move(what)), kind_(kind), epoch_(epoch) {}
    Kind kind() const { return kind_; }
    // Epoch at which training diverged; -1 for other kinds.
    int epoch() const { return epoch_; }

private:
    Kind kind_;
    int epoch_;
};

enum class ModelKind : std::uint8_t { Linear = 0, MLP = 1, LSTM = 2 };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

// Flat weights plus the dims that fix their layout.
//   Linear: dims = {in, out};            W (out x in), b (out)
//   MLP:    dims = {in, h1, ..., out};   per layer W (next x prev), b (next)
//   LSTM:   dims = {step, steps, hidden, out};
//           W_ih (4H x step), W_hh (4H x H), b (4H), head W (out x H), b (out)
//           gate order input, forget, cell, output
// All matrices are row-major.
struct ModelParams {
    ModelKind kind = ModelKind::Linear;
    std::vector<std::size_t> dims;
    std::vector<double> weights;
    std::uint64_t seed = 0;

    std::size_t input_dim() const;
    std::size_t output_dim() const;
    static std::size_t weight_count(ModelKind kind, const std::vector<std::size_t>& dims);
    void validate() const;
};

// Uniform in [-s, s] with s = 1/sqrt(fan_in) per layer (hidden size for
// the recurrent cell and the head).
ModelParams init(ModelKind kind, std::vector<std::size_t> dims, std::uint64_t seed);

// Linear: Wx + b. MLP: tanh hidden layers, linear output. LSTM: cell
// recurrence over the sequence, last hidden state through the linear head.
// One sample per input row.
Matrix forward(const ModelParams& params, const Matrix& inputs);

// Gradient of sum_{rows} <grad_outputs_row, forward_row> w.r.t. weights.
std::vector<double> backward(const ModelParams& params, const Matrix& inputs, const Matrix& grad_outputs);

enum class OptimizerKind { SGD, Adam };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Adam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

enum class ForecastMode { Singular, Ensemble };

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 20;
    int batch_window = 20;  // consecutive days per loss batch
    OptimizerConfig optimizer;
    losses::LossSpec loss;
    std::optional<losses::TvrRegSpec> tvr_reg;
    ForecastMode mode = ForecastMode::Singular;
    bool shuffle_batches = true;
    std::uint64_t seed = 0;

    void validate() const;
};

// Loss over rows [first, first + count) given the model's outputs for those
// rows; grad is w.r.t. the outputs, row-major.
using BatchObjective = std::function<losses::LossEval(std::size_t first, std::size_t count, const Matrix& outputs)>;

struct TrainResult {
    ModelParams params;
    std::vector<double> loss_trace;  // mean batch loss per epoch
};

// Consecutive [first, first + count) batches of `window` rows; a short tail
// is merged into the last batch.
std::vector<std::pair<std::size_t, std::size_t>> make_batches(std::size_t rows, std::size_t window);

TrainResult train(ModelParams params, const Matrix& inputs, const BatchObjective& objective,
                  const TrainConfig& config);

// Rows are consecutive decision days; targets hold the next-day returns
// the outputs are scored against.
struct Dataset {
    Matrix inputs;
    Matrix targets;
};

// loss(flatten(outputs), flatten(targets)) plus the turnover penalty.
BatchObjective position_objective(const Dataset& dataset, const TrainConfig& config);

TrainResult train(ModelParams params, const Dataset& dataset, const TrainConfig& config);

// Per-(decision date, asset) feature windows. Row t's window uses data up
// to the close of dates[t]; targets(t, a) is asset a's return on the next
// panel date.
struct SampleSet {
    std::vector<Date> dates;
    std::vector<std::string> assets;
    std::size_t features = 0;
    std::vector<double> data;  // dates x assets x features
    Matrix targets;

    std::span<const double> window(std::size_t t, std::size_t a) const {
        return {data.data() + (t * assets.size() + a) * features, features};
    }
};

// Trailing `days` returns from the panel for every decision date that has
// full history and a next date.
SampleSet build_daily_samples(const ReturnsPanel& panel, int days, data::Scaling scaling);

struct AssetCandles {
    data::CandleSeries daily, hourly, m15;
};

// Mixed-frequency windows for each panel decision date where every asset
// has complete coverage; dates lacking coverage for any asset are skipped.
SampleSet build_mixed_samples(const ReturnsPanel& panel, const std::vector<AssetCandles>& candles,
                              const data::WindowLayout& layout);

// Per-day pooling of a mixed window into fixed-width steps:
// [mean, min, max, last] of each day's returns.
SampleSet pool_day_steps(const SampleSet& samples, const data::WindowLayout& layout);
inline constexpr std::size_t kPooledStepWidth = 4;

// Singular: one row per date, features interleaved step-major
// (feature k of asset a at k * assets + a). Targets: all assets.
Dataset singular_dataset(const SampleSet& samples);
// Ensemble member for one asset: that asset's windows and targets.
Dataset member_dataset(const SampleSet& samples, std::size_t asset);

struct PositionModel {
    ForecastMode mode = ForecastMode::Singular;
    std::vector<ModelParams> members;  // one (Singular) or one per asset (Ensemble)
};

struct ArchitectureConfig {
    ModelKind kind = ModelKind::LSTM;
    std::vector<std::size_t> hidden_layers{64};  // MLP
    std::size_t lstm_hidden = 16;
    std::size_t step_width = 1;  // per-asset values per LSTM step
};

// dims for a model reading `features` values per asset and emitting
// `outputs` positions, with `assets` interleaved per step (Singular).
std::vector<std::size_t> model_dims(const ArchitectureConfig& arch, std::size_t features, std::size_t assets,
                                    std::size_t outputs);

struct TrainedModel {
    PositionModel model;
    std::vector<std::vector<double>> loss_traces;  // per member
};

TrainedModel train_position_model(const SampleSet& samples, const ArchitectureConfig& arch,
                                  const TrainConfig& config);

PositionsMatrix predict_positions(const PositionModel& model, const SampleSet& samples);

}  // namespace alphalab::models
