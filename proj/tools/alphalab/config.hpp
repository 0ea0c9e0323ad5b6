#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alphalab/backtest.hpp"
#include "alphalab/data.hpp"
#include "alphalab/losses.hpp"
#include "alphalab/models.hpp"
#include "alphalab/portfolio.hpp"
#include "alphalab/report.hpp"
#include "alphalab/synth.hpp"

namespace alphalab::cli {

enum class FeatureSource { Mixed, Daily };

struct DataSection {
    std::string dir = "data";
    std::vector<std::string> assets;  // empty: every <asset>_1d.csv in dir
    FeatureSource features = FeatureSource::Mixed;
    int window_days = 20;             // daily feature window / mixed total
    data::WindowLayout layout;
};

struct ModelSection {
    std::string name = "model";
    models::ArchitectureConfig arch;
    bool pooled_day_steps = false;    // LSTM over per-day pooled features
};

struct AlphaSection {
    std::vector<std::string> names{"reversion", "momentum", "mean_reversion", "buy_hold"};
    int window = 5;
};

struct PortfolioSection {
    std::vector<portfolio::SchemeKind> schemes{portfolio::SchemeKind::EqualWeighted};
    int lookback = 20;
    models::ArchitectureConfig arch;
    models::TrainConfig train;
};

struct SweepSection {
    std::vector<losses::LossKind> losses{losses::LossKind::Sharpe, losses::LossKind::ModSharpe,
                                         losses::LossKind::PnL};
    double c_min = 1e-2;
    double c_max = 1e2;
    std::size_t points = 9;
    std::size_t length = 64;
    double returns_volatility = 0.01;
};

struct SynthSection {
    synth::MarketSpec market;
    std::size_t alphas = 0;  // also write an independent-alpha stack when > 0
    std::size_t alpha_days = 2000;
    double alpha_sharpe = 1.0;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    DataSection data;
    AlphaSection alphas;
    models::TrainConfig train;
    ModelSection model;
    backtest::BacktestConfig backtest;
    report::Column sort_by = report::Column::Sharpe;
    PortfolioSection portfolio;
    SweepSection sweep;
    SynthSection synth;
    std::string source_text;  // raw JSON, hashed into the run manifest
};

// Missing keys take the defaults above; unknown enum strings throw
// PreconditionError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Sidecar written next to a checkpoint: what is needed to rebuild the
// model's inputs and re-run it.
std::string train_sidecar_json(const ExperimentConfig& config);
ExperimentConfig apply_sidecar(ExperimentConfig base, const std::string& sidecar_text);

}  // namespace alphalab::cli
