#pragma once

#include <cstdint>
#include <vector>

#include "alphalab/data.hpp"
#include "alphalab/date.hpp"
#include "alphalab/panel.hpp"
#include "alphalab/portfolio.hpp"

namespace alphalab::synth {

struct MarketSpec {
    std::size_t assets = 3;
    std::size_t days = 60;
    double autocorrelation = -0.3;  // lag-1, per asset
    double volatility = 0.02;       // stationary daily std
    double drift = 0.0;             // daily mean return
    Date start = Date::from_ymd(2024, 1, 1);
};

// Independent AR(1) daily returns per asset:
//   r_t = drift + rho (r_{t-1} - drift) + vol sqrt(1 - rho^2) e_t.
ReturnsPanel ar1_panel(const MarketSpec& spec, std::uint64_t seed);

struct AssetFiles {
    data::CandleSeries daily, hourly, m15;
};

// 15-minute candles whose per-day log returns sum to the AR(1) daily
// return, aggregated into exactly consistent hourly and daily candles.
// Asset ids are SYN00, SYN01, ...
std::vector<AssetFiles> ar1_candles(const MarketSpec& spec, std::uint64_t seed);

struct AlphaStreams {
    ReturnsPanel panel;
    portfolio::AlphaStack stack;
};

// L independent alphas with expected Sharpe `sharpe` over `days`: alpha l
// holds only asset l, whose returns are iid normal with mean
// sharpe * vol / sqrt(days).
AlphaStreams independent_alphas(std::size_t alphas, std::size_t days, double sharpe, std::uint64_t seed,
                                double volatility = 0.01);

// Daily candles whose closes reproduce the panel's returns exactly (up to
// rounding); one extra leading candle anchors the first return.
std::vector<data::CandleSeries> candles_from_panel(const ReturnsPanel& panel);

}  // namespace alphalab::synth
