#pragma once

#include <string>
#include <vector>

#include "alphalab/date.hpp"
#include "alphalab/error.hpp"
#include "alphalab/metrics.hpp"
#include "alphalab/panel.hpp"

namespace alphalab::backtest {

class BacktestError : public Error {
public:
    enum class Kind { AssetMismatch, DateMisalignment, LookaheadRefused, InsufficientOverlap };
    BacktestError(Kind kind, std::string what) : Error(std::move(what)), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

inline Date default_test_start() { return Date::from_ymd(2024, 4, 25); }

struct BacktestConfig {
    int lag_days = 1;
    Date test_start = default_test_start();
    bool normalize = true;        // L1-normalize each row before trading
    bool allow_lookahead = false; // required for lag_days == 0
    double annualization = 0.0;
};

struct BacktestResult {
    metrics::PnlSeries pnl;
    std::vector<double> cum_pnl;
    metrics::MetricsReport report_total;
    metrics::MetricsReport report_test;
};

// pnl(d) = sum_a positions_a(d - lag) * r_a(d) over panel dates, arithmetic.
BacktestResult run(const PositionsMatrix& positions, const ReturnsPanel& panel, const BacktestConfig& config = {});

// Pearson correlation of daily pnl over the dates each pair shares. A pair
// where either series is constant over the overlap gets 0.
Matrix correlation_matrix(const std::vector<BacktestResult>& results);

// "date,pnl,cum_pnl"
std::string pnl_to_csv(const BacktestResult& result);

}  // namespace alphalab::backtest
