#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alphalab/date.hpp"
#include "alphalab/error.hpp"
#include "alphalab/panel.hpp"

namespace alphalab::metrics {

class MetricError : public Error {
public:
    enum class Kind { ZeroVolatility, InsufficientData, Misaligned };
    MetricError(Kind kind, std::string what) : Error(std::move(what)), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct PnlSeries {
    std::vector<Date> dates;
    std::vector<double> values;
};

struct MetricsReport {
    std::optional<double> sharpe;  // empty when the pnl has zero volatility
    double profit_pct = 0.0;
    double max_drawdown = 0.0;
    double mean_daily_turnover = 0.0;
    std::size_t n_days = 0;
};

// sqrt(N) * mean / population std. `annualization` > 0 replaces sqrt(N)
// by sqrt(annualization).
double sharpe_ratio(std::span<const double> pnl, double annualization = 0.0);
double total_pnl(std::span<const double> pnl);
// min_t (cumsum_t - running max of cumsum), the running max starting from
// the zero balance before the first day. Always <= 0.
double max_drawdown(std::span<const double> pnl);
// min_t (cumsum_t - cummax(pnl)_t), the formula as literally printed
// (running max of the raw daily pnl). Debug comparison only.
double max_drawdown_literal(std::span<const double> pnl);
// Row d-1 -> d L1 distances; length rows - 1.
std::vector<double> turnover(const Matrix& positions);

struct EvalOptions {
    int lag_days = 1;
    double annualization = 0.0;
};

// Daily pnl of `positions` against `panel`: pnl at panel row i is
// positions(row i - lag) . returns(row i). Positions are looked up by date;
// panel dates missing from positions hold no position. The first `lag`
// panel dates are excluded because no position can be held on them.
PnlSeries realized_pnl(const PositionsMatrix& positions, const ReturnsPanel& panel, int lag_days = 1);

// Positions held on each realized-pnl day (aligned with realized_pnl).
Matrix held_positions(const PositionsMatrix& positions, const ReturnsPanel& panel, int lag_days = 1);

MetricsReport report_from(std::span<const double> pnl, const Matrix& held, double annualization = 0.0);

// Full report over pnl dates within [first, last].
MetricsReport evaluate(const PositionsMatrix& positions, const ReturnsPanel& panel, Date first, Date last,
                       const EvalOptions& options = {});

inline constexpr const char* kReportHeader = "alpha,turnover,max_drawdown,profit_pct,sharpe";
std::string to_csv_row(const std::string& alpha, const MetricsReport& report);

}  // namespace alphalab::metrics
