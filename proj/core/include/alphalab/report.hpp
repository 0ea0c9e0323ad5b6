#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "alphalab/date.hpp"
#include "alphalab/losses.hpp"
#include "alphalab/matrix.hpp"
#include "alphalab/metrics.hpp"

namespace alphalab::report {

enum class Column { Turnover, MaxDrawdown, Profit, Sharpe };
Column parse_column(const std::string& text);

struct NamedReport {
    std::string name;
    metrics::MetricsReport report;
};

// "alpha,turnover,max_drawdown,profit_pct,sharpe" rows sorted descending
// by `sort_by`; ties keep name order, missing Sharpe sorts last.
std::string metrics_table(std::vector<NamedReport> rows, Column sort_by = Column::Sharpe);

struct Curve {
    std::string name;
    std::vector<Date> dates;
    std::vector<double> values;
};

// Cumulative pnl lines with a dashed marker at test_start.
std::string pnl_plot(const std::vector<Curve>& curves, Date test_start, const std::string& title = "Cumulative PnL");

// Cells colored blue (-1) through white (0) to red (+1).
std::string heatmap(const Matrix& corr, const std::vector<std::string>& names, const std::string& title = "PnL correlation");

std::vector<double> log_spaced(double lo, double hi, std::size_t n);

struct SweepResult {
    std::vector<double> magnitudes;
    std::vector<losses::LossKind> kinds;
    Matrix values;  // magnitudes x kinds
};

// Each loss evaluated at positions c * alpha for every magnitude c.
SweepResult loss_sweep(const std::vector<losses::LossKind>& kinds, const std::vector<double>& magnitudes,
                       std::span<const double> alpha, std::span<const double> r, const losses::LossSpec& base = {});
// "c,ln_c,<kind>..."
std::string sweep_csv(const SweepResult& sweep);
// Value against ln c, one polyline per loss kind.
std::string sweep_svg(const SweepResult& sweep);

std::string xml_escape(const std::string& text);

std::uint64_t fnv1a64(std::string_view bytes);

// Run manifest: config hash, seed, UTC timestamp, and the files written.
std::string manifest_json(std::string_view config_text, std::uint64_t seed, const std::vector<std::string>& files);

}  // namespace alphalab::report
