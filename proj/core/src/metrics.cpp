#include "alphalab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alphalab/csv.hpp"

namespace alphalab::metrics {

double sharpe_ratio(std::span<const double> pnl, double annualization) {
    const std::size_t n = pnl.size();
    if (n < 2) throw MetricError(MetricError::Kind::InsufficientData, "sharpe_ratio: need at least 2 observations");
    double mean = 0.0, scale = 0.0;
    for (double v : pnl) {
        mean += v;
        scale = std::max(scale, std::abs(v));
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : pnl) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / static_cast<double>(n));
    // Numerically constant series (e.g. all equal) leave rounding residue.
    if (sd <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
        throw MetricError(MetricError::Kind::ZeroVolatility, "sharpe_ratio: pnl has zero volatility");
    }
    double root = annualization > 0.0 ? std::sqrt(annualization) : std::sqrt(static_cast<double>(n));
    return root * mean / sd;
}

double total_pnl(std::span<const double> pnl) {
    double s = 0.0;
    for (double v : pnl) s += v;
    return s;
}

double max_drawdown(std::span<const double> pnl) {
    double cum = 0.0, peak = 0.0, worst = 0.0;
    for (double v : pnl) {
        cum += v;
        peak = std::max(peak, cum);
        worst = std::min(worst, cum - peak);
    }
    return worst;
}

double max_drawdown_literal(std::span<const double> pnl) {
    if (pnl.empty()) return 0.0;
    double cum = 0.0, peak = -std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
    for (double v : pnl) {
        cum += v;
        peak = std::max(peak, v);
        worst = std::min(worst, cum - peak);
    }
    return worst;
}

std::vector<double> turnover(const Matrix& positions) {
    if (positions.rows() < 2) throw MetricError(MetricError::Kind::InsufficientData, "turnover: need at least 2 rows");
    std::vector<double> out(positions.rows() - 1, 0.0);
    for (std::size_t d = 1; d < positions.rows(); ++d) {
        auto prev = positions.row(d - 1);
        auto cur = positions.row(d);
        double s = 0.0;
        for (std::size_t a = 0; a < cur.size(); ++a) s += std::abs(cur[a] - prev[a]);
        out[d - 1] = s;
    }
    return out;
}

namespace {

void check_alignment(const PositionsMatrix& positions, const ReturnsPanel& panel, int lag_days) {
    if (lag_days < 0) throw PreconditionError("lag_days must be >= 0");
    if (positions.assets != panel.assets) {
        throw MetricError(MetricError::Kind::Misaligned, "positions and panel assets differ");
    }
}

}  // namespace

Matrix held_positions(const PositionsMatrix& positions, const ReturnsPanel& panel, int lag_days) {
    check_alignment(positions, panel, lag_days);
    const auto lag = static_cast<std::size_t>(lag_days);
    const std::size_t n = panel.dates.size() > lag ? panel.dates.size() - lag : 0;
    Matrix held(n, panel.assets.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (auto src = positions.index_of(panel.dates[i])) {
            auto from = positions.values.row(*src);
            std::copy(from.begin(), from.end(), held.row(i).begin());
        }
    }
    return held;
}

PnlSeries realized_pnl(const PositionsMatrix& positions, const ReturnsPanel& panel, int lag_days) {
    Matrix held = held_positions(positions, panel, lag_days);
    const auto lag = static_cast<std::size_t>(lag_days);
    PnlSeries out;
    out.dates.assign(panel.dates.begin() + static_cast<std::ptrdiff_t>(panel.dates.size() - held.rows()),
                     panel.dates.end());
    out.values.resize(held.rows());
    for (std::size_t i = 0; i < held.rows(); ++i) {
        auto w = held.row(i);
        auto r = panel.values.row(i + lag);
        double s = 0.0;
        for (std::size_t a = 0; a < w.size(); ++a) s += w[a] * r[a];
        out.values[i] = s;
    }
    return out;
}

MetricsReport report_from(std::span<const double> pnl, const Matrix& held, double annualization) {
    MetricsReport rep;
    rep.n_days = pnl.size();
    rep.profit_pct = 100.0 * total_pnl(pnl);
    rep.max_drawdown = max_drawdown(pnl);
    try {
        rep.sharpe = sharpe_ratio(pnl, annualization);
    } catch (const MetricError&) {
        rep.sharpe.reset();
    }
    if (held.rows() >= 2) {
        auto t = turnover(held);
        rep.mean_daily_turnover = total_pnl(t) / static_cast<double>(t.size());
    }
    return rep;
}

MetricsReport evaluate(const PositionsMatrix& positions, const ReturnsPanel& panel, Date first, Date last,
                       const EvalOptions& options) {
    auto pnl = realized_pnl(positions, panel, options.lag_days);
    Matrix held = held_positions(positions, panel, options.lag_days);
    std::size_t lo = lower_bound_index(pnl.dates, first);
    std::size_t hi = lower_bound_index(pnl.dates, last + 1);
    if (hi < lo) hi = lo;
    return report_from(std::span<const double>(pnl.values).subspan(lo, hi - lo), held.slice_rows(lo, hi - lo),
                       options.annualization);
}

std::string to_csv_row(const std::string& alpha, const MetricsReport& report) {
    return alpha + "," + csv::format(report.mean_daily_turnover) + "," + csv::format(report.max_drawdown) + "," +
           csv::format(report.profit_pct) + "," + (report.sharpe ? csv::format(*report.sharpe) : std::string());
}

}  // namespace alphalab::metrics
