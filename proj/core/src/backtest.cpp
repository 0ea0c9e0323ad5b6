#include "alphalab/backtest.hpp"

#include <algorithm>
#include <cmath>

#include "alphalab/alphas.hpp"
#include "alphalab/csv.hpp"

namespace alphalab::backtest {

BacktestResult run(const PositionsMatrix& positions, const ReturnsPanel& panel, const BacktestConfig& config) {
    if (config.lag_days < 0) throw PreconditionError("lag_days must be >= 0");
    if (config.lag_days == 0 && !config.allow_lookahead) {
        throw BacktestError(BacktestError::Kind::LookaheadRefused, "lag_days = 0 trades on same-day returns; set allow_lookahead");
    }
    positions.validate();
    if (positions.assets != panel.assets) {
        throw BacktestError(BacktestError::Kind::AssetMismatch, "positions and panel list different assets");
    }
    for (Date d : positions.dates) {
        if (!panel.index_of(d)) {
            throw BacktestError(BacktestError::Kind::DateMisalignment, "position date " + d.to_string() + " not in panel");
        }
    }

    const PositionsMatrix traded = config.normalize ? alphas::l1_normalize(positions) : positions;
    BacktestResult res;
    res.pnl = metrics::realized_pnl(traded, panel, config.lag_days);
    res.cum_pnl.resize(res.pnl.values.size());
    double cum = 0.0;
    for (std::size_t i = 0; i < res.cum_pnl.size(); ++i) res.cum_pnl[i] = cum += res.pnl.values[i];

    Matrix held = metrics::held_positions(traded, panel, config.lag_days);
    res.report_total = metrics::report_from(res.pnl.values, held, config.annualization);
    const std::size_t lo = lower_bound_index(res.pnl.dates, config.test_start);
    const std::size_t n = res.pnl.values.size() - lo;
    res.report_test = metrics::report_from(std::span<const double>(res.pnl.values).subspan(lo, n),
                                           held.slice_rows(lo, n), config.annualization);
    return res;
}

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

Matrix correlation_matrix(const std::vector<BacktestResult>& results) {
    const std::size_t L = results.size();
    Matrix c(L, L, 0.0);
    for (std::size_t i = 0; i < L; ++i) {
        c(i, i) = 1.0;
        for (std::size_t j = i + 1; j < L; ++j) {
            const auto& a = results[i].pnl;
            const auto& b = results[j].pnl;
            std::vector<double> x, y;
            std::size_t p = 0, q = 0;
            while (p < a.dates.size() && q < b.dates.size()) {
                if (a.dates[p] < b.dates[q]) {
                    ++p;
                } else if (b.dates[q] < a.dates[p]) {
                    ++q;
                } else {
                    x.push_back(a.values[p++]);
                    y.push_back(b.values[q++]);
                }
            }
            if (x.size() < 3) {
                throw BacktestError(BacktestError::Kind::InsufficientOverlap,
                                    "correlation needs >= 3 common days (pair " + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
            }
            c(i, j) = c(j, i) = pearson(x, y);
        }
    }
    return c;
}

std::string pnl_to_csv(const BacktestResult& result) {
    std::string out = "date,pnl,cum_pnl\n";
    for (std::size_t i = 0; i < result.pnl.values.size(); ++i) {
        out += result.pnl.dates[i].to_string() + "," + csv::format(result.pnl.values[i]) + "," +
               csv::format(result.cum_pnl[i]) + "\n";
    }
    return out;
}

}  // namespace alphalab::backtest
