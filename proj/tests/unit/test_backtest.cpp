#include "doctest.h"
#include "support.hpp"

#include "alphalab/backtest.hpp"
#include "alphalab/synth.hpp"

using namespace alphalab;
using backtest::BacktestError;

namespace {

const Date kStart = Date::from_ymd(2024, 4, 20);

BacktestError::Kind bt_error(const std::function<void()>& f) {
    try {
        f();
    } catch (const BacktestError& e) {
        return e.kind();
    }
    FAIL("expected BacktestError");
    return BacktestError::Kind::AssetMismatch;
}

PositionsMatrix random_positions(const ReturnsPanel& panel, std::mt19937_64& rng) {
    PositionsMatrix p{panel.dates, panel.assets, Matrix(panel.dates.size(), panel.assets.size())};
    auto flat = testing::normal_vector(rng, p.values.flat().size());
    std::copy(flat.begin(), flat.end(), p.values.flat().begin());
    return p;
}

PositionsMatrix slice(const PositionsMatrix& p, std::size_t first, std::size_t n) {
    return {{p.dates.begin() + first, p.dates.begin() + first + n}, p.assets, p.values.slice_rows(first, n)};
}

ReturnsPanel slice(const ReturnsPanel& p, std::size_t first, std::size_t n) {
    return {{p.dates.begin() + first, p.dates.begin() + first + n}, p.assets, p.values.slice_rows(first, n)};
}

}  // namespace

TEST_CASE("zero positions") {
    auto panel = testing::panel(kStart, {{0.01}, {0.02}, {-0.03}, {0.01}});
    auto res = backtest::run(testing::positions(panel, {{0}, {0}, {0}, {0}}), panel);
    CHECK(res.pnl.values == std::vector<double>(3, 0.0));
    CHECK(!res.report_total.sharpe.has_value());
    CHECK(res.report_total.profit_pct == 0.0);
}

TEST_CASE("single asset held long is the shifted return") {
    auto panel = testing::panel(kStart, {{0.01}, {0.02}, {-0.03}, {0.015}});
    auto res = backtest::run(testing::positions(panel, {{1}, {1}, {1}, {1}}), panel);
    CHECK(res.pnl.values == std::vector<double>{0.02, -0.03, 0.015});
    CHECK(res.pnl.dates == std::vector<Date>{kStart + 1, kStart + 2, kStart + 3});
    CHECK(res.cum_pnl[2] == doctest::Approx(0.005).epsilon(1e-14));
}

TEST_CASE("two assets, three days, by hand") {
    auto panel = testing::panel(kStart, {{0.01, -0.02}, {0.03, 0.01}, {-0.01, 0.02}});
    auto pos = testing::positions(panel, {{0.5, -0.5}, {-0.25, 0.75}, {1, 0}});
    backtest::BacktestConfig cfg;
    cfg.normalize = false;
    auto res = backtest::run(pos, panel, cfg);
    REQUIRE(res.pnl.values.size() == 2);
    CHECK(res.pnl.values[0] == doctest::Approx(0.5 * 0.03 - 0.5 * 0.01).epsilon(1e-14));
    CHECK(res.pnl.values[1] == doctest::Approx(-0.25 * -0.01 + 0.75 * 0.02).epsilon(1e-14));
    // normalization leaves these rows unchanged (|.|_1 = 1)
    auto normed = backtest::run(pos, panel);
    CHECK(normed.pnl.values == res.pnl.values);
    // turnover of held rows: |(-0.25,0.75) - (0.5,-0.5)| = 2
    CHECK(res.report_total.mean_daily_turnover == doctest::Approx(2.0));
}

TEST_CASE("errors") {
    auto panel = testing::panel(kStart, {{0.01, 0.0}, {0.02, 0.0}, {0.0, 0.0}});
    auto pos = testing::positions(panel, {{1, 0}, {1, 0}, {1, 0}});
    auto swapped = pos;
    swapped.assets = {"A1", "A0"};
    CHECK(bt_error([&] { backtest::run(swapped, panel); }) == BacktestError::Kind::AssetMismatch);
    auto shifted = pos;
    shifted.dates.back() = kStart + 30;
    CHECK(bt_error([&] { backtest::run(shifted, panel); }) == BacktestError::Kind::DateMisalignment);
    backtest::BacktestConfig zero;
    zero.lag_days = 0;
    CHECK(bt_error([&] { backtest::run(pos, panel, zero); }) == BacktestError::Kind::LookaheadRefused);
    zero.allow_lookahead = true;
    auto same_day = backtest::run(pos, panel, zero);
    CHECK(same_day.pnl.values == std::vector<double>{0.01, 0.02, 0.0});
}

TEST_CASE("no lookahead: future returns never change past pnl") {
    std::mt19937_64 rng(1);
    auto panel = synth::ar1_panel({.assets = 4, .days = 40}, 1);
    auto pos = random_positions(panel, rng);
    auto base = backtest::run(pos, panel);
    for (std::size_t d = 1; d < panel.dates.size(); ++d) {
        auto mutated = panel;
        for (std::size_t t = d + 1; t < panel.dates.size(); ++t) {
            for (double& x : mutated.values.row(t)) x = 0.5 * testing::normal_vector(rng, 1)[0];
        }
        auto res = backtest::run(pos, mutated);
        for (std::size_t i = 0; i < res.pnl.dates.size() && res.pnl.dates[i] <= panel.dates[d]; ++i) {
            CHECK(res.pnl.values[i] == base.pnl.values[i]);
        }
    }
}

TEST_CASE("linearity without normalization") {
    std::mt19937_64 rng(2);
    auto panel = synth::ar1_panel({.assets = 3, .days = 30}, 2);
    auto pos = random_positions(panel, rng);
    backtest::BacktestConfig cfg;
    cfg.normalize = false;
    auto base = backtest::run(pos, panel, cfg);
    for (double c : {0.1, 2.0, 13.0}) {
        auto scaled = pos;
        for (double& x : scaled.values.flat()) x *= c;
        auto res = backtest::run(scaled, panel, cfg);
        for (std::size_t i = 0; i < res.pnl.values.size(); ++i) {
            CHECK(res.pnl.values[i] == doctest::Approx(c * base.pnl.values[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("test-interval report equals a run on truncated inputs") {
    std::mt19937_64 rng(3);
    auto panel = synth::ar1_panel({.assets = 3, .days = 60}, 3);
    auto pos = random_positions(panel, rng);
    for (int lag : {1, 2}) {
        for (std::size_t split : {10, 25, 59}) {
            backtest::BacktestConfig cfg;
            cfg.lag_days = lag;
            cfg.test_start = panel.dates[split];
            auto full = backtest::run(pos, panel, cfg);
            const std::size_t first = split - static_cast<std::size_t>(lag);
            const std::size_t n = panel.dates.size() - first;
            backtest::BacktestConfig flat = cfg;
            auto cut = backtest::run(slice(pos, first, n), slice(panel, first, n), flat);
            const auto& a = full.report_test;
            const auto& b = cut.report_total;
            CHECK(a.n_days == b.n_days);
            CHECK(a.profit_pct == doctest::Approx(b.profit_pct).epsilon(1e-12));
            CHECK(a.max_drawdown == doctest::Approx(b.max_drawdown).epsilon(1e-12));
            CHECK(a.mean_daily_turnover == doctest::Approx(b.mean_daily_turnover).epsilon(1e-12));
            CHECK(a.sharpe.has_value() == b.sharpe.has_value());
            if (a.sharpe && b.sharpe) CHECK(*a.sharpe == doctest::Approx(*b.sharpe).epsilon(1e-12));
        }
    }
}

TEST_CASE("correlation_matrix") {
    std::mt19937_64 rng(4);
    auto panel = synth::ar1_panel({.assets = 3, .days = 50}, 4);
    std::vector<backtest::BacktestResult> results;
    for (int i = 0; i < 4; ++i) results.push_back(backtest::run(random_positions(panel, rng), panel));
    auto anti = results[0];
    for (double& x : anti.pnl.values) x = -x;
    results.push_back(anti);
    auto c = backtest::correlation_matrix(results);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(c(i, i) == 1.0);
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(c(i, j) == c(j, i));
            CHECK((c(i, j) >= -1.0 && c(i, j) <= 1.0));
        }
    }
    CHECK(c(0, 4) == doctest::Approx(-1.0).epsilon(1e-14));
    // textbook oracle: sum of z-score products
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            const auto& x = results[i].pnl.values;
            const auto& y = results[j].pnl.values;
            const double n = static_cast<double>(x.size());
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                sx += x[k], sy += y[k], sxx += x[k] * x[k], syy += y[k] * y[k], sxy += x[k] * y[k];
            }
            const double r = (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
            CHECK(std::fabs(c(i, j) - r) < 1e-12);
        }
    }
    auto short_run = results[0];
    short_run.pnl.dates.resize(2);
    short_run.pnl.values.resize(2);
    CHECK(bt_error([&] { backtest::correlation_matrix({short_run, results[1]}); }) ==
          BacktestError::Kind::InsufficientOverlap);
}

TEST_CASE("pnl csv") {
    auto panel = testing::panel(kStart, {{0.01}, {0.02}, {-0.03}});
    auto res = backtest::run(testing::positions(panel, {{1}, {1}, {1}}), panel);
    CHECK(backtest::pnl_to_csv(res) == "date,pnl,cum_pnl\n2024-04-21,0.02,0.02\n2024-04-22,-0.03,-0.01\n");
    CHECK(backtest::default_test_start() == Date::from_ymd(2024, 4, 25));
}
