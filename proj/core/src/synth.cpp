#include "alphalab/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace alphalab::synth {

namespace {

std::string asset_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "SYN%02zu", i);
    return buf;
}

std::vector<Date> consecutive_dates(Date start, std::size_t n) {
    std::vector<Date> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<std::int64_t>(i);
    return out;
}

}  // namespace

ReturnsPanel ar1_panel(const MarketSpec& spec, std::uint64_t seed) {
    if (spec.assets == 0 || spec.days == 0) throw PreconditionError("synthetic market needs assets and days");
    if (!(std::abs(spec.autocorrelation) < 1.0)) throw PreconditionError("autocorrelation must be in (-1, 1)");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ReturnsPanel p;
    p.dates = consecutive_dates(spec.start, spec.days);
    p.values = Matrix(spec.days, spec.assets);
    const double rho = spec.autocorrelation;
    const double innov = spec.volatility * std::sqrt(1.0 - rho * rho);
    for (std::size_t a = 0; a < spec.assets; ++a) {
        p.assets.push_back(asset_name(a));
        double prev = spec.drift + spec.volatility * normal(rng);
        for (std::size_t t = 0; t < spec.days; ++t) {
            double r = t == 0 ? prev : spec.drift + rho * (prev - spec.drift) + innov * normal(rng);
            r = std::max(r, -0.95);
            p.values(t, a) = r;
            prev = r;
        }
    }
    return p;
}

std::vector<AssetFiles> ar1_candles(const MarketSpec& spec, std::uint64_t seed) {
    // Returns match ar1_panel(spec, seed); one extra flat leading day
    // anchors the first of them.
    ReturnsPanel daily = ar1_panel(spec, seed);
    const std::size_t n_days = spec.days + 1;
    std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double intraday_sd = spec.volatility / std::sqrt(96.0);

    std::vector<AssetFiles> out(spec.assets);
    for (std::size_t a = 0; a < spec.assets; ++a) {
        auto& f = out[a];
        for (auto* series : {&f.daily, &f.hourly, &f.m15}) series->asset_id = asset_name(a);
        f.daily.frequency = data::Frequency::Daily;
        f.hourly.frequency = data::Frequency::Hourly;
        f.m15.frequency = data::Frequency::M15;

        double price = 100.0;
        for (std::size_t d = 0; d < n_days; ++d) {
            const std::int64_t day_start = (spec.start + static_cast<std::int64_t>(d) - 1).epoch_seconds();
            const double target = d == 0 ? 0.0 : std::log1p(daily.values(d - 1, a));
            double steps[96], mean = 0.0;
            for (double& x : steps) {
                x = intraday_sd * normal(rng);
                mean += x / 96.0;
            }
            data::Candle day{};
            day.timestamp = day_start;
            day.open = price;
            day.high = day.low = price;
            for (int k = 0; k < 96; ++k) {
                data::Candle c{};
                c.timestamp = day_start + 900 * k;
                c.open = price;
                // Bridge: increments sum to the daily log return.
                c.close = price * std::exp(steps[k] - mean + target / 96.0);
                if (k == 95) c.close = day.open * std::exp(target);
                const double wick = intraday_sd * 0.5;
                c.high = std::max(c.open, c.close) * (1.0 + wick * unit(rng));
                c.low = std::min(c.open, c.close) * (1.0 - wick * unit(rng));
                c.base_volume = 1000.0 * (0.5 + unit(rng));
                c.quote_volume = c.base_volume * 0.5 * (c.open + c.close);
                c.taker_buy_base = c.base_volume * unit(rng);
                c.taker_buy_quote = c.taker_buy_base * 0.5 * (c.open + c.close);
                c.num_trades = 50 + static_cast<std::int64_t>(100 * unit(rng));
                f.m15.rows.push_back(c);
                price = c.close;

                if (k % 4 == 0) {
                    data::Candle h = c;
                    f.hourly.rows.push_back(h);
                } else {
                    auto& h = f.hourly.rows.back();
                    h.close = c.close;
                    h.high = std::max(h.high, c.high);
                    h.low = std::min(h.low, c.low);
                    h.base_volume += c.base_volume;
                    h.quote_volume += c.quote_volume;
                    h.taker_buy_base += c.taker_buy_base;
                    h.taker_buy_quote += c.taker_buy_quote;
                    h.num_trades += c.num_trades;
                }
                day.high = std::max(day.high, c.high);
                day.low = std::min(day.low, c.low);
                day.base_volume += c.base_volume;
                day.quote_volume += c.quote_volume;
                day.taker_buy_base += c.taker_buy_base;
                day.taker_buy_quote += c.taker_buy_quote;
                day.num_trades += c.num_trades;
            }
            day.close = price;
            f.daily.rows.push_back(day);
        }
    }
    return out;
}

AlphaStreams independent_alphas(std::size_t alphas, std::size_t days, double sharpe, std::uint64_t seed,
                                double volatility) {
    if (alphas < 2 || days < 2) throw PreconditionError("independent_alphas needs >= 2 alphas and >= 2 days");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    AlphaStreams s;
    auto& p = s.panel;
    // Row 0 carries no pnl under the one-day lag, so generate one extra.
    p.dates = consecutive_dates(Date::from_ymd(2020, 1, 1), days + 1);
    p.values = Matrix(days + 1, alphas);
    const double mu = sharpe * volatility / std::sqrt(static_cast<double>(days));
    for (std::size_t a = 0; a < alphas; ++a) {
        p.assets.push_back(asset_name(a));
        for (std::size_t t = 0; t <= days; ++t) p.values(t, a) = mu + volatility * normal(rng);
    }
    for (std::size_t l = 0; l < alphas; ++l) {
        PositionsMatrix pos{p.dates, p.assets, Matrix(days + 1, alphas)};
        for (std::size_t t = 0; t <= days; ++t) pos.values(t, l) = 1.0;
        char name[32];
        std::snprintf(name, sizeof name, "alpha%02zu", l);
        s.stack.names.emplace_back(name);
        s.stack.alphas.push_back(std::move(pos));
    }
    return s;
}

std::vector<data::CandleSeries> candles_from_panel(const ReturnsPanel& panel) {
    std::vector<data::CandleSeries> out;
    if (panel.dates.empty()) return out;
    for (std::size_t a = 0; a < panel.assets.size(); ++a) {
        data::CandleSeries s;
        s.asset_id = panel.assets[a];
        s.frequency = data::Frequency::Daily;
        double price = 100.0;
        auto push = [&](Date d, double open, double close) {
            data::Candle c{};
            c.timestamp = d.epoch_seconds();
            c.open = open;
            c.close = close;
            c.high = std::max(open, close);
            c.low = std::min(open, close);
            s.rows.push_back(c);
        };
        push(panel.dates[0] - 1, price, price);
        for (std::size_t t = 0; t < panel.dates.size(); ++t) {
            double next = price * (1.0 + panel.values(t, a));
            push(panel.dates[t], price, next);
            price = next;
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace alphalab::synth
