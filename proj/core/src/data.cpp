#include "alphalab/data.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

#include "alphalab/csv.hpp"

namespace alphalab::data {

std::int64_t interval_seconds(Frequency f) {
    switch (f) {
        case Frequency::Daily: return 86400;
        case Frequency::Hourly: return 3600;
        case Frequency::M15: return 900;
    }
    return 0;
}

std::string suffix(Frequency f) {
    switch (f) {
        case Frequency::Daily: return "1d";
        case Frequency::Hourly: return "1h";
        case Frequency::M15: return "15m";
    }
    return {};
}

Frequency parse_frequency(const std::string& text) {
    if (text == "1d" || text == "daily") return Frequency::Daily;
    if (text == "1h" || text == "hourly") return Frequency::Hourly;
    if (text == "15m" || text == "m15") return Frequency::M15;
    throw PreconditionError("unknown frequency '" + text + "'");
}

namespace {

// Binance exports use milliseconds; anything this large cannot be seconds.
constexpr std::int64_t kMillisecondThreshold = 100'000'000'000LL;

std::string row_msg(const std::string& asset, std::size_t row, const std::string& what) {
    return asset + ": row " + std::to_string(row) + ": " + what;
}

}  // namespace

CandleSeries parse_candles(std::istream& in, std::string asset_id, Frequency frequency) {
    CandleSeries s;
    s.asset_id = std::move(asset_id);
    s.frequency = frequency;

    std::string line;
    if (!std::getline(in, line)) throw DataError(DataError::Kind::BadHeader, s.asset_id + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCandleHeader) {
        throw DataError(DataError::Kind::BadHeader, s.asset_id + ": header must be '" + kCandleHeader + "'");
    }

    const std::int64_t step = interval_seconds(frequency);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        auto f = csv::split(line);
        if (f.size() != 10) {
            throw DataError(DataError::Kind::MalformedRow, row_msg(s.asset_id, row, "expected 10 columns"), row);
        }
        Candle c;
        long long ts = 0, trades = 0;
        double* reals[] = {&c.open, &c.high, &c.low, &c.close, &c.base_volume,
                           &c.quote_volume, &c.taker_buy_base, &c.taker_buy_quote};
        bool ok = csv::parse_int64(f[0], ts) && csv::parse_int64(f[9], trades);
        for (std::size_t i = 0; i < 8 && ok; ++i) ok = csv::parse_double(f[i + 1], *reals[i]);
        if (!ok) throw DataError(DataError::Kind::MalformedRow, row_msg(s.asset_id, row, "bad numeric field"), row);
        if (ts >= kMillisecondThreshold) ts /= 1000;
        c.timestamp = ts;
        c.num_trades = trades;

        if (!(c.open > 0 && c.high > 0 && c.low > 0 && c.close > 0)) {
            throw DataError(DataError::Kind::NegativePrice, row_msg(s.asset_id, row, "prices must be > 0"), row);
        }
        if (c.high < std::max(c.open, c.close) || c.low > std::min(c.open, c.close)) {
            throw DataError(DataError::Kind::InconsistentPrices,
                            row_msg(s.asset_id, row, "high/low do not bracket open/close"), row);
        }
        if (c.base_volume < 0 || c.quote_volume < 0 || c.taker_buy_base < 0 || c.taker_buy_quote < 0 ||
            c.num_trades < 0) {
            throw DataError(DataError::Kind::MalformedRow, row_msg(s.asset_id, row, "negative volume"), row);
        }
        if (!s.rows.empty()) {
            std::int64_t diff = c.timestamp - s.rows.back().timestamp;
            if (diff <= 0) {
                throw DataError(DataError::Kind::NonMonotonicTimestamp,
                                row_msg(s.asset_id, row, "timestamp not after previous row"), row);
            }
            if (diff % step != 0) {
                throw DataError(DataError::Kind::NonMonotonicTimestamp,
                                row_msg(s.asset_id, row, "timestamp off the " + suffix(frequency) + " grid"), row);
            }
            if (diff > step) s.gaps.push_back(s.rows.size());
        }
        s.rows.push_back(c);
    }
    return s;
}

CandleSeries load_candles(const std::string& path, Frequency frequency) {
    std::ifstream in(path);
    if (!in) throw DataError(DataError::Kind::FileNotFound, "cannot open " + path);
    std::string stem = std::filesystem::path(path).stem().string();
    std::string tail = "_" + suffix(frequency);
    if (stem.size() > tail.size() && stem.compare(stem.size() - tail.size(), tail.size(), tail) == 0) {
        stem.resize(stem.size() - tail.size());
    }
    return parse_candles(in, stem, frequency);
}

void write_candles(const CandleSeries& series, const std::string& path) {
    std::string out = std::string(kCandleHeader) + "\n";
    for (const auto& c : series.rows) {
        out += std::to_string(c.timestamp);
        for (double v : {c.open, c.high, c.low, c.close, c.base_volume, c.quote_volume, c.taker_buy_base,
                         c.taker_buy_quote}) {
            out += "," + csv::format(v);
        }
        out += "," + std::to_string(c.num_trades) + "\n";
    }
    csv::write_file(path, out);
}

std::vector<double> compute_returns(const CandleSeries& series) {
    if (series.rows.size() < 2) {
        throw DataError(DataError::Kind::InsufficientData, series.asset_id + ": need at least 2 candles for returns");
    }
    std::vector<double> out(series.rows.size() - 1);
    for (std::size_t i = 0; i + 1 < series.rows.size(); ++i) {
        out[i] = series.rows[i + 1].close / series.rows[i].close - 1.0;
    }
    return out;
}

ReturnsPanel build_panel(const std::vector<CandleSeries>& daily_series) {
    if (daily_series.empty()) throw DataError(DataError::Kind::EmptyIntersection, "no series given");
    std::vector<Date> common;
    for (std::size_t k = 0; k < daily_series.size(); ++k) {
        const auto& s = daily_series[k];
        if (s.frequency != Frequency::Daily) throw PreconditionError(s.asset_id + ": build_panel needs daily candles");
        std::vector<Date> dates;
        dates.reserve(s.rows.size());
        for (const auto& c : s.rows) dates.push_back(Date::from_epoch_seconds(c.timestamp));
        if (k == 0) {
            common = std::move(dates);
        } else {
            std::vector<Date> next;
            std::set_intersection(common.begin(), common.end(), dates.begin(), dates.end(), std::back_inserter(next));
            common = std::move(next);
        }
    }
    if (common.size() < 2) {
        throw DataError(DataError::Kind::EmptyIntersection, "series share fewer than two dates");
    }

    ReturnsPanel panel;
    panel.dates.assign(common.begin() + 1, common.end());
    panel.values = Matrix(panel.dates.size(), daily_series.size());
    for (std::size_t a = 0; a < daily_series.size(); ++a) {
        const auto& s = daily_series[a];
        panel.assets.push_back(s.asset_id);
        std::size_t j = 0;
        double prev = 0.0;
        for (std::size_t i = 0; i < common.size(); ++i) {
            while (Date::from_epoch_seconds(s.rows[j].timestamp) != common[i]) ++j;
            double close = s.rows[j].close;
            if (i > 0) panel.values(i - 1, a) = close / prev - 1.0;
            prev = close;
        }
    }
    return panel;
}

std::vector<double> minmax_scale(std::span<const double> v) {
    std::vector<double> out(v.size(), 0.0);
    if (v.empty()) return out;
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double range = *hi - *lo;
    if (range == 0.0) return out;
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / range;
    return out;
}

namespace {

// Returns of `count` consecutive candles opening at start, start+step, ...;
// the first return is measured against the candle opening at start-step.
std::vector<double> segment_returns(const CandleSeries& s, std::int64_t start, std::size_t count) {
    const std::int64_t step = interval_seconds(s.frequency);
    const std::int64_t anchor = start - step;
    auto it = std::lower_bound(s.rows.begin(), s.rows.end(), anchor,
                               [](const Candle& c, std::int64_t t) { return c.timestamp < t; });
    if (s.rows.empty() || s.rows.front().timestamp > anchor) {
        throw DataError(DataError::Kind::InsufficientHistory,
                        s.asset_id + " " + suffix(s.frequency) + ": history starts after " +
                            Date::from_epoch_seconds(anchor).to_string());
    }
    auto gap = [&](std::int64_t t) {
        return DataError(DataError::Kind::FrequencyGap, s.asset_id + " " + suffix(s.frequency) +
                                                            ": missing candle at epoch " + std::to_string(t));
    };
    if (it == s.rows.end() || it->timestamp != anchor) throw gap(anchor);
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        auto next = it + 1;
        std::int64_t want = start + static_cast<std::int64_t>(k) * step;
        if (next == s.rows.end()) {
            throw DataError(DataError::Kind::InsufficientHistory,
                            s.asset_id + " " + suffix(s.frequency) + ": history ends before epoch " +
                                std::to_string(want));
        }
        if (next->timestamp != want) throw gap(want);
        out[k] = next->close / it->close - 1.0;
        it = next;
    }
    return out;
}

void append_scaled(std::vector<double>& out, const std::vector<double>& seg, Scaling scaling) {
    if (scaling == Scaling::PerSegment) {
        auto s = minmax_scale(seg);
        out.insert(out.end(), s.begin(), s.end());
    } else {
        out.insert(out.end(), seg.begin(), seg.end());
    }
}

}  // namespace

FeatureWindow make_windows(const CandleSeries& daily, const CandleSeries& hourly, const CandleSeries& m15,
                           Date as_of, const WindowLayout& layout) {
    if (daily.frequency != Frequency::Daily || hourly.frequency != Frequency::Hourly ||
        m15.frequency != Frequency::M15) {
        throw PreconditionError("make_windows: series frequencies must be 1d, 1h, 15m");
    }
    const Date daily_start = as_of - layout.total_days();
    const Date hourly_start = daily_start + layout.daily_days;
    const Date m15_start = hourly_start + layout.hourly_days;

    auto d = segment_returns(daily, daily_start.epoch_seconds(), static_cast<std::size_t>(layout.daily_days));
    auto h = segment_returns(hourly, hourly_start.epoch_seconds(), static_cast<std::size_t>(24 * layout.hourly_days));
    auto q = segment_returns(m15, m15_start.epoch_seconds(), static_cast<std::size_t>(96 * layout.m15_days));
    auto target = segment_returns(daily, as_of.epoch_seconds(), 1);

    FeatureWindow w;
    w.asset_id = daily.asset_id;
    w.as_of = as_of;
    w.target = target[0];
    w.features.reserve(layout.feature_count());
    append_scaled(w.features, d, layout.scaling);
    append_scaled(w.features, h, layout.scaling);
    append_scaled(w.features, q, layout.scaling);
    if (layout.scaling == Scaling::PerWindow) w.features = minmax_scale(w.features);
    return w;
}

FeatureWindow make_daily_window(const ReturnsPanel& panel, std::size_t asset, Date as_of, int days,
                                Scaling scaling) {
    if (asset >= panel.assets.size()) throw PreconditionError("make_daily_window: asset index out of range");
    if (days < 1) throw PreconditionError("make_daily_window: days must be >= 1");
    auto idx = panel.index_of(as_of);
    if (!idx) {
        throw DataError(DataError::Kind::FrequencyGap, "make_daily_window: " + as_of.to_string() + " not in panel");
    }
    const auto n = static_cast<std::size_t>(days);
    if (*idx < n) {
        throw DataError(DataError::Kind::InsufficientHistory,
                        "make_daily_window: need " + std::to_string(days) + " days before " + as_of.to_string());
    }
    FeatureWindow w;
    w.asset_id = panel.assets[asset];
    w.as_of = as_of;
    w.target = panel.values(*idx, asset);
    w.features.resize(n);
    for (std::size_t k = 0; k < n; ++k) w.features[k] = panel.values(*idx - n + k, asset);
    if (scaling != Scaling::None) w.features = minmax_scale(w.features);
    return w;
}

}  // namespace alphalab::data
