#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "alphalab/date.hpp"
#include "alphalab/error.hpp"
#include "alphalab/panel.hpp"

namespace alphalab::data {

enum class Frequency { Daily, Hourly, M15 };

std::int64_t interval_seconds(Frequency f);
// "1d", "1h", "15m" as used in file names.
std::string suffix(Frequency f);
Frequency parse_frequency(const std::string& text);

struct Candle {
    std::int64_t timestamp = 0;  // UTC epoch seconds at candle open
    double open = 0, high = 0, low = 0, close = 0;
    double base_volume = 0, quote_volume = 0;
    double taker_buy_base = 0, taker_buy_quote = 0;
    std::int64_t num_trades = 0;
};

struct CandleSeries {
    std::string asset_id;
    Frequency frequency = Frequency::Daily;
    std::vector<Candle> rows;
    // Row indices i where rows[i].timestamp - rows[i-1].timestamp exceeds
    // the frequency interval. Gaps are reported, never filled.
    std::vector<std::size_t> gaps;
};

class DataError : public Error {
public:
    enum class Kind {
        FileNotFound,
        BadHeader,
        MalformedRow,
        NonMonotonicTimestamp,
        NegativePrice,
        InconsistentPrices,
        InsufficientData,
        EmptyIntersection,
        InsufficientHistory,
        FrequencyGap,
    };
    DataError(Kind kind, std::string what, std::size_t row = npos)
        : Error(std::move(what)), kind_(kind), row_(row) {}
    Kind kind() const { return kind_; }
    // 1-based data row (header excluded) for row-level errors, npos otherwise.
    std::size_t row() const { return row_; }
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    Kind kind_;
    std::size_t row_;
};

inline constexpr const char* kCandleHeader =
    "timestamp,open,high,low,close,base_volume,quote_volume,taker_buy_base,taker_buy_quote,num_trades";

CandleSeries parse_candles(std::istream& in, std::string asset_id, Frequency frequency);
// asset_id is taken from a "<asset>_<freq>.csv" file name, else the stem.
CandleSeries load_candles(const std::string& path, Frequency frequency);
void write_candles(const CandleSeries& series, const std::string& path);

// close[i+1] / close[i] - 1.
std::vector<double> compute_returns(const CandleSeries& series);

// Daily returns over the dates every series has a candle for. The first
// common date only anchors the price, so rows = |intersection| - 1.
ReturnsPanel build_panel(const std::vector<CandleSeries>& daily_series);

enum class Scaling { PerWindow, PerSegment, None };

struct WindowLayout {
    int daily_days = 14;
    int hourly_days = 3;
    int m15_days = 3;
    Scaling scaling = Scaling::PerWindow;

    int total_days() const { return daily_days + hourly_days + m15_days; }
    std::size_t feature_count() const {
        return static_cast<std::size_t>(daily_days + 24 * hourly_days + 96 * m15_days);
    }
};

struct FeatureWindow {
    std::string asset_id;
    Date as_of;
    std::vector<double> features;
    double target = 0.0;  // raw daily return realized on as_of
};

// (v - min) / (max - min); all zeros when max == min.
std::vector<double> minmax_scale(std::span<const double> v);

// Mixed-frequency window ending just before as_of: daily returns for
// [as_of-20, as_of-6), hourly for [as_of-6, as_of-3), 15-minute for
// [as_of-3, as_of) under the default layout.
FeatureWindow make_windows(const CandleSeries& daily, const CandleSeries& hourly,
                           const CandleSeries& m15, Date as_of,
                           const WindowLayout& layout = {});

// Daily-only variant for markets without intraday candles: the `days`
// returns strictly before as_of, scaled per `scaling`.
FeatureWindow make_daily_window(const ReturnsPanel& panel, std::size_t asset, Date as_of,
                                int days, Scaling scaling = Scaling::PerWindow);

}  // namespace alphalab::data
