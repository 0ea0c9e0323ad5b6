#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "alphalab/data.hpp"
#include "alphalab/panel.hpp"

namespace testing {

inline std::vector<double> normal_vector(std::mt19937_64& rng, std::size_t n, double sd = 1.0, double mean = 0.0) {
    std::normal_distribution<double> d(mean, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

// Central differences of f at x, step h.
inline std::vector<double> numeric_grad(const std::function<double(const std::vector<double>&)>& f,
                                        std::vector<double> x, double h = 1e-6) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + h;
        const double up = f(x);
        x[i] = keep - h;
        const double down = f(x);
        x[i] = keep;
        g[i] = (up - down) / (2 * h);
    }
    return g;
}

// ||a - b|| / max(||a||, ||b||, floor): the relative error used for gradient checks.
inline double rel_error(std::span<const double> a, std::span<const double> b, double floor = 1e-8) {
    double diff = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] - b[i]) * (a[i] - b[i]);
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), floor});
}

// Candle series with the given closes at consecutive intervals from `start`.
// open = previous close so the OHLC invariants hold.
inline alphalab::data::CandleSeries candles(const std::string& asset, alphalab::data::Frequency f,
                                            std::int64_t start, const std::vector<double>& closes) {
    alphalab::data::CandleSeries s{asset, f, {}, {}};
    const auto step = alphalab::data::interval_seconds(f);
    double prev = closes.empty() ? 1.0 : closes.front();
    for (std::size_t i = 0; i < closes.size(); ++i) {
        alphalab::data::Candle c;
        c.timestamp = start + static_cast<std::int64_t>(i) * step;
        c.open = prev;
        c.close = closes[i];
        c.high = std::max(c.open, c.close);
        c.low = std::min(c.open, c.close);
        c.base_volume = 1;
        c.num_trades = 1;
        s.rows.push_back(c);
        prev = closes[i];
    }
    return s;
}

inline alphalab::ReturnsPanel panel(alphalab::Date start, const std::vector<std::vector<double>>& rows,
                                    std::vector<std::string> assets = {}) {
    alphalab::ReturnsPanel p;
    const std::size_t m = rows.empty() ? 0 : rows[0].size();
    if (assets.empty()) {
        for (std::size_t a = 0; a < m; ++a) assets.push_back("A" + std::to_string(a));
    }
    p.assets = assets;
    p.values = alphalab::Matrix(rows.size(), m);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        p.dates.push_back(start + static_cast<std::int64_t>(t));
        for (std::size_t a = 0; a < m; ++a) p.values(t, a) = rows[t][a];
    }
    return p;
}

inline alphalab::PositionsMatrix positions(const alphalab::ReturnsPanel& like, const std::vector<std::vector<double>>& rows) {
    alphalab::PositionsMatrix p{like.dates, like.assets, alphalab::Matrix(rows.size(), like.assets.size())};
    p.dates.resize(rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (std::size_t a = 0; a < like.assets.size(); ++a) p.values(t, a) = rows[t][a];
    }
    return p;
}

}  // namespace testing

namespace testing {

// Result of comparing an analytic gradient with central differences. `kink`
// is set when the analytic gradient itself jumps within +-h of x, i.e. the
// point sits on a piecewise boundary where no derivative exists.
struct GradCheck {
    double rel = 0.0;
    bool kink = false;
};

inline GradCheck check_gradient(const std::function<double(const std::vector<double>&)>& value,
                                const std::function<std::vector<double>(const std::vector<double>&)>& grad,
                                const std::vector<double>& x, double h = 1e-6, bool detect_kinks = true) {
    GradCheck out;
    const auto g = grad(x);
    const auto fd = numeric_grad(value, x, h);
    out.rel = rel_error(g, fd);
    if (detect_kinks && out.rel >= 1e-4) {
        auto y = x;
        for (std::size_t i = 0; i < x.size() && !out.kink; ++i) {
            for (double s : {h, -h}) {
                y[i] = x[i] + s;
                if (rel_error(grad(y), g) > 1e-3) out.kink = true;
            }
            y[i] = x[i];
        }
    }
    return out;
}

}  // namespace testing
