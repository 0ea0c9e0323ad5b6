#include "alphalab/alphas.hpp"

#include <cmath>

#include "alphalab/csv.hpp"
#include "alphalab/error.hpp"

namespace alphalab::alphas {

namespace {

PositionsMatrix like(const ReturnsPanel& panel) {
    return PositionsMatrix{panel.dates, panel.assets, Matrix(panel.dates.size(), panel.assets.size())};
}

}  // namespace

PositionsMatrix reversion(const ReturnsPanel& panel) {
    auto p = like(panel);
    for (std::size_t i = 0; i < p.values.flat().size(); ++i) p.values.flat()[i] = -panel.values.flat()[i];
    return p;
}

PositionsMatrix momentum(const ReturnsPanel& panel, int window) {
    if (window < 1) throw PreconditionError("momentum window must be >= 1");
    const auto w = static_cast<std::size_t>(window);
    auto p = like(panel);
    const std::size_t rows = panel.dates.size(), cols = panel.assets.size();
    for (std::size_t a = 0; a < cols; ++a) {
        for (std::size_t t = w - 1; t < rows; ++t) {
            // Direct sum per row: no drift from a running window.
            double s = 0.0;
            for (std::size_t k = t + 1 - w; k <= t; ++k) s += panel.values(k, a);
            p.values(t, a) = s / static_cast<double>(w);
        }
    }
    return p;
}

PositionsMatrix mean_reversion(const ReturnsPanel& panel, int window) {
    auto p = momentum(panel, window);
    for (double& v : p.values.flat()) v = -v;
    return p;
}

PositionsMatrix buy_and_hold(const ReturnsPanel& panel) {
    auto p = like(panel);
    const double w = panel.assets.empty() ? 0.0 : 1.0 / static_cast<double>(panel.assets.size());
    for (double& v : p.values.flat()) v = w;
    return p;
}

void l1_normalize_rows(Matrix& values) {
    for (std::size_t r = 0; r < values.rows(); ++r) {
        auto row = values.row(r);
        double norm = 0.0;
        for (double v : row) norm += std::abs(v);
        if (norm == 0.0) continue;
        for (double& v : row) v /= norm;
    }
}

PositionsMatrix l1_normalize(PositionsMatrix positions) {
    l1_normalize_rows(positions.values);
    return positions;
}

AlphaDef parse_alpha(const std::string& name, int default_window) {
    AlphaDef def;
    def.name = name;
    def.window = default_window;
    if (name == "reversion") {
        def.kind = AlphaKind::Reversion;
        def.window = 1;
    } else if (name == "momentum") {
        def.kind = AlphaKind::Momentum;
    } else if (name == "mean_reversion") {
        def.kind = AlphaKind::MeanReversion;
    } else if (name == "buy_hold") {
        def.kind = AlphaKind::BuyHold;
    } else {
        // momentum_<w> / mean_reversion_<w>
        const auto cut = name.rfind('_');
        long long w = 0;
        if (cut != std::string::npos && csv::parse_int64(std::string_view(name).substr(cut + 1), w) && w >= 1) {
            def = parse_alpha(name.substr(0, cut), static_cast<int>(w));
            if (def.kind == AlphaKind::Momentum || def.kind == AlphaKind::MeanReversion) {
                def.name = name;
                return def;
            }
        }
        throw PreconditionError("unknown alpha '" + name +
                                "' (want reversion, momentum[_w], mean_reversion[_w], buy_hold)");
    }
    return def;
}

PositionsMatrix compute(const AlphaDef& def, const ReturnsPanel& panel) {
    switch (def.kind) {
        case AlphaKind::Reversion: return reversion(panel);
        case AlphaKind::Momentum: return momentum(panel, def.window);
        case AlphaKind::MeanReversion: return mean_reversion(panel, def.window);
        case AlphaKind::BuyHold: return buy_and_hold(panel);
        case AlphaKind::Model: break;
    }
    throw PreconditionError("alpha '" + def.name + "' needs a model checkpoint");
}

}  // namespace alphalab::alphas
