#pragma once

#include <string>

#include "alphalab/panel.hpp"

namespace alphalab::alphas {

// Rows are decision dates (see PositionsMatrix); the reversion signal for
// the day a position is held, -r(d-1), is therefore stored on row d-1.

// row t = -r(t)
PositionsMatrix reversion(const ReturnsPanel& panel);
// row t = mean of r over rows (t - w, t]; zero for the first w - 1 rows.
PositionsMatrix momentum(const ReturnsPanel& panel, int window);
PositionsMatrix mean_reversion(const ReturnsPanel& panel, int window);
// 1/M everywhere.
PositionsMatrix buy_and_hold(const ReturnsPanel& panel);

// Each row divided by its L1 norm; zero rows stay zero.
PositionsMatrix l1_normalize(PositionsMatrix positions);
void l1_normalize_rows(Matrix& values);

enum class AlphaKind { Reversion, Momentum, MeanReversion, BuyHold, Model };

struct AlphaDef {
    std::string name;
    AlphaKind kind = AlphaKind::Reversion;
    int window = 1;
    std::string checkpoint;  // Model only
};

AlphaDef parse_alpha(const std::string& name, int default_window);
// Heuristic kinds only; Model alphas go through models::predict_positions.
PositionsMatrix compute(const AlphaDef& def, const ReturnsPanel& panel);

}  // namespace alphalab::alphas
