#pragma once

#include <string>
#include <vector>

#include "alphalab/error.hpp"
#include "alphalab/models.hpp"
#include "alphalab/panel.hpp"

namespace alphalab::portfolio {

class PortfolioError : public Error {
public:
    enum class Kind { StackMismatch, WeightShapeMismatch, BadScheme };
    PortfolioError(Kind kind, std::string what) : Error(std::move(what)), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct AlphaStack {
    std::vector<std::string> names;
    std::vector<PositionsMatrix> alphas;

    std::size_t size() const { return alphas.size(); }
    // L >= 2; every matrix shares dates and asset order.
    void validate() const;
};

// Manifest JSON: {"alphas": [{"name": "...", "file": "positions.csv"}, ...]},
// file paths relative to the manifest's directory.
AlphaStack load_stack(const std::string& manifest_path);
void save_stack(const AlphaStack& stack, const std::string& dir);

struct Combination {
    PositionsMatrix positions;
    std::vector<Date> cancelled;  // dates whose combined row summed to zero
};

// mean_l alpha_l, L1-normalized per day.
Combination combine_equal(const AlphaStack& stack, bool normalize = true);
// weights: dates x L.
Combination combine_single(const AlphaStack& stack, const Matrix& weights, bool normalize = true);
// weights: dates x (L * M), cell (l, a) at column l * M + a.
Combination combine_pointwise(const AlphaStack& stack, const Matrix& weights, bool normalize = true);

enum class SchemeKind { EqualWeighted, SingleWeighted, PointWiseWeighted };

std::string to_string(SchemeKind kind);
SchemeKind parse_scheme(const std::string& text);

struct WeightScheme {
    SchemeKind kind = SchemeKind::EqualWeighted;
    int lookback = 20;
};

// Inputs for the weight model: on decision date t, the trailing `lookback`
// days of each alpha's realized pnl (step-major, day k of alpha l at
// k * L + l). Only dates with full history and a next panel date appear.
struct CombinerData {
    std::vector<Date> dates;
    Matrix inputs;
    std::vector<Matrix> alpha_rows;  // per alpha: dates x M positions
    Matrix next_returns;             // dates x M
};

CombinerData build_combiner_data(const AlphaStack& stack, const ReturnsPanel& panel, int lookback);

struct Combiner {
    WeightScheme scheme;
    models::ModelParams params;
    std::vector<double> loss_trace;
};

// Trains a weight model against config.loss (and tvr_reg) applied to the
// unnormalized combined portfolio.
Combiner train_combiner(const AlphaStack& stack, const ReturnsPanel& panel, const WeightScheme& scheme,
                        const models::ArchitectureConfig& arch, const models::TrainConfig& config);

// Combined positions over the stack's dates; dates without a full
// lookback window get zero rows.
Combination apply_combiner(const Combiner& combiner, const AlphaStack& stack, const ReturnsPanel& panel,
                           bool normalize = true);

}  // namespace alphalab::portfolio
