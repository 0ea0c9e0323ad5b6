#include "alphalab/portfolio.hpp"

#include <filesystem>

#include "json.hpp"

#include "alphalab/alphas.hpp"
#include "alphalab/csv.hpp"
#include "alphalab/metrics.hpp"

namespace alphalab::portfolio {

namespace fs = std::filesystem;

void AlphaStack::validate() const {
    if (alphas.size() < 2) throw PortfolioError(PortfolioError::Kind::StackMismatch, "alpha stack needs >= 2 alphas");
    if (names.size() != alphas.size()) throw PortfolioError(PortfolioError::Kind::StackMismatch, "one name per alpha");
    for (const auto& a : alphas) {
        a.validate();
        if (a.dates != alphas[0].dates || a.assets != alphas[0].assets) {
            throw PortfolioError(PortfolioError::Kind::StackMismatch, "alphas must share dates and asset order");
        }
    }
}

AlphaStack load_stack(const std::string& manifest_path) {
    auto doc = nlohmann::json::parse(csv::read_file(manifest_path));
    const fs::path base = fs::path(manifest_path).parent_path();
    AlphaStack s;
    for (const auto& entry : doc.at("alphas")) {
        s.names.push_back(entry.at("name").get<std::string>());
        s.alphas.push_back(read_positions_csv((base / entry.at("file").get<std::string>()).string()));
    }
    s.validate();
    return s;
}

void save_stack(const AlphaStack& stack, const std::string& dir) {
    fs::create_directories(dir);
    nlohmann::json doc;
    doc["alphas"] = nlohmann::json::array();
    for (std::size_t l = 0; l < stack.size(); ++l) {
        std::string file = stack.names[l] + ".csv";
        write_positions_csv(stack.alphas[l], (fs::path(dir) / file).string());
        doc["alphas"].push_back({{"name", stack.names[l]}, {"file", file}});
    }
    csv::write_file((fs::path(dir) / "manifest.json").string(), doc.dump(2) + "\n");
}

namespace {

// `live[t]` marks rows where some weighted alpha entry was non-zero, so an
// all-zero result there is a genuine cancellation rather than a warm-up row.
Combination finish(const AlphaStack& stack, Matrix values, const std::vector<char>& live, bool normalize) {
    Combination c;
    for (std::size_t t = 0; t < values.rows(); ++t) {
        bool zero = true;
        for (double v : values.row(t)) zero = zero && v == 0.0;
        if (zero && live[t]) c.cancelled.push_back(stack.alphas[0].dates[t]);
    }
    if (normalize) alphas::l1_normalize_rows(values);
    c.positions = PositionsMatrix{stack.alphas[0].dates, stack.alphas[0].assets, std::move(values)};
    return c;
}

}  // namespace

Combination combine_single(const AlphaStack& stack, const Matrix& weights, bool normalize) {
    stack.validate();
    const auto& ref = stack.alphas[0];
    const std::size_t T = ref.dates.size(), M = ref.assets.size(), L = stack.size();
    if (weights.rows() != T || weights.cols() != L) {
        throw PortfolioError(PortfolioError::Kind::WeightShapeMismatch, "single weights must be dates x L");
    }
    Matrix out(T, M);
    std::vector<char> live(T, 0);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t l = 0; l < L; ++l) {
            const double w = weights(t, l);
            auto row = stack.alphas[l].values.row(t);
            for (std::size_t a = 0; a < M; ++a) {
                out(t, a) += w * row[a];
                live[t] |= w * row[a] != 0.0;
            }
        }
    }
    return finish(stack, std::move(out), live, normalize);
}

Combination combine_equal(const AlphaStack& stack, bool normalize) {
    stack.validate();
    Matrix w(stack.alphas[0].dates.size(), stack.size(), 1.0 / static_cast<double>(stack.size()));
    return combine_single(stack, w, normalize);
}

Combination combine_pointwise(const AlphaStack& stack, const Matrix& weights, bool normalize) {
    stack.validate();
    const auto& ref = stack.alphas[0];
    const std::size_t T = ref.dates.size(), M = ref.assets.size(), L = stack.size();
    if (weights.rows() != T || weights.cols() != L * M) {
        throw PortfolioError(PortfolioError::Kind::WeightShapeMismatch, "point-wise weights must be dates x (L*M)");
    }
    Matrix out(T, M);
    std::vector<char> live(T, 0);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t l = 0; l < L; ++l) {
            auto row = stack.alphas[l].values.row(t);
            for (std::size_t a = 0; a < M; ++a) {
                const double term = weights(t, l * M + a) * row[a];
                out(t, a) += term;
                live[t] |= term != 0.0;
            }
        }
    }
    return finish(stack, std::move(out), live, normalize);
}

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::EqualWeighted: return "equal";
        case SchemeKind::SingleWeighted: return "single";
        case SchemeKind::PointWiseWeighted: return "pointwise";
    }
    return {};
}

SchemeKind parse_scheme(const std::string& text) {
    if (text == "equal") return SchemeKind::EqualWeighted;
    if (text == "single") return SchemeKind::SingleWeighted;
    if (text == "pointwise") return SchemeKind::PointWiseWeighted;
    throw PortfolioError(PortfolioError::Kind::BadScheme, "unknown weight scheme '" + text + "'");
}

CombinerData build_combiner_data(const AlphaStack& stack, const ReturnsPanel& panel, int lookback) {
    stack.validate();
    if (lookback < 2) throw PortfolioError(PortfolioError::Kind::BadScheme, "lookback must be >= 2");
    const std::size_t L = stack.size(), M = panel.assets.size(), K = static_cast<std::size_t>(lookback);

    // Realized pnl per alpha indexed by panel row (row 0 has none).
    std::vector<std::vector<double>> pnl(L, std::vector<double>(panel.dates.size(), 0.0));
    for (std::size_t l = 0; l < L; ++l) {
        auto s = metrics::realized_pnl(stack.alphas[l], panel, 1);
        for (std::size_t i = 0; i < s.values.size(); ++i) pnl[l][i + 1] = s.values[i];
    }

    CombinerData d;
    std::vector<double> inputs, next;
    std::vector<std::vector<double>> rows(L);
    const auto& dates = stack.alphas[0].dates;
    for (std::size_t t = 0; t < dates.size(); ++t) {
        auto pi = panel.index_of(dates[t]);
        if (!pi || *pi < K || *pi + 1 >= panel.dates.size()) continue;
        d.dates.push_back(dates[t]);
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t l = 0; l < L; ++l) inputs.push_back(pnl[l][*pi + 1 - K + k]);
        }
        for (std::size_t l = 0; l < L; ++l) {
            auto r = stack.alphas[l].values.row(t);
            rows[l].insert(rows[l].end(), r.begin(), r.end());
        }
        auto nr = panel.values.row(*pi + 1);
        next.insert(next.end(), nr.begin(), nr.end());
    }
    const std::size_t T = d.dates.size();
    d.inputs = Matrix(T, K * L);
    std::copy(inputs.begin(), inputs.end(), d.inputs.flat().begin());
    d.next_returns = Matrix(T, M);
    std::copy(next.begin(), next.end(), d.next_returns.flat().begin());
    for (std::size_t l = 0; l < L; ++l) {
        Matrix m(T, M);
        std::copy(rows[l].begin(), rows[l].end(), m.flat().begin());
        d.alpha_rows.push_back(std::move(m));
    }
    return d;
}

namespace {

std::size_t weight_width(SchemeKind kind, std::size_t L, std::size_t M) {
    return kind == SchemeKind::PointWiseWeighted ? L * M : L;
}

// Unnormalized combined positions for rows [first, first + count).
Matrix combine_rows(const CombinerData& d, SchemeKind kind, std::size_t first, const Matrix& w) {
    const std::size_t L = d.alpha_rows.size(), M = d.next_returns.cols();
    Matrix out(w.rows(), M);
    for (std::size_t i = 0; i < w.rows(); ++i) {
        for (std::size_t l = 0; l < L; ++l) {
            auto a = d.alpha_rows[l].row(first + i);
            for (std::size_t m = 0; m < M; ++m) {
                double wt = kind == SchemeKind::PointWiseWeighted ? w(i, l * M + m) : w(i, l);
                out(i, m) += wt * a[m];
            }
        }
    }
    return out;
}

}  // namespace

Combiner train_combiner(const AlphaStack& stack, const ReturnsPanel& panel, const WeightScheme& scheme,
                        const models::ArchitectureConfig& arch, const models::TrainConfig& config) {
    if (scheme.kind == SchemeKind::EqualWeighted) {
        throw PortfolioError(PortfolioError::Kind::BadScheme, "equal weighting has nothing to train");
    }
    CombinerData d = build_combiner_data(stack, panel, scheme.lookback);
    const std::size_t L = stack.size(), M = panel.assets.size();
    if (d.dates.size() < 2) throw PortfolioError(PortfolioError::Kind::BadScheme, "too few dates to train a combiner");

    models::ArchitectureConfig a = arch;
    a.step_width = 1;
    auto dims = models::model_dims(a, static_cast<std::size_t>(scheme.lookback), L, weight_width(scheme.kind, L, M));
    auto params = models::init(arch.kind, dims, config.seed);

    const losses::LossSpec spec = config.loss;
    const auto reg = config.tvr_reg;
    const SchemeKind kind = scheme.kind;
    models::BatchObjective objective = [&d, spec, reg, kind, L, M](std::size_t first, std::size_t count,
                                                                    const Matrix& w) {
        Matrix combined = combine_rows(d, kind, first, w);
        std::span<const double> r(d.next_returns.row(first).data(), count * M);
        losses::LossEval eval = losses::evaluate(spec, combined.flat(), r);
        if (reg) eval = losses::combine(eval, losses::tvr_reg(combined, *reg));
        losses::LossEval out;
        out.value = eval.value;
        out.grad.assign(w.rows() * w.cols(), 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t l = 0; l < L; ++l) {
                auto alpha = d.alpha_rows[l].row(first + i);
                for (std::size_t m = 0; m < M; ++m) {
                    double g = eval.grad[i * M + m] * alpha[m];
                    if (kind == SchemeKind::PointWiseWeighted) {
                        out.grad[i * w.cols() + l * M + m] = g;
                    } else {
                        out.grad[i * w.cols() + l] += g;
                    }
                }
            }
        }
        return out;
    };
    auto result = models::train(std::move(params), d.inputs, objective, config);
    return Combiner{scheme, std::move(result.params), std::move(result.loss_trace)};
}

Combination apply_combiner(const Combiner& combiner, const AlphaStack& stack, const ReturnsPanel& panel,
                           bool normalize) {
    CombinerData d = build_combiner_data(stack, panel, combiner.scheme.lookback);
    const auto& ref = stack.alphas[0];
    const std::size_t L = stack.size(), M = ref.assets.size();
    Matrix weights(ref.dates.size(), weight_width(combiner.scheme.kind, L, M), 0.0);
    if (!d.dates.empty()) {
        Matrix w = models::forward(combiner.params, d.inputs);
        if (w.cols() != weights.cols()) {
            throw PortfolioError(PortfolioError::Kind::WeightShapeMismatch, "combiner output width does not match scheme");
        }
        for (std::size_t i = 0; i < d.dates.size(); ++i) {
            std::size_t t = *ref.index_of(d.dates[i]);
            auto src = w.row(i);
            std::copy(src.begin(), src.end(), weights.row(t).begin());
        }
    }
    return combiner.scheme.kind == SchemeKind::PointWiseWeighted ? combine_pointwise(stack, weights, normalize)
                                                                 : combine_single(stack, weights, normalize);
}

}  // namespace alphalab::portfolio
