#include "alphalab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace alphalab::models {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Linear: return "linear";
        case ModelKind::MLP: return "mlp";
        case ModelKind::LSTM: return "lstm";
    }
    return {};
}

ModelKind parse_model_kind(const std::string& text) {
    if (text == "linear" || text == "linreg") return ModelKind::Linear;
    if (text == "mlp") return ModelKind::MLP;
    if (text == "lstm") return ModelKind::LSTM;
    throw ModelError(ModelError::Kind::BadConfig, "unknown model kind '" + text + "'");
}

namespace {

ModelError dim_error(const std::string& what) { return ModelError(ModelError::Kind::DimensionMismatch, what); }

void check_dims(ModelKind kind, const std::vector<std::size_t>& dims) {
    auto positive = std::all_of(dims.begin(), dims.end(), [](std::size_t d) { return d > 0; });
    switch (kind) {
        case ModelKind::Linear:
            if (dims.size() != 2 || !positive) throw dim_error("linear dims must be {in, out}");
            break;
        case ModelKind::MLP:
            if (dims.size() < 2 || !positive) throw dim_error("mlp dims must be {in, hidden..., out}");
            break;
        case ModelKind::LSTM:
            if (dims.size() != 4 || !positive) throw dim_error("lstm dims must be {step, steps, hidden, out}");
            break;
    }
}

// Views into the LSTM weight vector.
struct LstmLayout {
    std::size_t step, steps, hidden, out;
    std::size_t w_ih, w_hh, b, head_w, head_b, total;

    explicit LstmLayout(const std::vector<std::size_t>& dims)
        : step(dims[0]), steps(dims[1]), hidden(dims[2]), out(dims[3]) {
        const std::size_t g = 4 * hidden;
        w_ih = 0;
        w_hh = w_ih + g * step;
        b = w_hh + g * hidden;
        head_w = b + g;
        head_b = head_w + out * hidden;
        total = head_b + out;
    }
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::size_t ModelParams::weight_count(ModelKind kind, const std::vector<std::size_t>& dims) {
    check_dims(kind, dims);
    switch (kind) {
        case ModelKind::Linear: return dims[0] * dims[1] + dims[1];
        case ModelKind::MLP: {
            std::size_t n = 0;
            for (std::size_t l = 0; l + 1 < dims.size(); ++l) n += dims[l] * dims[l + 1] + dims[l + 1];
            return n;
        }
        case ModelKind::LSTM: return LstmLayout(dims).total;
    }
    return 0;
}

std::size_t ModelParams::input_dim() const {
    if (kind == ModelKind::LSTM) return dims.at(0) * dims.at(1);
    return dims.at(0);
}

std::size_t ModelParams::output_dim() const { return dims.back(); }

void ModelParams::validate() const {
    if (weights.size() != weight_count(kind, dims)) throw dim_error("weight count does not match layout");
    for (double w : weights) {
        if (!std::isfinite(w)) throw ModelError(ModelError::Kind::BadConfig, "non-finite weight");
    }
}

ModelParams init(ModelKind kind, std::vector<std::size_t> dims, std::uint64_t seed) {
    ModelParams p;
    p.kind = kind;
    p.dims = std::move(dims);
    p.seed = seed;
    p.weights.resize(ModelParams::weight_count(kind, p.dims));

    std::mt19937_64 rng(seed);
    // Explicit 53-bit mapping so weights do not depend on the standard
    // library's distribution implementation.
    auto fill = [&](std::size_t first, std::size_t count, double scale) {
        for (std::size_t i = 0; i < count; ++i) {
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            p.weights[first + i] = (2.0 * u - 1.0) * scale;
        }
    };
    switch (kind) {
        case ModelKind::Linear:
            fill(0, p.weights.size(), 1.0 / std::sqrt(static_cast<double>(p.dims[0])));
            break;
        case ModelKind::MLP: {
            std::size_t off = 0;
            for (std::size_t l = 0; l + 1 < p.dims.size(); ++l) {
                std::size_t n = p.dims[l] * p.dims[l + 1] + p.dims[l + 1];
                fill(off, n, 1.0 / std::sqrt(static_cast<double>(p.dims[l])));
                off += n;
            }
            break;
        }
        case ModelKind::LSTM:
            fill(0, p.weights.size(), 1.0 / std::sqrt(static_cast<double>(p.dims[2])));
            break;
    }
    return p;
}

namespace {

void check_inputs(const ModelParams& params, const Matrix& inputs) {
    if (params.weights.size() != ModelParams::weight_count(params.kind, params.dims)) {
        throw dim_error("weight count does not match layout");
    }
    if (inputs.cols() != params.input_dim()) {
        throw dim_error("input width " + std::to_string(inputs.cols()) + " != model input " +
                        std::to_string(params.input_dim()));
    }
}

// y = W x + b, W (rows x cols) at w.
void affine(const double* w, const double* b, std::span<const double> x, std::span<double> y) {
    const std::size_t cols = x.size();
    for (std::size_t r = 0; r < y.size(); ++r) {
        const double* wr = w + r * cols;
        double s = b ? b[r] : 0.0;
        for (std::size_t c = 0; c < cols; ++c) s += wr[c] * x[c];
        y[r] = s;
    }
}

// dW += dy x^T, db += dy, dx = W^T dy (when dx non-empty).
void affine_backward(const double* w, std::span<const double> x, std::span<const double> dy, double* dw, double* db,
                     std::span<double> dx) {
    const std::size_t cols = x.size();
    std::fill(dx.begin(), dx.end(), 0.0);
    for (std::size_t r = 0; r < dy.size(); ++r) {
        const double g = dy[r];
        if (db) db[r] += g;
        if (g == 0.0) continue;
        double* dwr = dw + r * cols;
        const double* wr = w + r * cols;
        for (std::size_t c = 0; c < cols; ++c) dwr[c] += g * x[c];
        if (!dx.empty()) {
            for (std::size_t c = 0; c < cols; ++c) dx[c] += g * wr[c];
        }
    }
}

// Forward state kept for backprop through time.
struct LstmTrace {
    std::vector<double> gates;  // steps x 4H, post-activation
    std::vector<double> c;      // (steps + 1) x H, c[0] = 0
    std::vector<double> h;      // (steps + 1) x H, h[0] = 0
};

void lstm_forward(const LstmLayout& L, const double* w, std::span<const double> x, LstmTrace& tr,
                  std::span<double> y) {
    const std::size_t H = L.hidden, G = 4 * H;
    tr.gates.assign(L.steps * G, 0.0);
    tr.c.assign((L.steps + 1) * H, 0.0);
    tr.h.assign((L.steps + 1) * H, 0.0);
    std::vector<double> z(G);
    for (std::size_t t = 0; t < L.steps; ++t) {
        std::span<const double> xt = x.subspan(t * L.step, L.step);
        std::span<const double> hp(tr.h.data() + t * H, H);
        affine(w + L.w_ih, w + L.b, xt, z);
        for (std::size_t r = 0; r < G; ++r) {
            const double* wr = w + L.w_hh + r * H;
            double s = 0.0;
            for (std::size_t k = 0; k < H; ++k) s += wr[k] * hp[k];
            z[r] += s;
        }
        double* a = tr.gates.data() + t * G;
        const double* cp = tr.c.data() + t * H;
        double* cn = tr.c.data() + (t + 1) * H;
        double* hn = tr.h.data() + (t + 1) * H;
        for (std::size_t k = 0; k < H; ++k) {
            a[k] = sigmoid(z[k]);
            a[H + k] = sigmoid(z[H + k]);
            a[2 * H + k] = std::tanh(z[2 * H + k]);
            a[3 * H + k] = sigmoid(z[3 * H + k]);
            cn[k] = a[H + k] * cp[k] + a[k] * a[2 * H + k];
            hn[k] = a[3 * H + k] * std::tanh(cn[k]);
        }
    }
    affine(w + L.head_w, w + L.head_b, std::span<const double>(tr.h.data() + L.steps * H, H), y);
}

void lstm_backward(const LstmLayout& L, const double* w, std::span<const double> x, const LstmTrace& tr,
                   std::span<const double> dy, double* dw) {
    const std::size_t H = L.hidden, G = 4 * H;
    std::vector<double> dh(H), dc(H, 0.0), dz(G), dh_prev(H);
    affine_backward(w + L.head_w, std::span<const double>(tr.h.data() + L.steps * H, H), dy, dw + L.head_w,
                    dw + L.head_b, dh);
    for (std::size_t t = L.steps; t-- > 0;) {
        const double* a = tr.gates.data() + t * G;
        const double* cp = tr.c.data() + t * H;
        const double* cn = tr.c.data() + (t + 1) * H;
        for (std::size_t k = 0; k < H; ++k) {
            const double i = a[k], f = a[H + k], g = a[2 * H + k], o = a[3 * H + k];
            const double tc = std::tanh(cn[k]);
            dc[k] += dh[k] * o * (1.0 - tc * tc);
            dz[k] = dc[k] * g * i * (1.0 - i);
            dz[H + k] = dc[k] * cp[k] * f * (1.0 - f);
            dz[2 * H + k] = dc[k] * i * (1.0 - g * g);
            dz[3 * H + k] = dh[k] * tc * o * (1.0 - o);
            dc[k] *= f;
        }
        affine_backward(w + L.w_ih, x.subspan(t * L.step, L.step), dz, dw + L.w_ih, dw + L.b, {});
        affine_backward(w + L.w_hh, std::span<const double>(tr.h.data() + t * H, H), dz, dw + L.w_hh, nullptr,
                        dh_prev);
        std::swap(dh, dh_prev);
    }
}

}  // namespace

Matrix forward(const ModelParams& params, const Matrix& inputs) {
    check_inputs(params, inputs);
    Matrix out(inputs.rows(), params.output_dim());
    const double* w = params.weights.data();
    switch (params.kind) {
        case ModelKind::Linear: {
            const std::size_t in = params.dims[0];
            for (std::size_t s = 0; s < inputs.rows(); ++s) affine(w, w + params.dims[1] * in, inputs.row(s), out.row(s));
            break;
        }
        case ModelKind::MLP: {
            std::vector<double> cur, next;
            for (std::size_t s = 0; s < inputs.rows(); ++s) {
                cur.assign(inputs.row(s).begin(), inputs.row(s).end());
                std::size_t off = 0;
                for (std::size_t l = 0; l + 1 < params.dims.size(); ++l) {
                    const std::size_t in = params.dims[l], o = params.dims[l + 1];
                    next.resize(o);
                    affine(w + off, w + off + o * in, cur, next);
                    off += o * in + o;
                    if (l + 2 < params.dims.size()) {
                        for (double& v : next) v = std::tanh(v);
                    }
                    std::swap(cur, next);
                }
                std::copy(cur.begin(), cur.end(), out.row(s).begin());
            }
            break;
        }
        case ModelKind::LSTM: {
            LstmLayout L(params.dims);
            LstmTrace tr;
            for (std::size_t s = 0; s < inputs.rows(); ++s) lstm_forward(L, w, inputs.row(s), tr, out.row(s));
            break;
        }
    }
    return out;
}

std::vector<double> backward(const ModelParams& params, const Matrix& inputs, const Matrix& grad_outputs) {
    check_inputs(params, inputs);
    if (grad_outputs.rows() != inputs.rows() || grad_outputs.cols() != params.output_dim()) {
        throw dim_error("grad_outputs shape does not match forward output");
    }
    std::vector<double> grad(params.weights.size(), 0.0);
    const double* w = params.weights.data();
    switch (params.kind) {
        case ModelKind::Linear: {
            const std::size_t in = params.dims[0];
            for (std::size_t s = 0; s < inputs.rows(); ++s) {
                affine_backward(w, inputs.row(s), grad_outputs.row(s), grad.data(),
                                grad.data() + params.dims[1] * in, {});
            }
            break;
        }
        case ModelKind::MLP: {
            const std::size_t layers = params.dims.size() - 1;
            std::vector<std::size_t> offsets(layers);
            for (std::size_t l = 0, off = 0; l < layers; ++l) {
                offsets[l] = off;
                off += params.dims[l] * params.dims[l + 1] + params.dims[l + 1];
            }
            std::vector<std::vector<double>> acts(layers + 1);
            std::vector<double> delta, prev_delta;
            for (std::size_t s = 0; s < inputs.rows(); ++s) {
                acts[0].assign(inputs.row(s).begin(), inputs.row(s).end());
                for (std::size_t l = 0; l < layers; ++l) {
                    const std::size_t in = params.dims[l], o = params.dims[l + 1];
                    acts[l + 1].resize(o);
                    affine(w + offsets[l], w + offsets[l] + o * in, acts[l], acts[l + 1]);
                    if (l + 1 < layers) {
                        for (double& v : acts[l + 1]) v = std::tanh(v);
                    }
                }
                delta.assign(grad_outputs.row(s).begin(), grad_outputs.row(s).end());
                for (std::size_t l = layers; l-- > 0;) {
                    const std::size_t in = params.dims[l], o = params.dims[l + 1];
                    prev_delta.resize(l > 0 ? in : 0);
                    affine_backward(w + offsets[l], acts[l], delta, grad.data() + offsets[l],
                                    grad.data() + offsets[l] + o * in, prev_delta);
                    if (l > 0) {
                        for (std::size_t k = 0; k < in; ++k) prev_delta[k] *= 1.0 - acts[l][k] * acts[l][k];
                    }
                    std::swap(delta, prev_delta);
                }
            }
            break;
        }
        case ModelKind::LSTM: {
            LstmLayout L(params.dims);
            LstmTrace tr;
            std::vector<double> y(L.out);
            for (std::size_t s = 0; s < inputs.rows(); ++s) {
                lstm_forward(L, w, inputs.row(s), tr, y);
                lstm_backward(L, w, inputs.row(s), tr, grad_outputs.row(s), grad.data());
            }
            break;
        }
    }
    return grad;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ModelError(ModelError::Kind::BadConfig, "learning_rate must be > 0");
    if (epochs < 1) throw ModelError(ModelError::Kind::BadConfig, "epochs must be >= 1");
    if (batch_window < 2) throw ModelError(ModelError::Kind::BadConfig, "batch_window must be >= 2");
    loss.validate();
    if (tvr_reg) tvr_reg->validate();
}

std::vector<std::pair<std::size_t, std::size_t>> make_batches(std::size_t rows, std::size_t window) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (window == 0) return out;
    for (std::size_t first = 0; first < rows; first += window) {
        out.emplace_back(first, std::min(window, rows - first));
    }
    if (out.size() > 1 && out.back().second < window) {
        auto tail = out.back();
        out.pop_back();
        out.back().second += tail.second;
    }
    return out;
}

namespace {

class Optimizer {
public:
    Optimizer(const OptimizerConfig& cfg, double lr, std::size_t n) : cfg_(cfg), lr_(lr) {
        if (cfg_.kind == OptimizerKind::Adam) {
            m_.assign(n, 0.0);
            v_.assign(n, 0.0);
        }
    }

    void step(std::vector<double>& w, const std::vector<double>& g) {
        if (cfg_.kind == OptimizerKind::SGD) {
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr_ * g[i];
            return;
        }
        ++t_;
        const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < w.size(); ++i) {
            m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g[i];
            v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
            w[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + cfg_.epsilon);
        }
    }

private:
    OptimizerConfig cfg_;
    double lr_;
    std::vector<double> m_, v_;
    long t_ = 0;
};

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

TrainResult train(ModelParams params, const Matrix& inputs, const BatchObjective& objective,
                  const TrainConfig& config) {
    config.validate();
    check_inputs(params, inputs);
    if (inputs.rows() < 2) throw ModelError(ModelError::Kind::BadConfig, "training needs at least 2 rows");

    auto batches = make_batches(inputs.rows(), static_cast<std::size_t>(config.batch_window));
    std::vector<Matrix> batch_inputs;
    batch_inputs.reserve(batches.size());
    for (auto [first, count] : batches) batch_inputs.push_back(inputs.slice_rows(first, count));

    std::vector<std::size_t> order(batches.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    Optimizer opt(config.optimizer, config.learning_rate, params.weights.size());

    TrainResult result;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle_batches) {
            // Fisher-Yates with an explicit draw keeps the order stable
            // across standard library implementations.
            for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
        }
        double total = 0.0;
        for (std::size_t b : order) {
            const Matrix& x = batch_inputs[b];
            Matrix out = forward(params, x);
            losses::LossEval eval = objective(batches[b].first, batches[b].second, out);
            if (!std::isfinite(eval.value) || !all_finite(eval.grad)) {
                throw ModelError(ModelError::Kind::DivergenceDetected,
                                 "loss became non-finite at epoch " + std::to_string(epoch), epoch);
            }
            if (eval.grad.size() != out.flat().size()) throw dim_error("objective gradient size mismatch");
            Matrix g(out.rows(), out.cols());
            std::copy(eval.grad.begin(), eval.grad.end(), g.flat().begin());
            auto wgrad = backward(params, x, g);
            opt.step(params.weights, wgrad);
            if (!all_finite(params.weights)) {
                throw ModelError(ModelError::Kind::DivergenceDetected,
                                 "weights became non-finite at epoch " + std::to_string(epoch), epoch);
            }
            total += eval.value;
        }
        result.loss_trace.push_back(total / static_cast<double>(batches.size()));
    }
    result.params = std::move(params);
    return result;
}

BatchObjective position_objective(const Dataset& dataset, const TrainConfig& config) {
    const Matrix* targets = &dataset.targets;
    losses::LossSpec spec = config.loss;
    std::optional<losses::TvrRegSpec> reg = config.tvr_reg;
    return [targets, spec, reg](std::size_t first, std::size_t count, const Matrix& outputs) {
        if (outputs.cols() != targets->cols()) throw dim_error("model outputs do not match target width");
        std::span<const double> r(targets->row(first).data(), count * targets->cols());
        losses::LossEval eval = losses::evaluate(spec, outputs.flat(), r);
        if (reg) eval = losses::combine(eval, losses::tvr_reg(outputs, *reg));
        return eval;
    };
}

TrainResult train(ModelParams params, const Dataset& dataset, const TrainConfig& config) {
    if (dataset.inputs.rows() != dataset.targets.rows()) throw dim_error("inputs and targets row counts differ");
    return train(std::move(params), dataset.inputs, position_objective(dataset, config), config);
}

SampleSet build_daily_samples(const ReturnsPanel& panel, int days, data::Scaling scaling) {
    if (days < 1) throw ModelError(ModelError::Kind::BadConfig, "window days must be >= 1");
    SampleSet s;
    s.assets = panel.assets;
    s.features = static_cast<std::size_t>(days);
    const std::size_t M = panel.assets.size();
    // Decision row t uses returns rows (t - days, t]; target is row t + 1.
    for (std::size_t t = s.features - 1; t + 1 < panel.dates.size(); ++t) {
        s.dates.push_back(panel.dates[t]);
        for (std::size_t a = 0; a < M; ++a) {
            auto w = data::make_daily_window(panel, a, panel.dates[t + 1], days, scaling);
            s.data.insert(s.data.end(), w.features.begin(), w.features.end());
        }
    }
    s.targets = Matrix(s.dates.size(), M);
    for (std::size_t i = 0; i < s.dates.size(); ++i) {
        std::size_t t = s.features - 1 + i;
        for (std::size_t a = 0; a < M; ++a) s.targets(i, a) = panel.values(t + 1, a);
    }
    return s;
}

SampleSet build_mixed_samples(const ReturnsPanel& panel, const std::vector<AssetCandles>& candles,
                              const data::WindowLayout& layout) {
    if (candles.size() != panel.assets.size()) throw dim_error("need candles for every panel asset");
    SampleSet s;
    s.assets = panel.assets;
    s.features = layout.feature_count();
    std::vector<double> targets;
    std::vector<double> row;
    for (std::size_t t = 0; t + 1 < panel.dates.size(); ++t) {
        const Date next = panel.dates[t + 1];
        if (next - panel.dates[t] != 1) continue;
        row.clear();
        bool ok = true;
        std::vector<double> tgt;
        for (std::size_t a = 0; a < candles.size() && ok; ++a) {
            try {
                auto w = data::make_windows(candles[a].daily, candles[a].hourly, candles[a].m15, next, layout);
                row.insert(row.end(), w.features.begin(), w.features.end());
                tgt.push_back(panel.values(t + 1, a));
            } catch (const data::DataError& e) {
                if (e.kind() != data::DataError::Kind::InsufficientHistory &&
                    e.kind() != data::DataError::Kind::FrequencyGap) {
                    throw;
                }
                ok = false;
            }
        }
        if (!ok) continue;
        s.dates.push_back(panel.dates[t]);
        s.data.insert(s.data.end(), row.begin(), row.end());
        targets.insert(targets.end(), tgt.begin(), tgt.end());
    }
    s.targets = Matrix(s.dates.size(), s.assets.size());
    std::copy(targets.begin(), targets.end(), s.targets.flat().begin());
    return s;
}

SampleSet pool_day_steps(const SampleSet& samples, const data::WindowLayout& layout) {
    if (samples.features != layout.feature_count()) throw dim_error("samples do not match window layout");
    std::vector<std::size_t> per_day;
    per_day.insert(per_day.end(), static_cast<std::size_t>(layout.daily_days), 1);
    per_day.insert(per_day.end(), static_cast<std::size_t>(layout.hourly_days), 24);
    per_day.insert(per_day.end(), static_cast<std::size_t>(layout.m15_days), 96);

    SampleSet out;
    out.dates = samples.dates;
    out.assets = samples.assets;
    out.targets = samples.targets;
    out.features = per_day.size() * kPooledStepWidth;
    out.data.reserve(samples.dates.size() * samples.assets.size() * out.features);
    for (std::size_t t = 0; t < samples.dates.size(); ++t) {
        for (std::size_t a = 0; a < samples.assets.size(); ++a) {
            auto w = samples.window(t, a);
            std::size_t off = 0;
            for (std::size_t n : per_day) {
                auto day = w.subspan(off, n);
                auto [lo, hi] = std::minmax_element(day.begin(), day.end());
                double mean = std::accumulate(day.begin(), day.end(), 0.0) / static_cast<double>(n);
                out.data.insert(out.data.end(), {mean, *lo, *hi, day.back()});
                off += n;
            }
        }
    }
    return out;
}

Dataset singular_dataset(const SampleSet& samples) {
    const std::size_t M = samples.assets.size(), F = samples.features;
    Dataset d;
    d.inputs = Matrix(samples.dates.size(), M * F);
    for (std::size_t t = 0; t < samples.dates.size(); ++t) {
        for (std::size_t a = 0; a < M; ++a) {
            auto w = samples.window(t, a);
            for (std::size_t k = 0; k < F; ++k) d.inputs(t, k * M + a) = w[k];
        }
    }
    d.targets = samples.targets;
    return d;
}

Dataset member_dataset(const SampleSet& samples, std::size_t asset) {
    if (asset >= samples.assets.size()) throw dim_error("asset index out of range");
    const std::size_t F = samples.features;
    Dataset d;
    d.inputs = Matrix(samples.dates.size(), F);
    d.targets = Matrix(samples.dates.size(), 1);
    for (std::size_t t = 0; t < samples.dates.size(); ++t) {
        auto w = samples.window(t, asset);
        std::copy(w.begin(), w.end(), d.inputs.row(t).begin());
        d.targets(t, 0) = samples.targets(t, asset);
    }
    return d;
}

std::vector<std::size_t> model_dims(const ArchitectureConfig& arch, std::size_t features, std::size_t assets,
                                    std::size_t outputs) {
    switch (arch.kind) {
        case ModelKind::Linear: return {features * assets, outputs};
        case ModelKind::MLP: {
            std::vector<std::size_t> dims{features * assets};
            dims.insert(dims.end(), arch.hidden_layers.begin(), arch.hidden_layers.end());
            dims.push_back(outputs);
            return dims;
        }
        case ModelKind::LSTM: {
            if (arch.step_width == 0 || features % arch.step_width != 0) {
                throw ModelError(ModelError::Kind::BadConfig, "lstm step width must divide the feature count");
            }
            return {arch.step_width * assets, features / arch.step_width, arch.lstm_hidden, outputs};
        }
    }
    return {};
}

TrainedModel train_position_model(const SampleSet& samples, const ArchitectureConfig& arch,
                                  const TrainConfig& config) {
    TrainedModel out;
    out.model.mode = config.mode;
    if (config.mode == ForecastMode::Singular) {
        Dataset d = singular_dataset(samples);
        auto params = init(arch.kind, model_dims(arch, samples.features, samples.assets.size(), samples.assets.size()),
                           config.seed);
        auto r = train(std::move(params), d, config);
        out.model.members.push_back(std::move(r.params));
        out.loss_traces.push_back(std::move(r.loss_trace));
        return out;
    }
    for (std::size_t a = 0; a < samples.assets.size(); ++a) {
        Dataset d = member_dataset(samples, a);
        TrainConfig member_cfg = config;
        member_cfg.seed = config.seed + a;
        auto params = init(arch.kind, model_dims(arch, samples.features, 1, 1), member_cfg.seed);
        auto r = train(std::move(params), d, member_cfg);
        out.model.members.push_back(std::move(r.params));
        out.loss_traces.push_back(std::move(r.loss_trace));
    }
    return out;
}

PositionsMatrix predict_positions(const PositionModel& model, const SampleSet& samples) {
    if (samples.dates.empty()) throw ModelError(ModelError::Kind::MissingWindow, "no feature windows to predict from");
    const std::size_t M = samples.assets.size();
    PositionsMatrix p;
    p.dates = samples.dates;
    p.assets = samples.assets;
    if (model.mode == ForecastMode::Singular) {
        if (model.members.size() != 1) throw dim_error("singular model must have exactly one member");
        p.values = forward(model.members[0], singular_dataset(samples).inputs);
        if (p.values.cols() != M) throw dim_error("singular model output width != asset count");
        return p;
    }
    if (model.members.size() != M) {
        throw ModelError(ModelError::Kind::MissingWindow, "ensemble needs one member per asset");
    }
    p.values = Matrix(samples.dates.size(), M);
    for (std::size_t a = 0; a < M; ++a) {
        Matrix out = forward(model.members[a], member_dataset(samples, a).inputs);
        for (std::size_t t = 0; t < out.rows(); ++t) p.values(t, a) = out(t, 0);
    }
    return p;
}

}  // namespace alphalab::models
