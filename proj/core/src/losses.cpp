#include "alphalab/losses.hpp"

#include <algorithm>
#include <cmath>

namespace alphalab::losses {

std::string to_string(LossKind kind) {
    switch (kind) {
        case LossKind::MSE: return "mse";
        case LossKind::PnL: return "pnl";
        case LossKind::Sharpe: return "sharpe";
        case LossKind::ModSharpe: return "modsharpe";
        case LossKind::MDD: return "mdd";
        case LossKind::LogMDD: return "logmdd";
        case LossKind::RiskAdj: return "riskadj";
    }
    return {};
}

LossKind parse_loss_kind(const std::string& text) {
    for (LossKind k : kAllLossKinds) {
        if (to_string(k) == text) return k;
    }
    throw LossError(LossError::Kind::BadSpec, "unknown loss kind '" + text + "'");
}

void LossSpec::validate() const {
    if (!(epsilon > 0.0) || !(log_epsilon > 0.0)) throw LossError(LossError::Kind::BadSpec, "loss epsilon must be > 0");
}

void TvrRegSpec::validate() const {
    if (!(strength >= 0.0)) throw LossError(LossError::Kind::BadSpec, "tvr_reg strength must be >= 0");
    if (!(bottom <= top)) throw LossError(LossError::Kind::BadSpec, "tvr_reg bottom must be <= top");
}

namespace {

void check(std::span<const double> alpha, std::span<const double> r) {
    if (alpha.size() != r.size()) throw LossError(LossError::Kind::LengthMismatch, "positions/returns length mismatch");
    if (alpha.size() < 2) throw LossError(LossError::Kind::LengthMismatch, "losses need at least 2 observations");
}

double inv_n(std::span<const double> v) { return 1.0 / static_cast<double>(v.size()); }

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

Moments pnl_moments(std::span<const double> alpha, std::span<const double> r) {
    Moments m;
    for (std::size_t i = 0; i < alpha.size(); ++i) m.mean += alpha[i] * r[i];
    m.mean *= inv_n(alpha);
    double var = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        double d = alpha[i] * r[i] - m.mean;
        var += d * d;
    }
    m.sd = std::sqrt(var * inv_n(alpha));
    return m;
}

// S = mean / (sd + eps) and dS/dalpha.
LossEval sharpe_ratio_eval(std::span<const double> alpha, std::span<const double> r, double eps) {
    const double n = static_cast<double>(alpha.size());
    Moments m = pnl_moments(alpha, r);
    const double denom = m.sd + eps;
    LossEval out;
    out.value = m.mean / denom;
    out.grad.resize(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        double p = alpha[i] * r[i];
        double dmean = 1.0 / n;
        double dsd = m.sd > 0.0 ? (p - m.mean) / (n * m.sd) : 0.0;
        double dp = (dmean * denom - m.mean * dsd) / (denom * denom);
        out.grad[i] = dp * r[i];
    }
    return out;
}

}  // namespace

LossEval mse_loss(std::span<const double> alpha, std::span<const double> r) {
    check(alpha, r);
    LossEval out;
    out.grad.resize(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        double d = alpha[i] - r[i];
        out.value += d * d;
        out.grad[i] = 2.0 * d * inv_n(alpha);
    }
    out.value *= inv_n(alpha);
    return out;
}

LossEval pnl_loss(std::span<const double> alpha, std::span<const double> r) {
    check(alpha, r);
    LossEval out;
    out.grad.resize(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        out.value -= alpha[i] * r[i];
        out.grad[i] = -r[i] / static_cast<double>(alpha.size());
    }
    out.value *= inv_n(alpha);
    return out;
}

LossEval sharpe_loss(std::span<const double> alpha, std::span<const double> r, double epsilon) {
    check(alpha, r);
    LossEval s = sharpe_ratio_eval(alpha, r, epsilon);
    s.value = -s.value;
    for (double& g : s.grad) g = -g;
    return s;
}

// loss = ln(mean((alpha - r)^2) + log_eps) * S, the negated maximization
// target -ln(mse) * S.
LossEval modsharpe_loss(std::span<const double> alpha, std::span<const double> r, double epsilon,
                        double log_epsilon) {
    check(alpha, r);
    LossEval mse = mse_loss(alpha, r);
    if (mse.value == 0.0) {
        throw LossError(LossError::Kind::DegenerateInput, "modsharpe_loss: positions equal returns exactly");
    }
    LossEval s = sharpe_ratio_eval(alpha, r, epsilon);
    const double q = mse.value + log_epsilon;
    const double log_q = std::log(q);
    LossEval out;
    out.value = log_q * s.value;
    out.grad.resize(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        out.grad[i] = s.value * mse.grad[i] / q + log_q * s.grad[i];
    }
    return out;
}

LossEval mdd_loss(std::span<const double> alpha, std::span<const double> r) {
    check(alpha, r);
    // peak index -1 is the zero balance before the first observation.
    double cum = 0.0, peak_value = 0.0, worst = 0.0;
    long peak = -1, best_peak = -1, best_trough = -1;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        cum += alpha[i] * r[i];
        if (cum > peak_value) {
            peak_value = cum;
            peak = static_cast<long>(i);
        }
        double dd = cum - peak_value;
        if (dd < worst) {
            worst = dd;
            best_trough = static_cast<long>(i);
            best_peak = peak;
        }
    }
    LossEval out;
    out.value = -worst;
    out.grad.assign(alpha.size(), 0.0);
    if (best_trough >= 0) {
        for (long i = best_peak + 1; i <= best_trough; ++i) out.grad[static_cast<std::size_t>(i)] = -r[static_cast<std::size_t>(i)];
    }
    return out;
}

LossEval logmdd_loss(std::span<const double> alpha, std::span<const double> r) {
    LossEval m = mdd_loss(alpha, r);
    const double scale = 1.0 / (1.0 + m.value);
    m.value = std::log1p(m.value);
    for (double& g : m.grad) g *= scale;
    return m;
}

LossEval riskadj_loss(std::span<const double> alpha, std::span<const double> r, double lambda, double gamma) {
    LossEval out = pnl_loss(alpha, r);
    if (lambda != 0.0) {
        LossEval dd = mdd_loss(alpha, r);
        out.value += lambda * dd.value;
        for (std::size_t i = 0; i < out.grad.size(); ++i) out.grad[i] += lambda * dd.grad[i];
    }
    if (gamma != 0.0) {
        LossEval sq = mse_loss(alpha, r);
        out.value += gamma * sq.value;
        for (std::size_t i = 0; i < out.grad.size(); ++i) out.grad[i] += gamma * sq.grad[i];
    }
    return out;
}

LossEval evaluate(const LossSpec& spec, std::span<const double> alpha, std::span<const double> r) {
    switch (spec.kind) {
        case LossKind::MSE: return mse_loss(alpha, r);
        case LossKind::PnL: return pnl_loss(alpha, r);
        case LossKind::Sharpe: return sharpe_loss(alpha, r, spec.epsilon);
        case LossKind::ModSharpe: return modsharpe_loss(alpha, r, spec.epsilon, spec.log_epsilon);
        case LossKind::MDD: return mdd_loss(alpha, r);
        case LossKind::LogMDD: return logmdd_loss(alpha, r);
        case LossKind::RiskAdj: return riskadj_loss(alpha, r, spec.riskadj_lambda, spec.riskadj_gamma);
    }
    throw LossError(LossError::Kind::BadSpec, "unhandled loss kind");
}

namespace {
double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
}  // namespace

LossEval tvr_reg(const Matrix& window, const TvrRegSpec& spec) {
    if (window.rows() < 2) throw LossError(LossError::Kind::InsufficientRows, "tvr_reg: window needs >= 2 rows");
    const std::size_t days = window.rows(), assets = window.cols();
    const double steps = static_cast<double>(days - 1);

    double tvr = 0.0;
    for (std::size_t d = 1; d < days; ++d) {
        for (std::size_t a = 0; a < assets; ++a) tvr += std::abs(window(d, a) - window(d - 1, a));
    }
    tvr /= steps;

    const double over = tvr - spec.top, under = spec.bottom - tvr;
    LossEval out;
    out.value = spec.strength * (std::max(spec.hinge_floor, over) + std::max(spec.hinge_floor, under));
    out.grad.assign(days * assets, 0.0);
    const double dvalue_dtvr =
        spec.strength * ((over > spec.hinge_floor ? 1.0 : 0.0) - (under > spec.hinge_floor ? 1.0 : 0.0));
    if (dvalue_dtvr == 0.0) return out;
    for (std::size_t d = 1; d < days; ++d) {
        for (std::size_t a = 0; a < assets; ++a) {
            double s = sign(window(d, a) - window(d - 1, a)) * dvalue_dtvr / steps;
            out.grad[d * assets + a] += s;
            out.grad[(d - 1) * assets + a] -= s;
        }
    }
    return out;
}

LossEval combine(const LossEval& loss, const LossEval& reg) {
    if (loss.grad.size() != reg.grad.size()) throw LossError(LossError::Kind::LengthMismatch, "combine: gradient sizes differ");
    LossEval out = loss;
    out.value += reg.value;
    for (std::size_t i = 0; i < out.grad.size(); ++i) out.grad[i] += reg.grad[i];
    return out;
}

}  // namespace alphalab::losses
