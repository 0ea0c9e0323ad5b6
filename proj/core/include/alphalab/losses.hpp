#pragma once

#include <span>
#include <string>
#include <vector>

#include "alphalab/error.hpp"
#include "alphalab/matrix.hpp"

namespace alphalab::losses {

class LossError : public Error {
public:
    enum class Kind { LengthMismatch, DegenerateInput, InsufficientRows, BadSpec };
    LossError(Kind kind, std::string what) : Error(std::move(what)), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

enum class LossKind { MSE, PnL, Sharpe, ModSharpe, MDD, LogMDD, RiskAdj };

inline constexpr LossKind kAllLossKinds[] = {LossKind::MSE,       LossKind::PnL, LossKind::Sharpe,
                                             LossKind::ModSharpe, LossKind::MDD, LossKind::LogMDD,
                                             LossKind::RiskAdj};

std::string to_string(LossKind kind);
LossKind parse_loss_kind(const std::string& text);

struct LossSpec {
    LossKind kind = LossKind::MSE;
    double epsilon = 1e-8;      // added to std in the Sharpe denominators
    double log_epsilon = 1e-12; // added inside ModSharpe's logarithm
    double riskadj_lambda = 0.3;
    double riskadj_gamma = 0.01;

    void validate() const;
};

// Hinge band on mean daily turnover: strength * (max(floor, tvr - top) +
// max(floor, bottom - tvr)). floor = 1 is the formula as printed; the
// default floor = 0 is the conventional hinge.
struct TvrRegSpec {
    double strength = 1.0;
    double top = 1.0;
    double bottom = 0.3;
    double hinge_floor = 0.0;

    void validate() const;
};

// Loss value plus gradient with respect to the positions it was given.
struct LossEval {
    double value = 0.0;
    std::vector<double> grad;
};

// Every loss is minimized. alpha and r have equal length >= 2; the pnl
// vector is their element-wise product.
LossEval mse_loss(std::span<const double> alpha, std::span<const double> r);
LossEval pnl_loss(std::span<const double> alpha, std::span<const double> r);
LossEval sharpe_loss(std::span<const double> alpha, std::span<const double> r, double epsilon = 1e-8);
LossEval modsharpe_loss(std::span<const double> alpha, std::span<const double> r, double epsilon = 1e-8,
                        double log_epsilon = 1e-12);
// Drawdown magnitude of cumsum(pnl) (>= 0), with the subgradient of the
// realized peak/trough pair. Ties: earliest trough, then earliest peak.
LossEval mdd_loss(std::span<const double> alpha, std::span<const double> r);
LossEval logmdd_loss(std::span<const double> alpha, std::span<const double> r);
LossEval riskadj_loss(std::span<const double> alpha, std::span<const double> r, double lambda = 0.3,
                      double gamma = 0.01);

LossEval evaluate(const LossSpec& spec, std::span<const double> alpha, std::span<const double> r);

// Penalty on a (days x assets) window of positions; grad is laid out
// row-major like the window.
LossEval tvr_reg(const Matrix& window, const TvrRegSpec& spec);

LossEval combine(const LossEval& loss, const LossEval& reg);

}  // namespace alphalab::losses
