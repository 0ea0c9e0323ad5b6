#include "doctest.h"
#include "support.hpp"

#include "alphalab/losses.hpp"
#include "alphalab/metrics.hpp"

using namespace alphalab;
using namespace alphalab::losses;

namespace {

LossError::Kind loss_error(const std::function<void()>& f) {
    try {
        f();
    } catch (const LossError& e) {
        return e.kind();
    }
    FAIL("expected LossError");
    return LossError::Kind::BadSpec;
}

std::vector<double> v(std::initializer_list<double> x) { return x; }

}  // namespace

TEST_CASE("mse_loss") {
    auto r = v({0.1, -0.2, 0.3});
    auto same = mse_loss(r, r);
    CHECK(same.value == 0.0);
    CHECK(same.grad == std::vector<double>(3, 0.0));
    auto e = mse_loss(v({1, 0}), v({0, 0}));
    CHECK(e.value == 0.5);
    CHECK(e.grad == v({1, 0}));
}

TEST_CASE("pnl_loss") {
    auto e = pnl_loss(v({1, 2}), v({0.1, -0.05}));
    CHECK(e.value == doctest::Approx(0.0).epsilon(1e-15));
    auto z = pnl_loss(v({0.3, -1.2}), v({0, 0}));
    CHECK(z.value == 0.0);
    CHECK(z.grad == v({0, 0}));
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + rng() % 30;
        auto a = testing::normal_vector(rng, n), r = testing::normal_vector(rng, n);
        auto g = pnl_loss(a, r).grad;
        for (std::size_t i = 0; i < n; ++i) CHECK(g[i] == -r[i] / static_cast<double>(n));
    }
    CHECK(loss_error([] { pnl_loss(v({1, 2, 3}), v({1, 2})); }) == LossError::Kind::LengthMismatch);
}

TEST_CASE("sharpe_loss") {
    // pnl = [x, -x]
    CHECK(sharpe_loss(v({2, 2}), v({0.1, -0.1})).value == doctest::Approx(0.0).epsilon(1e-15));
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + rng() % 30;
        auto a = testing::normal_vector(rng, n), r = testing::normal_vector(rng, n, 0.02);
        const double base = sharpe_loss(a, r).value;
        for (double c : {0.01, 0.5, 3.0, 100.0}) {
            std::vector<double> ca(a);
            for (auto& x : ca) x *= c;
            // exact without epsilon, within epsilon / sd with it
            CHECK(sharpe_loss(ca, r, 1e-300).value == doctest::Approx(sharpe_loss(a, r, 1e-300).value).epsilon(1e-12));
            CHECK(sharpe_loss(ca, r).value == doctest::Approx(base).epsilon(1e-3));
        }
        // matches the metric up to the sqrt(N) factor and sign
        CHECK(-base * std::sqrt(static_cast<double>(n)) ==
              doctest::Approx(metrics::sharpe_ratio([&] {
                  std::vector<double> p(n);
                  for (std::size_t i = 0; i < n; ++i) p[i] = a[i] * r[i];
                  return p;
              }())).epsilon(1e-4));
    }
    CHECK(loss_error([] { sharpe_loss(v({1}), v({1})); }) == LossError::Kind::LengthMismatch);
}

TEST_CASE("modsharpe_loss") {
    // mean-zero pnl kills the product
    CHECK(modsharpe_loss(v({2, 2}), v({0.1, -0.1})).value == doctest::Approx(0.0).epsilon(1e-15));
    auto r = v({0.1, -0.2});
    CHECK(loss_error([&] { modsharpe_loss(r, r); }) == LossError::Kind::DegenerateInput);
    CHECK(loss_error([] { modsharpe_loss(v({1, 2}), v({1})); }) == LossError::Kind::LengthMismatch);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 4 + rng() % 30;
        auto a = testing::normal_vector(rng, n), r2 = testing::normal_vector(rng, n, 0.02);
        std::vector<double> big(a);
        for (auto& x : big) x *= 10.0;
        if (std::abs(sharpe_loss(a, r2).value) < 1e-6) continue;
        CHECK(std::abs(modsharpe_loss(big, r2).value - modsharpe_loss(a, r2).value) > 0.0);
    }
}

TEST_CASE("mdd_loss and logmdd_loss") {
    auto up = mdd_loss(v({1, 1, 1}), v({0.1, 0.2, 0.3}));
    CHECK(up.value == 0.0);
    CHECK(up.grad == v({0, 0, 0}));
    auto e = mdd_loss(v({1, 1, 1}), v({1, -2, 1}));
    CHECK(e.value == 2.0);
    CHECK(e.grad == v({0, 2, 0}));
    // starting with a loss: peak is the opening zero balance
    auto first = mdd_loss(v({1, 1}), v({-1, 0.5}));
    CHECK(first.value == 1.0);
    CHECK(first.grad == v({1, 0}));
    // tie: two equal troughs, the earliest wins
    auto tie = mdd_loss(v({1, 1, 1, 1}), v({1, -1, 1, -1}));
    CHECK(tie.value == 1.0);
    CHECK(tie.grad == v({0, 1, 0, 0}));

    CHECK(logmdd_loss(v({1, 1, 1}), v({0.1, 0.2, 0.3})).value == 0.0);
    auto l = logmdd_loss(v({1, 1, 1}), v({1, -2, 1}));
    CHECK(l.value == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(l.grad[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    std::mt19937_64 rng(4);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + rng() % 40;
        auto a = testing::normal_vector(rng, n), r = testing::normal_vector(rng, n);
        auto m = mdd_loss(a, r);
        CHECK(m.value >= 0.0);
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = a[i] * r[i];
        CHECK(m.value == doctest::Approx(-metrics::max_drawdown(p)).epsilon(1e-12));
    }
}

TEST_CASE("riskadj_loss") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + rng() % 30;
        auto a = testing::normal_vector(rng, n), r = testing::normal_vector(rng, n);
        auto ra = riskadj_loss(a, r, 0.0, 0.0);
        auto p = pnl_loss(a, r);
        CHECK(ra.value == p.value);
        CHECK(ra.grad == p.grad);
    }
    // alpha = r: pnl = r^2 >= 0 so no drawdown and no squared error
    auto r = v({0.1, -0.3, 0.2});
    CHECK(riskadj_loss(r, r).value == doctest::Approx(-(0.01 + 0.09 + 0.04) / 3).epsilon(1e-14));
}

TEST_CASE("tvr_reg") {
    auto window = [](std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m(rows.size(), rows.begin()->size());
        std::size_t i = 0;
        for (auto row : rows) {
            std::size_t j = 0;
            for (double x : row) m(i, j++) = x;
            ++i;
        }
        return m;
    };
    TvrRegSpec spec;
    // mean turnover 0.5
    CHECK(tvr_reg(window({{0.5, 0.0}, {0.25, 0.25}}), spec).value == 0.0);
    // mean turnover 1.5
    auto w15 = window({{1.0, 0.0}, {0.25, -0.75}});
    CHECK(tvr_reg(w15, spec).value == doctest::Approx(0.5).epsilon(1e-14));
    TvrRegSpec literal;
    literal.hinge_floor = 1.0;
    CHECK(tvr_reg(w15, literal).value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(loss_error([&] { tvr_reg(Matrix(1, 3), spec); }) == LossError::Kind::InsufficientRows);

    // zero inside [bb, tb], strictly increasing with the distance outside
    double prev_below = -1, prev_above = -1;
    for (int k = 0; k <= 30; ++k) {
        const double tvr = 0.05 * k;
        auto m = window({{0.0}, {tvr}});
        const double val = tvr_reg(m, spec).value;
        if (tvr >= 0.3 - 1e-12 && tvr <= 1.0 + 1e-12) {
            CHECK(val == doctest::Approx(0.0).epsilon(1e-12));
        } else if (tvr < 0.3) {
            if (prev_below >= 0) CHECK(val < prev_below);
            prev_below = val;
        } else {
            if (prev_above >= 0) CHECK(val > prev_above);
            prev_above = val;
        }
    }
}

TEST_CASE("combine") {
    LossEval a{1.5, {1, 2}}, zero{0.0, {0, 0}}, b{-0.5, {0.5, -1}};
    auto same = combine(a, zero);
    CHECK(same.value == 1.5);
    CHECK(same.grad == a.grad);
    auto sum = combine(a, b);
    CHECK(sum.value == 1.0);
    CHECK(sum.grad == v({1.5, 1}));
    CHECK(loss_error([&] { combine(a, LossEval{0, {1}}); }) == LossError::Kind::LengthMismatch);
}

TEST_CASE("gradients match central differences for every loss kind") {
    std::mt19937_64 rng(6);
    for (LossKind kind : kAllLossKinds) {
        LossSpec spec;
        spec.kind = kind;
        int checked = 0, kinks = 0;
        for (int t = 0; checked < 100; ++t) {
            REQUIRE(t < 1000);
            const std::size_t n = 2 + rng() % 60;
            auto a = testing::normal_vector(rng, n), r = testing::normal_vector(rng, n, 0.5);
            if (kind == LossKind::Sharpe || kind == LossKind::ModSharpe) {
                std::vector<double> p(n);
                for (std::size_t i = 0; i < n; ++i) p[i] = a[i] * r[i];
                double mean = metrics::total_pnl(p) / n, var = 0;
                for (double x : p) var += (x - mean) * (x - mean);
                if (std::sqrt(var / n) <= 1e-3) continue;
            }
            auto c = testing::check_gradient([&](const std::vector<double>& x) { return evaluate(spec, x, r).value; },
                                             [&](const std::vector<double>& x) { return evaluate(spec, x, r).grad; }, a);
            if (c.kink) {
                ++kinks;
                continue;
            }
            CHECK_MESSAGE(c.rel < 1e-4, to_string(kind) << " n=" << n);
            ++checked;
        }
        CHECK(kinks < 10);
    }
}

TEST_CASE("tvr_reg and combined gradients match central differences") {
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int t = 0; checked < 100; ++t) {
        REQUIRE(t < 1000);
        const std::size_t days = 2 + rng() % 10, assets = 1 + rng() % 6;
        TvrRegSpec spec;
        spec.hinge_floor = (t % 2) ? 0.0 : 1.0;
        auto x = testing::normal_vector(rng, days * assets, 0.1 + 0.3 * (t % 4));
        auto r = testing::normal_vector(rng, days * assets, 0.5);
        auto as_window = [&](const std::vector<double>& v) {
            Matrix m(days, assets);
            std::copy(v.begin(), v.end(), m.flat().begin());
            return m;
        };
        auto total = [&](const std::vector<double>& v) { return combine(sharpe_loss(v, r), tvr_reg(as_window(v), spec)); };
        auto c = testing::check_gradient([&](const std::vector<double>& v) { return total(v).value; },
                                         [&](const std::vector<double>& v) { return total(v).grad; }, x);
        if (c.kink) continue;
        CHECK(c.rel < 1e-4);
        ++checked;
    }
}

TEST_CASE("LossSpec validation and names") {
    for (LossKind k : kAllLossKinds) CHECK(parse_loss_kind(to_string(k)) == k);
    CHECK(loss_error([] { parse_loss_kind("hinge"); }) == LossError::Kind::BadSpec);
    LossSpec bad;
    bad.epsilon = 0;
    CHECK(loss_error([&] { bad.validate(); }) == LossError::Kind::BadSpec);
    TvrRegSpec inverted;
    inverted.bottom = 2.0;
    CHECK(loss_error([&] { inverted.validate(); }) == LossError::Kind::BadSpec);
}
