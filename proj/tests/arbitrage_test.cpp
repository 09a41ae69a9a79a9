#include <gtest/gtest.h>

#include <cmath>

#include "intrinsic/arbitrage.hpp"
#include "intrinsic/errors.hpp"
#include "intrinsic/pricing.hpp"

using namespace intrinsic;

namespace {

std::vector<double> strikes() { return {0.0, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.7, 2.0, 2.5}; }

CallCurve bs_curve() { return CallCurve::black_scholes(MarketParams{}, strikes()); }

double& price(CallCurve& c, double K) {
    for (auto& q : c.quotes)
        if (q.strike == K) return q.price;
    throw std::logic_error("no such strike");
}

// Setup cost of the portfolio at curve prices, computed leg by leg
double cost(const CallCurve& c, const ArbPortfolio& pf) {
    double v = pf.asset * c.s0 + pf.cash;
    for (const auto& leg : pf.calls)
        for (const auto& q : c.quotes)
            if (q.strike == leg.strike) v += leg.quantity * q.price;
    return v;
}

void expect_arbitrage(const CallCurve& c, const ArbPortfolio& pf) {
    EXPECT_GT(pf.epsilon, 0.0);
    EXPECT_NEAR(cost(c, pf), -pf.epsilon, 1e-14);
    auto g = pf.terminal_payoff(c.DT);
    for (double s = 0; s < 5; s += 0.01) EXPECT_GE(g(s), -1e-12) << s;
    EXPECT_GE(pf.intrinsic_bound, -1e-12);
    EXPECT_FALSE(pf.certificate.empty());
}

}  // namespace

TEST(Consistency, BlackScholesCurveIsClean) {
    auto rep = check_consistency(bs_curve());
    EXPECT_TRUE(rep.consistent());
    EXPECT_TRUE(rep.not_checkable.empty());
}

TEST(Consistency, WithoutZeroStrikeSomeConditionsUncheckable) {
    auto c = CallCurve::black_scholes(MarketParams{}, {0.5, 1.0, 1.5});
    auto rep = check_consistency(c);
    EXPECT_TRUE(rep.consistent());
    ASSERT_EQ(rep.not_checkable.size(), 2u);
    EXPECT_EQ(rep.not_checkable[0], Condition::zero_strike);
    EXPECT_EQ(rep.not_checkable[1], Condition::slope);
}

TEST(Consistency, ConvexityViolationGivesButterfly) {
    auto c = bs_curve();
    price(c, 1.2) += 0.05;
    auto rep = check_consistency(c);
    ASSERT_TRUE(rep.flags(Condition::convexity));
    for (const auto& v : rep.violations) {
        if (v.condition != Condition::convexity) continue;
        ASSERT_EQ(v.strikes.size(), 3u);
        auto pf = construct_arbitrage(c, v);
        ASSERT_EQ(pf.calls.size(), 3u);
        double lam = (v.strikes[2] - v.strikes[1]) / (v.strikes[2] - v.strikes[0]);
        EXPECT_NEAR(pf.calls[0].quantity, lam, 1e-15);
        EXPECT_EQ(pf.calls[1].quantity, -1.0);
        EXPECT_NEAR(pf.calls[2].quantity, 1 - lam, 1e-15);
        EXPECT_NEAR(pf.epsilon, v.amount, 1e-15);
        expect_arbitrage(c, pf);
    }
}

TEST(Consistency, MonotonicityViolationGivesCallSpread) {
    auto c = bs_curve();
    price(c, 2.0) = price(c, 1.7) + 0.01;
    auto rep = check_consistency(c);
    ASSERT_TRUE(rep.flags(Condition::monotonicity));
    for (const auto& v : rep.violations)
        if (v.condition == Condition::monotonicity) expect_arbitrage(c, construct_arbitrage(c, v));
}

TEST(Consistency, ZeroStrikeMispricedBothWays) {
    for (double bump : {-0.03, 0.03}) {
        auto c = bs_curve();
        price(c, 0.0) += bump;
        auto rep = check_consistency(c);
        ASSERT_TRUE(rep.flags(Condition::zero_strike)) << bump;
        for (const auto& v : rep.violations)
            if (v.condition == Condition::zero_strike) {
                auto pf = construct_arbitrage(c, v);
                expect_arbitrage(c, pf);
                auto g = pf.terminal_payoff(c.DT);
                for (double s = 0; s < 5; s += 0.5) EXPECT_NEAR(g(s), 0.0, 1e-14);
            }
    }
}

TEST(Consistency, SlopeViolation) {
    auto c = bs_curve();
    // steeper than the discount factor between 0 and the first strike
    price(c, 0.4) = price(c, 0.0) - c.DT * 0.4 - 0.02;
    auto rep = check_consistency(c);
    ASSERT_TRUE(rep.flags(Condition::slope));
    for (const auto& v : rep.violations)
        if (v.condition == Condition::slope) expect_arbitrage(c, construct_arbitrage(c, v));
}

TEST(Consistency, NegativePrice) {
    auto c = bs_curve();
    price(c, 2.5) = -0.01;
    auto rep = check_consistency(c);
    ASSERT_TRUE(rep.flags(Condition::nonnegativity));
    for (const auto& v : rep.violations)
        if (v.condition == Condition::nonnegativity) expect_arbitrage(c, construct_arbitrage(c, v));
}

TEST(Consistency, ToleranceSuppressesTinyViolations) {
    // exactly linear prices, so the only violation is the bump
    CallCurve c;
    c.quotes = {{1.0, 0.5}, {1.5, 0.375}, {2.0, 0.25}};
    EXPECT_TRUE(check_consistency(c, 0.0).consistent());
    price(c, 1.5) += 1e-13;
    EXPECT_TRUE(check_consistency(c, 1e-12).consistent());
    EXPECT_FALSE(check_consistency(c, 0.0).consistent());
}

TEST(Consistency, ValidateRejectsBadCurves) {
    CallCurve c = bs_curve();
    std::swap(c.quotes[1], c.quotes[2]);
    EXPECT_THROW(check_consistency(c), DomainError);
    CallCurve empty;
    EXPECT_THROW(check_consistency(empty), DomainError);
}

TEST(ArbPortfolio, ScalingIsLinear) {
    auto c = bs_curve();
    price(c, 1.2) += 0.05;
    auto rep = check_consistency(c);
    auto pf = construct_arbitrage(c, rep.violations.front());
    auto big = pf.scaled(10.0);
    EXPECT_NEAR(big.epsilon, 10 * pf.epsilon, 1e-14);
    EXPECT_NEAR(big.intrinsic_bound, 10 * pf.intrinsic_bound, 1e-14);
    EXPECT_NEAR(cost(c, big), -big.epsilon, 1e-13);
    EXPECT_THROW(pf.scaled(0.0), DomainError);
}

TEST(IntrinsicBound, Examples) {
    // short call: minorant -s, unbounded below
    EXPECT_EQ(intrinsic_lower_bound(PiecewisePayoff::from_legs({{1.0, -1.0}}), 0.9), -INFINITY);
    // long put via call and cash: (K - s)_+ has minorant itself, inf 0
    auto put = PiecewisePayoff::from_legs({{1.0, 1.0}}, 1.0, -1.0);
    EXPECT_NEAR(intrinsic_lower_bound(put, 0.9), 0.0, 1e-15);
    auto cash = PiecewisePayoff::from_legs({}, 2.0, 0.0);
    EXPECT_NEAR(intrinsic_lower_bound(cash, 0.9), 1.8, 1e-15);
}

TEST(Admissibility, ExamplesAtFairPrice) {
    MarketParams m;
    double K = 1.0;
    double c0 = bs_call(m.s0, K, m.T, m.sigma, m.r);
    auto lg = call_admissibility(Direction::long_position, K, c0, m);
    EXPECT_NEAR(lg.slack, m.w0 + m.alpha - atm_value(K * m.DT(), m.T, m.sigma), 1e-15);
    auto sh = call_admissibility(Direction::short_position, K, c0, m);
    EXPECT_NEAR(sh.slack, m.w0 + m.alpha - K * m.DT(), 1e-15);
    EXPECT_FALSE(sh.pass);
    EXPECT_THROW(call_admissibility(Direction::long_position, 0.0, c0, m), DomainError);
}

TEST(Admissibility, CheapCallHelpsLongHurtsShort) {
    MarketParams m;
    double K = 1.5, fair = bs_call(m.s0, K, m.T, m.sigma, m.r);
    auto a = call_admissibility(Direction::long_position, K, fair, m);
    auto b = call_admissibility(Direction::long_position, K, fair - 0.05, m);
    EXPECT_NEAR(b.slack - a.slack, 0.05, 1e-14);
    auto c = call_admissibility(Direction::short_position, K, fair - 0.05, m);
    auto d = call_admissibility(Direction::short_position, K, fair, m);
    EXPECT_NEAR(d.slack - c.slack, 0.05, 1e-14);
}

TEST(CriticalStrikes, Formula) {
    MarketParams m;
    auto [kp, km] = critical_strikes(0.1, 0.4, m);
    EXPECT_NEAR(km, 0.5 * std::exp(0.02), 1e-14);
    // 2 Phi(x) - 1 = erf(x / sqrt 2), x = sigma sqrt(T) / 2 = 0.5 / sqrt 2
    EXPECT_NEAR(kp, 0.5 * std::exp(0.02) / std::erf(0.25), 1e-12);
    EXPECT_THROW(critical_strikes(0.0, 0.0, m), DomainError);
}

TEST(CriticalStrikes, SeparateAdmissibleStrikes) {
    MarketParams m;
    auto [kp, km] = critical_strikes(m.w0, m.alpha, m);
    for (double K = 0.05; K < 2 * kp; K += 0.01) {
        double c0 = bs_call(m.s0, K, m.T, m.sigma, m.r);
        EXPECT_EQ(call_admissibility(Direction::long_position, K, c0, m).pass, K <= kp * (1 + 1e-12)) << K;
        EXPECT_EQ(call_admissibility(Direction::short_position, K, c0, m).pass, K <= km * (1 + 1e-12)) << K;
    }
}
