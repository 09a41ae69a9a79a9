#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "intrinsic/errors.hpp"
#include "intrinsic/market.hpp"
#include "intrinsic/payoff.hpp"
#include "intrinsic/random.hpp"

using namespace intrinsic;

namespace {

// brute-force minorant value: inf over chords through s, plus the terminal direction
double brute_minorant(const PiecewisePayoff& h, double s) {
    std::vector<double> xs{0.0};
    for (double b : h.breakpoints) xs.push_back(b);
    double best = h(s);
    for (double a : xs) {
        for (double b : xs) {
            if (a < s && s < b) {
                double w = (b - s) / (b - a);
                best = std::min(best, w * h(a) + (1 - w) * h(b));
            }
        }
    }
    // rays from a point left of s along the terminal slope
    for (double a : xs)
        if (a <= s) best = std::min(best, h(a) + h.terminal_slope * (s - a));
    return best;
}

}  // namespace

TEST(Payoff, FromLegs) {
    auto h = PiecewisePayoff::from_legs({{1.0, 1.0}, {2.0, -1.0}});
    EXPECT_EQ(h(0.5), 0.0);
    EXPECT_EQ(h(1.5), 0.5);
    EXPECT_EQ(h(3.0), 1.0);
    EXPECT_EQ(h.terminal_slope, 0.0);
    auto zero = PiecewisePayoff::from_legs({{0.0, 1.0}});
    EXPECT_EQ(zero(1.7), 1.7);
    auto fwd = PiecewisePayoff::from_legs({}, -1.0, 1.0);
    EXPECT_EQ(fwd(2.5), 1.5);
}

TEST(Payoff, Infimum) {
    EXPECT_EQ(PiecewisePayoff::from_legs({{1.0, -1.0}}).infimum(), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(PiecewisePayoff::from_legs({{1.0, 1.0}, {2.0, -2.0}, {3.0, 1.0}}).infimum(), 0.0);
    EXPECT_EQ(PiecewisePayoff::from_legs({{1.0, -1.0}, {2.0, 1.0}}).infimum(), -1.0);
}

TEST(Payoff, ValidateRejectsBadInput) {
    PiecewisePayoff h;
    h.breakpoints = {1.0, 1.0};
    h.values = {0.0, 0.0};
    EXPECT_THROW(h.validate(), DomainError);
    EXPECT_THROW(PiecewisePayoff::from_legs({{-1.0, 1.0}}), DomainError);
}

TEST(ConvexMinorant, ConvexPayoffUnchanged) {
    auto call = PiecewisePayoff::from_legs({{1.0, 1.0}});
    auto g = convex_minorant(call);
    for (double s = 0; s < 4; s += 0.1) EXPECT_NEAR(g(s), call(s), 1e-15);
}

TEST(ConvexMinorant, CallSpreadIsZeroLine) {
    // bounded increasing payoff: minorant is the constant 0
    auto spread = PiecewisePayoff::from_legs({{1.0, 1.0}, {2.0, -1.0}});
    auto g = convex_minorant(spread);
    for (double s = 0; s < 10; s += 0.25) EXPECT_NEAR(g(s), 0.0, 1e-15);
}

TEST(ConvexMinorant, ButterflyIsZero) {
    auto fly = PiecewisePayoff::from_legs({{1.0, 1.0}, {1.5, -2.0}, {2.0, 1.0}});
    auto g = convex_minorant(fly);
    for (double s = 0; s < 5; s += 0.1) EXPECT_NEAR(g(s), 0.0, 1e-15);
}

TEST(ConvexMinorant, ShortCallIsMinusSpot) {
    auto shortc = PiecewisePayoff::from_legs({{1.0, -1.0}});
    auto g = convex_minorant(shortc);
    for (double s = 0; s < 5; s += 0.1) EXPECT_NEAR(g(s), -s, 1e-14);
}

TEST(ConvexMinorant, MatchesBruteForceOnRandomPayoffs) {
    RandomStream rng(99, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<CallLeg> legs;
        double k = 0;
        for (int i = 0; i < 5; ++i) {
            k += 0.2 + rng.uniform();
            legs.push_back({k, 2 * rng.uniform() - 1});
        }
        double asset = rng.uniform();
        auto h = PiecewisePayoff::from_legs(legs, rng.uniform() - 0.5, asset);
        if (h.terminal_slope < 0) continue;
        auto g = convex_minorant(h);
        for (double s = 0; s < k + 1; s += 0.05) {
            ASSERT_LE(g(s), h(s) + 1e-12);
            ASSERT_NEAR(g(s), brute_minorant(h, s), 1e-9) << "trial " << trial << " s " << s;
        }
        // idempotent and convex
        auto gg = convex_minorant(g);
        for (double s = 0.05; s < k + 1; s += 0.05) {
            ASSERT_NEAR(gg(s), g(s), 1e-12);
            ASSERT_GE(g(s - 0.05) + g(s + 0.05) - 2 * g(s), -1e-12);
        }
    }
}

TEST(ConvexMinorant, PositivelyHomogeneous) {
    auto h = PiecewisePayoff::from_legs({{0.5, 1.0}, {1.0, -3.0}, {1.5, 2.5}});
    auto g = convex_minorant(h);
    auto h3 = PiecewisePayoff::from_legs({{0.5, 3.0}, {1.0, -9.0}, {1.5, 7.5}});
    auto g3 = convex_minorant(h3);
    for (double s = 0; s < 3; s += 0.1) EXPECT_NEAR(g3(s), 3 * g(s), 1e-12);
}

TEST(IntrinsicEuropean, AtMaturityIsPayoff) {
    MarketParams m;
    auto fly = PiecewisePayoff::from_legs({{1.0, 1.0}, {1.5, -2.0}, {2.0, 1.0}});
    EXPECT_EQ(intrinsic_european(fly, m, m.T, 1.5), 0.5);
}

TEST(IntrinsicEuropean, CallIsForwardMoneyness) {
    MarketParams m;
    auto call = PiecewisePayoff::from_legs({{1.0, 1.0}});
    for (double t : {0.0, 0.7, 1.9})
        for (double s : {0.5, 0.99, 1.3}) {
            double expect = std::max(s - 1.0 * m.DT() / m.discount(t), 0.0);
            EXPECT_NEAR(intrinsic_european(call, m, t, s), expect, 1e-14);
        }
}

TEST(IntrinsicEuropean, ZeroRateConvexPayoff) {
    MarketParams m;
    m.r = 0.0;
    auto h = PiecewisePayoff::from_legs({{0.8, 1.0}, {1.2, 0.5}});
    for (double s = 0.1; s < 2; s += 0.1) EXPECT_NEAR(intrinsic_european(h, m, 0.5, s), h(s), 1e-14);
}

TEST(IntrinsicEuropean, EarlyMaturityFreezes) {
    MarketParams m;
    auto call = PiecewisePayoff::from_legs({{1.0, 1.0}});
    double v = intrinsic_european_early(call, m, 1.0, 1.5, 0.3, 1.4);
    EXPECT_NEAR(v, m.discount(1.0) * 0.4 / m.discount(1.5), 1e-14);
    EXPECT_THROW(intrinsic_european_early(call, m, 1.0, 1.5, 0.3), DomainError);
}

TEST(IntrinsicEuropean, DiscountedValueIsQSubmartingale) {
    // D_t In_t is convex in S^D, hence a Q-submartingale; check one step by Monte Carlo
    MarketParams m;
    auto h = PiecewisePayoff::from_legs({{0.9, -1.0}, {1.1, 2.0}, {1.6, -0.5}}, 0.2, 0.0);
    double t0 = 0.5, t1 = 1.2;
    double v0 = m.discount(t0) * intrinsic_european(h, m, t0, m.s0);
    RandomStream rng(21, 0);
    const int n = 100000;
    double s = 0, s2 = 0;
    double sd0 = m.s0 * m.discount(t0);
    for (int i = 0; i < n; ++i) {
        double dt = t1 - t0;
        double sd1 = sd0 * std::exp(m.sigma * std::sqrt(dt) * rng.normal() - 0.5 * m.sigma * m.sigma * dt);
        double v = m.discount(t1) * intrinsic_european(h, m, t1, sd1 / m.discount(t1));
        s += v;
        s2 += v * v;
    }
    double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_GE(mean - v0, -3 * se);
}

TEST(IntrinsicOneTouch, Examples) {
    OneTouchState st{1.5, false, std::nullopt};
    EXPECT_EQ(intrinsic_onetouch(Side::long_position, st, 0.5, 1.2, 2.0), 0.0);
    EXPECT_NEAR(intrinsic_onetouch(Side::short_position, st, 0.5, 1.2, 2.0), -0.8, 1e-15);
    EXPECT_EQ(intrinsic_onetouch(Side::short_position, st, 2.0, 1.2, 2.0), 0.0);
    OneTouchState hit{1.5, true, 0.7};
    EXPECT_EQ(intrinsic_onetouch(Side::long_position, hit, 1.0, 1.0, 2.0), 1.0);
    EXPECT_EQ(intrinsic_onetouch(Side::short_position, hit, 1.0, 1.0, 2.0), -1.0);
    EXPECT_THROW(intrinsic_onetouch(Side::long_position, st, 0.5, 1.6, 2.0), DomainError);
}

TEST(IntrinsicHobsonPackage, Examples) {
    MarketParams m;
    OneTouchState st{1.5, false, std::nullopt};
    EXPECT_EQ(intrinsic_hobson_package(m, 1.0, 0.5, st, 1.0), 0.0);
    OneTouchState hit{1.5, true, 0.3};
    double t = 1.0, s = 0.7;
    double expect = std::max(1.0 * m.DT() - s * m.discount(t), 0.0) / 0.5;
    EXPECT_NEAR(intrinsic_hobson_package(m, t, s, hit, 1.0), expect, 1e-15);
    EXPECT_EQ(intrinsic_hobson_package(m, t, 1.4, hit, 1.0), 0.0);
    EXPECT_THROW(intrinsic_hobson_package(m, t, s, hit, 1.5), DomainError);
}
