#include <gtest/gtest.h>

#include <cmath>

#include "intrinsic/errors.hpp"
#include "intrinsic/market.hpp"
#include "intrinsic/normal.hpp"
#include "intrinsic/pricing.hpp"
#include "intrinsic/random.hpp"

using namespace intrinsic;

TEST(BlackScholes, PayoffAtExpiry) {
    EXPECT_NEAR(bs_call(1.2, 0.85, 0.0, 0.5, 0.01), 0.35, 1e-15);
    EXPECT_EQ(bs_call(0.8, 0.85, 0.0, 0.5, 0.01), 0.0);
}

TEST(BlackScholes, ZeroStrikeIsSpot) { EXPECT_EQ(bs_call(1.2, 0.0, 1.0, 0.5, 0.01), 1.2); }

TEST(BlackScholes, TextbookValue) {
    // Hull: S=42, K=40, r=10%, sigma=20%, T=0.5 -> 4.76
    EXPECT_NEAR(bs_call(42, 40, 0.5, 0.2, 0.1), 4.759422, 1e-6);
    EXPECT_NEAR(bs_put(42, 40, 0.5, 0.2, 0.1), 0.808599, 1e-6);
}

TEST(BlackScholes, PutCallParity) {
    for (double K : {0.5, 1.0, 1.7})
        for (double tau : {0.1, 1.0, 3.0}) {
            double c = bs_call(1.2, K, tau, 0.5, 0.02);
            double pd = discounted_put(1.2, K * std::exp(-0.02 * tau), tau, 0.5);
            EXPECT_NEAR(c - pd, 1.2 - K * std::exp(-0.02 * tau), 1e-13);
        }
}

TEST(BlackScholes, ConvexAndIncreasingInSpot) {
    double h = 0.01;
    for (double s = 0.2; s < 3; s += 0.1) {
        double c0 = bs_call(s - h, 1.0, 1.0, 0.3, 0.01), c1 = bs_call(s, 1.0, 1.0, 0.3, 0.01),
               c2 = bs_call(s + h, 1.0, 1.0, 0.3, 0.01);
        EXPECT_GE(c2, c1);
        EXPECT_GE(c0 + c2 - 2 * c1, -1e-14);
    }
}

TEST(BlackScholes, DiscountedValueDecreasesInTime) {
    MarketParams m;
    double K = 0.9, prev = 1e9;
    for (double t = 0; t <= m.T; t += 0.1) {
        double dt = m.discount(t);
        double v = dt * bs_call(1.1 / dt, K, m.T - t, m.sigma, m.r);
        EXPECT_LE(v, prev + 1e-15);
        prev = v;
    }
}

TEST(BlackScholes, BadInputs) {
    EXPECT_THROW(discounted_call(-1, 1, 1, 0.2), DomainError);
    EXPECT_THROW(discounted_call(1, 1, 1, 0.0), DomainError);
}

TEST(LocalTime, AtTheMoney) {
    double Kd = 0.9;
    for (double tau : {0.0, 0.5, 2.0}) {
        double expect = Kd * (2 * norm_cdf(0.25 * std::sqrt(tau)) - 1);
        EXPECT_NEAR(expected_local_time(Kd, Kd, tau, 0.5), expect, 1e-15);
        EXPECT_NEAR(atm_value(Kd, tau, 0.5), expect, 1e-15);
    }
    EXPECT_EQ(expected_local_time(1.3, 0.9, 0.0, 0.5), 0.0);
}

TEST(LocalTime, BothSidesAgree) {
    for (double sd : {0.6, 0.9, 1.4}) {
        double c = discounted_call(sd, 0.9, 1.5, 0.5) - std::max(sd - 0.9, 0.0);
        double p = discounted_put(sd, 0.9, 1.5, 0.5) - std::max(0.9 - sd, 0.0);
        EXPECT_NEAR(c, p, 1e-14);
        EXPECT_NEAR(expected_local_time(sd, 0.9, 1.5, 0.5), c, 1e-14);
    }
}

TEST(LocalTime, TanakaMonteCarlo) {
    // E[|S^D_T - Kd|] - |sd - Kd| is twice the expected local-time increment
    double sd = 1.1, Kd = 0.95, tau = 1.5, sigma = 0.5;
    RandomStream rng(4, 0);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        double x = sd * std::exp(sigma * std::sqrt(tau) * rng.normal() - 0.5 * sigma * sigma * tau);
        double v = 0.5 * (std::abs(x - Kd) - std::abs(sd - Kd));
        s += v;
        s2 += v * v;
    }
    double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_NEAR(expected_local_time(sd, Kd, tau, sigma), mean, 3 * se);
}

TEST(Rho, Properties) {
    MarketParams m;
    double Kd = 0.85 * m.DT();
    EXPECT_EQ(rho(m, m.T, Kd), 0.0);
    MarketParams flat = m;
    flat.mu = flat.r;
    for (double t : {0.0, 0.8, 1.5}) EXPECT_NEAR(rho(flat, t, Kd), atm_value(Kd, m.T - t, m.sigma), 1e-15);
    EXPECT_THROW(rho(m, -0.1, Kd), DomainError);
}

TEST(Z, EndpointsAndMonotonicity) {
    MarketParams m;
    double Kd = 0.85 * m.DT();
    EXPECT_NEAR(z(m, m.T, 2.0, Kd, m.alpha), -m.alpha * m.phi_on_strike_line(m.T, Kd), 1e-15);
    ASSERT_TRUE(m.z_decreasing());
    // where z >= 0 it is strictly decreasing, and once negative it stays negative
    for (double lambda : {0.0, 0.5, 3.1, 6.0}) {
        double prev = z(m, 0.0, lambda, Kd, m.alpha);
        for (int i = 1; i <= 200; ++i) {
            double v = z(m, m.T * i / 200, lambda, Kd, m.alpha);
            if (prev >= 0) EXPECT_LT(v, prev);
            else EXPECT_LT(v, 0.0);
            prev = v;
        }
    }
    // alpha = 0: lambda rho, positive before T
    for (double u = 0; u < m.T; u += 0.25) EXPECT_GT(z(m, u, 1.0, Kd, 0.0), 0.0);
    EXPECT_THROW(z(m, 0.0, -1.0, Kd, 0.4), DomainError);
}

TEST(Z, PositivePartDecreasingOnRandomRegimeParameters) {
    RandomStream rng(8, 0);
    for (int trial = 0; trial < 200; ++trial) {
        MarketParams m;
        m.sigma = 0.1 + rng.uniform();
        m.p = 0.1 + 0.85 * rng.uniform();
        m.r = 0.05 * rng.uniform();
        m.mu = m.r + m.sigma * (m.p * m.sigma) * rng.uniform();
        if (!m.z_decreasing()) continue;
        double Kd = (0.3 + 1.5 * rng.uniform()) * m.DT();
        double lambda = 5 * rng.uniform(), alpha = rng.uniform();
        double prev = z(m, 0.0, lambda, Kd, alpha);
        for (int i = 1; i <= 50; ++i) {
            double v = z(m, m.T * i / 50, lambda, Kd, alpha);
            if (prev >= 0) ASSERT_LT(v, prev + 1e-13) << "trial " << trial;
            else ASSERT_LT(v, 0.0) << "trial " << trial;
            prev = v;
        }
    }
}
