#include <gtest/gtest.h>

#include <cmath>

#include "intrinsic/call_position.hpp"
#include "intrinsic/errors.hpp"
#include "intrinsic/lattice.hpp"
#include "intrinsic/passage.hpp"
#include "intrinsic/pricing.hpp"

using namespace intrinsic;

namespace {

CallPosition position(double lambda) {
    CallPosition p;
    p.K = 0.85;
    p.lambda = lambda;
    p.deltaC = 0.02;
    return p;
}

// first grid time where z drops below M, linearly interpolated
double scan_rstar(const CallProblem& prob, double M, int n) {
    double T = prob.market().T;
    double prev = prob.z(0.0);
    if (prev <= M) return 0.0;
    for (int i = 1; i <= n; ++i) {
        double u = T * i / n, v = prob.z(u);
        if (v < M) {
            double u0 = T * (i - 1) / n;
            return u0 + (u - u0) * (prev - M) / (prev - v);
        }
        prev = v;
    }
    return T;
}

}  // namespace

TEST(CallProblem, RejectsUnsupportedRegime) {
    MarketParams m;
    m.mu = m.r;
    EXPECT_THROW(CallProblem(m, position(1.0)), UnsupportedRegime);
    CallPosition bad = position(1.0);
    bad.K = -1;
    EXPECT_THROW(CallProblem(MarketParams{}, bad), DomainError);
}

TEST(CallProblem, RstarEdgeCases) {
    MarketParams m;
    CallProblem prob(m, position(2.0));
    EXPECT_EQ(prob.rstar(prob.z(0.0) + 0.01), 0.0);
    EXPECT_EQ(prob.rstar(prob.z(m.T) - 0.01), m.T);
}

TEST(CallProblem, RstarMatchesGridScan) {
    MarketParams m;
    for (double lambda : {1.0, 3.1, 5.0}) {
        CallProblem prob(m, position(lambda));
        auto sol = prob.solve(m.w0);
        if (!sol.feasible || sol.rstar == 0.0) continue;
        EXPECT_NEAR(prob.rstar(sol.M), scan_rstar(prob, sol.M, 200000), 1e-6);
        EXPECT_NEAR(prob.rstar(sol.M), sol.rstar, 1e-12);
    }
}

TEST(CallProblem, ExpectedSupJTrivialCases) {
    MarketParams m;
    CallProblem prob(m, position(2.0));
    double big = prob.z(0.0) + 1.0;
    EXPECT_EQ(prob.expected_sup_J(big), big);
    CallProblem none(m, position(0.0));
    EXPECT_EQ(none.expected_sup_J(0.3), 0.3);
    EXPECT_EQ(none.expected_sup_J(0.0), 0.0);
    EXPECT_THROW(prob.expected_sup_J(-0.1), DomainError);
}

TEST(CallProblem, ExpectedSupJMatchesMonteCarlo) {
    MarketParams m;
    CallProblem prob(m, position(3.1));
    double M = 0.05;
    const int n = 40000;
    auto smp = simulate_first_passage(prob.line(Measure::Qbar), m.T, n, 400, 17);
    double s = 0, s2 = 0;
    for (double h : smp.hit_times) {
        double v = std::max(std::max(prob.z(h), 0.0), M);
        s += v;
        s2 += v * v;
    }
    int misses = n - static_cast<int>(smp.hit_times.size());
    s += misses * M;
    s2 += misses * M * M;
    double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_NEAR(prob.expected_sup_J(M), mean, 3 * se);
}

TEST(CallProblem, ExpectedSupJSlopeBetweenZeroAndOne) {
    MarketParams m;
    CallProblem prob(m, position(3.1));
    double prev = prob.expected_sup_J(0.0);
    for (double M = 0.01; M < 0.6; M += 0.01) {
        double v = prob.expected_sup_J(M);
        double slope = (v - prev) / 0.01;
        EXPECT_GE(slope, -1e-9);
        EXPECT_LE(slope, 1.0 + 1e-9);
        prev = v;
    }
}

TEST(CallProblem, NonBindingBudget) {
    MarketParams m;
    CallProblem prob(m, position(1.0));
    double w0 = prob.z(0.0) + 0.5;
    auto sol = prob.solve(w0);
    ASSERT_TRUE(sol.feasible);
    EXPECT_EQ(sol.M, w0 + 0.02);
    EXPECT_EQ(sol.rstar, 0.0);
    EXPECT_NEAR(sol.utility, m.cp() * m.utility(w0 + 0.02), 1e-14);
}

TEST(CallProblem, ZeroLambdaIsMerton) {
    MarketParams m;
    auto sol = solve_M(m, position(0.0), m.w0);
    ASSERT_TRUE(sol.feasible);
    EXPECT_NEAR(sol.utility, m.cp() * m.utility(m.w0), 1e-14);
    EXPECT_NEAR(optimal_utility(m, position(0.0), m.w0), m.cp() * m.utility(m.w0), 1e-14);
}

TEST(CallProblem, SolvesMEquation) {
    MarketParams m;
    CallProblem prob(m, position(3.1));
    auto sol = prob.solve(m.w0);
    ASSERT_TRUE(sol.feasible);
    EXPECT_GE(sol.M, 0.0);
    EXPECT_NEAR(prob.expected_sup_J(sol.M), sol.budget, 1e-9);
    EXPECT_NEAR(sol.budget, m.w0 + 3.1 * 0.02, 1e-15);
}

TEST(CallProblem, InfeasibleBelowMinimalWealth) {
    MarketParams m;
    CallProblem prob(m, position(6.0));
    double need = prob.feasibility_integral() - 6.0 * 0.02;
    ASSERT_GT(need, 0.0);
    auto sol = prob.solve(0.5 * need);
    EXPECT_FALSE(sol.feasible);
    EXPECT_NEAR(sol.minimal_w0, need, 1e-12);
    try {
        optimal_utility(m, position(6.0), 0.5 * need);
        FAIL() << "expected InfeasibleError";
    } catch (const InfeasibleError& e) {
        EXPECT_NEAR(e.minimal_w0, need, 1e-12);
    }
    // at the boundary the floor is zero
    auto edge = prob.solve(need);
    ASSERT_TRUE(edge.feasible);
    EXPECT_NEAR(edge.M, 0.0, 1e-8);
}

TEST(CallProblem, UtilityMatchesMonteCarlo) {
    MarketParams m;
    CallProblem prob(m, position(3.1));
    auto sol = prob.solve(m.w0);
    const int n = 40000;
    auto smp = simulate_first_passage(prob.line(Measure::Qbar), m.T, n, 400, 23);
    double s = 0, s2 = 0;
    auto add = [&](double y) {
        double u = m.cp() * m.utility(y);
        s += u;
        s2 += u * u;
    };
    for (double h : smp.hit_times) add(std::max(std::max(prob.z(h), 0.0), sol.M));
    for (std::size_t i = smp.hit_times.size(); i < static_cast<std::size_t>(n); ++i) add(sol.M);
    double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_NEAR(sol.utility, mean, 3 * se);
    EXPECT_NEAR(prob.utility_at(sol.M), sol.utility, 1e-14);
}

TEST(CallProblem, ZetaOnStrikeLineIsZ) {
    MarketParams m;
    CallProblem prob(m, position(2.0));
    for (double t : {0.0, 0.5, 1.9}) EXPECT_NEAR(prob.zeta(t, prob.Kd()), prob.z(t), 1e-13);
    CallProblem none(m, position(0.0));
    double t = 0.7, sd = 1.1;
    double b = (std::log(sd / m.s0) + 0.5 * m.sigma * m.sigma * t) / m.sigma;
    EXPECT_NEAR(none.zeta(t, sd), -m.alpha * m.phi_path(t, b), 1e-14);
}

TEST(CallProblem, LinearSegmentBelowRstarRoot) {
    // E[sup J v M] - M is convex and decreasing in M on [0, z(0)]
    MarketParams m;
    CallProblem prob(m, position(3.1));
    double h = 0.005;
    for (double M = h; M < prob.z(0.0) - h; M += h) {
        double a = prob.expected_sup_J(M - h) - (M - h), b = prob.expected_sup_J(M) - M,
               c = prob.expected_sup_J(M + h) - (M + h);
        EXPECT_LE(b, a + 1e-12);
        EXPECT_GE(a + c - 2 * b, -1e-10);
    }
}

TEST(WealthCdf, Properties) {
    MarketParams m;
    CallProblem prob(m, position(3.1));
    auto sol = prob.solve(m.w0);
    EXPECT_EQ(prob.wealth_cdf(sol.M - 1e-9, sol.M), 0.0);
    EXPECT_EQ(prob.wealth_cdf(std::max(prob.z(0.0), sol.M), sol.M), 1.0);
    double prev = 0.0;
    for (double w = 0; w < 1.5; w += 0.005) {
        double c = prob.wealth_cdf(w, sol.M);
        EXPECT_GE(c, prev - 1e-15);
        EXPECT_LE(c, 1.0);
        prev = c;
    }
    // atom at M equals the probability of never meeting the line before r*
    double atom = prob.wealth_cdf(sol.M, sol.M);
    EXPECT_NEAR(atom, 1 - hit_probability(prob.line(Measure::Qbar), sol.rstar), 1e-14);
}

TEST(WealthCdf, AtomShrinksWithLambda) {
    MarketParams m;
    CallProblem a(m, position(2.0)), b(m, position(3.1));
    auto sa = a.solve(m.w0), sb = b.solve(m.w0);
    ASSERT_TRUE(sa.feasible && sb.feasible);
    EXPECT_LT(sb.M, sa.M);
    EXPECT_LT(b.wealth_cdf(sb.M, sb.M), a.wealth_cdf(sa.M, sa.M));
}

TEST(WealthCdf, TableAndErrors) {
    MarketParams m;
    auto tab = terminal_wealth_cdf(m, position(3.1), m.w0, {0.0, 0.5, 1.0});
    EXPECT_EQ(tab.rows().size(), 3u);
    EXPECT_THROW(terminal_wealth_cdf(m, position(3.1), m.w0, {0.5, 0.2}), DomainError);
    EXPECT_THROW(terminal_wealth_cdf(m, position(6.0), 0.0, {0.5}), InfeasibleError);
}

TEST(LambdaSweep, InfeasibleRowsAreEmpty) {
    MarketParams m;
    auto tab = lambda_sweep(m, position(1.0), m.w0, {0.5, 3.1, 6.0});
    ASSERT_EQ(tab.rows().size(), 3u);
    EXPECT_FALSE(tab.has_number(2, 1));
    EXPECT_TRUE(tab.has_number(1, 1));
}

TEST(Lattice, CallOracleAgreesWithClosedForm) {
    MarketParams m;
    CallPosition pos = position(3.1);
    CallProblem prob(m, pos);
    auto sol = prob.solve(m.w0);
    double lat = snell_initial_value(call_lattice_spec(m, pos, sol.M, 400), m.level(m.s0));
    EXPECT_NEAR(lat / prob.expected_sup_J(sol.M), 1.0, 5e-3);
    auto ls = solve_M_lattice(m, pos, m.w0, 400);
    ASSERT_TRUE(ls.feasible);
    EXPECT_NEAR(ls.M, sol.M, 0.01 * sol.M);
    EXPECT_NEAR(ls.utility / sol.utility, 1.0, 1e-2);
}

TEST(Lattice, FallbackOutsideDecreasingRegime) {
    MarketParams m;
    m.mu = m.r + m.sigma * m.sigma;  // theta > p sigma
    ASSERT_FALSE(m.z_decreasing());
    auto sol = solve_M(m, position(1.0), 0.5);
    EXPECT_TRUE(sol.lattice_fallback);
    EXPECT_TRUE(sol.feasible);
    EXPECT_LE(sol.M, sol.budget + 1e-12);
}
