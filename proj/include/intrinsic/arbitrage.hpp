#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "intrinsic/market.hpp"
#include "intrinsic/payoff.hpp"
#include "intrinsic/pricing.hpp"

namespace intrinsic {

/// Call prices at one maturity. A quote at strike 0 makes conditions (iii)
/// and (iv) checkable.
struct CallCurve {
    std::vector<CallQuote> quotes;  // strictly ascending strikes >= 0
    double s0 = 1.0;
    double DT = 1.0;                // discount factor to the common maturity

    void validate() const;
    static CallCurve black_scholes(const MarketParams& m, const std::vector<double>& strikes);
};

enum class Condition { convexity, monotonicity, zero_strike, slope, nonnegativity };
std::string_view to_string(Condition c);

struct Violation {
    Condition condition;
    std::vector<double> strikes;  // witnessing strikes
    double amount = 0.0;          // size of the mispricing
};

struct ConsistencyReport {
    std::vector<Violation> violations;
    std::vector<Condition> not_checkable;  // (iii)/(iv) without a zero-strike quote

    bool consistent() const { return violations.empty(); }
    bool flags(Condition c) const;
};

ConsistencyReport check_consistency(const CallCurve& curve, double tol = 1e-12);

/// Static portfolio: call legs, units of the asset and time-0 cash.
struct ArbPortfolio {
    Condition condition;
    std::vector<CallLeg> calls;
    double asset = 0.0;
    double cash = 0.0;
    double epsilon = 0.0;          // credit received when setting up
    double intrinsic_bound = 0.0;  // lower bound of the discounted intrinsic value before T
    std::string certificate;

    /// Terminal payoff including the cash leg grown to T.
    PiecewisePayoff terminal_payoff(double DT) const;
    ArbPortfolio scaled(double c) const;
};

ArbPortfolio construct_arbitrage(const CallCurve& curve, const Violation& v);

/// Discounted lower bound D_T inf g* of the intrinsic value of a static payoff.
double intrinsic_lower_bound(const PiecewisePayoff& g, double DT);

enum class Direction { long_position, short_position };

struct AdmissibilityDecision {
    bool pass = false;
    double slack = 0.0;  // left minus right side of the criterion
};

/// Long: w0 + dC >= ATM(K D_T) - alpha. Short: w0 + alpha - dC >= K D_T.
/// dC = bs_call(s0, K, T) - c0; w0 and alpha come from the market.
AdmissibilityDecision call_admissibility(Direction dir, double K, double c0, const MarketParams& m);

/// (K_plus, K_minus) = ((w0+alpha) / (D_T (2 Phi(sigma sqrt(T)/2) - 1)), (w0+alpha) / D_T)
std::pair<double, double> critical_strikes(double w0, double alpha, const MarketParams& m);

}  // namespace intrinsic
