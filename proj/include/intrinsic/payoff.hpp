#pragma once

#include <optional>
#include <vector>

#include "intrinsic/market.hpp"

namespace intrinsic {

struct CallLeg {
    double strike;
    double quantity;
};

/// Continuous piecewise-linear payoff on [0, inf).
struct PiecewisePayoff {
    std::vector<double> breakpoints;  // strictly ascending, > 0
    std::vector<double> values;       // payoff at each breakpoint
    double left_value = 0.0;          // payoff at 0
    double terminal_slope = 0.0;      // slope beyond the last breakpoint (or everywhere if none)

    void validate() const;
    double operator()(double s) const;

    /// Sum of call legs, plus cash and units of the asset.
    static PiecewisePayoff from_legs(const std::vector<CallLeg>& calls, double cash = 0.0, double asset = 0.0);

    /// Infimum over [0, inf); -inf when the payoff decreases without bound.
    double infimum() const;
};

/// Greatest convex minorant on [0, inf), via the lower convex hull of
/// (0, left_value), the breakpoints and the terminal direction.
PiecewisePayoff convex_minorant(const PiecewisePayoff& h);

/// Intrinsic value (time-t money) of h(S_T) at time t given spot s.
double intrinsic_european(const PiecewisePayoff& h, const MarketParams& m, double t, double s);

/// Same for a claim maturing at Tp <= T. After Tp the discounted value is
/// frozen at D_Tp h(S_Tp); settled_spot supplies S_Tp.
double intrinsic_european_early(const PiecewisePayoff& h, const MarketParams& m, double Tp, double t, double s,
                                std::optional<double> settled_spot = std::nullopt);

struct OneTouchState {
    double B = 0.0;
    bool hit = false;
    std::optional<double> hit_time;

    void validate(double T) const;
};

enum class Side { long_position, short_position };

/// Intrinsic value of a long or short one-touch paying 1 at T.
/// Before the hit: long 0, short -s/B (t < T); after the hit: +1 / -1.
double intrinsic_onetouch(Side side, const OneTouchState& state, double t, double s, double T);

/// Discounted intrinsic value D_t In_t of the Hobson package (calls at K plus
/// forward sale at the barrier, minus the one-touch): 0 before the hit,
/// (K^D - S^D_t)_+/(B - K) after.
double intrinsic_hobson_package(const MarketParams& m, double t, double s, const OneTouchState& state, double K);

}  // namespace intrinsic
