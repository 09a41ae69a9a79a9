#include "intrinsic/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "intrinsic/errors.hpp"

namespace intrinsic {

void PiecewisePayoff::validate() const {
    if (breakpoints.size() != values.size()) throw DomainError("payoff: breakpoints and values differ in length");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i] > 0)) throw DomainError("payoff: breakpoints must be > 0");
        if (i > 0 && !(breakpoints[i] > breakpoints[i - 1])) throw DomainError("payoff: breakpoints must ascend strictly");
        if (!std::isfinite(values[i])) throw DomainError("payoff: non-finite value");
    }
    if (!std::isfinite(left_value) || !std::isfinite(terminal_slope)) throw DomainError("payoff: non-finite left value or slope");
}

double PiecewisePayoff::operator()(double s) const {
    if (s < 0) throw DomainError("payoff evaluated at negative spot");
    if (breakpoints.empty()) return left_value + terminal_slope * s;
    if (s >= breakpoints.back()) return values.back() + terminal_slope * (s - breakpoints.back());
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
    std::size_t j = static_cast<std::size_t>(it - breakpoints.begin());
    double x0 = j == 0 ? 0.0 : breakpoints[j - 1];
    double y0 = j == 0 ? left_value : values[j - 1];
    double x1 = breakpoints[j], y1 = values[j];
    return y0 + (y1 - y0) * (s - x0) / (x1 - x0);
}

PiecewisePayoff PiecewisePayoff::from_legs(const std::vector<CallLeg>& calls, double cash, double asset) {
    std::map<double, double> qty;
    double slope = asset;
    for (const auto& leg : calls) {
        if (leg.strike < 0) throw DomainError("call leg with negative strike");
        slope += leg.quantity;
        if (leg.strike > 0) qty[leg.strike] += leg.quantity;
    }
    PiecewisePayoff h;
    h.left_value = cash;
    h.terminal_slope = slope;
    // value at each strike: cash + asset*k + sum q_i (k - K_i)_+
    for (const auto& [k, q] : qty) {
        (void)q;
        double v = cash + asset * k;
        for (const auto& leg : calls) v += leg.quantity * std::max(k - leg.strike, 0.0);
        h.breakpoints.push_back(k);
        h.values.push_back(v);
    }
    return h;
}

double PiecewisePayoff::infimum() const {
    if (terminal_slope < 0) return -std::numeric_limits<double>::infinity();
    double m = left_value;
    for (double v : values) m = std::min(m, v);
    return m;
}

PiecewisePayoff convex_minorant(const PiecewisePayoff& h) {
    h.validate();
    struct Pt {
        double x, y;
    };
    std::vector<Pt> pts{{0.0, h.left_value}};
    for (std::size_t i = 0; i < h.breakpoints.size(); ++i) pts.push_back({h.breakpoints[i], h.values[i]});

    auto cross = [](const Pt& a, const Pt& b, const Pt& c) {
        return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    };
    std::vector<Pt> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
        hull.push_back(p);
    }
    // the ray beyond the last vertex must not be steeper than the hull's last edge
    auto slope = [](const Pt& a, const Pt& b) { return (b.y - a.y) / (b.x - a.x); };
    while (hull.size() >= 2 && slope(hull[hull.size() - 2], hull.back()) >= h.terminal_slope) hull.pop_back();

    PiecewisePayoff out;
    out.left_value = hull.front().y;
    out.terminal_slope = h.terminal_slope;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        out.breakpoints.push_back(hull[i].x);
        out.values.push_back(hull[i].y);
    }
    return out;
}

double intrinsic_european(const PiecewisePayoff& h, const MarketParams& m, double t, double s) {
    return intrinsic_european_early(h, m, m.T, t, s, std::nullopt);
}

double intrinsic_european_early(const PiecewisePayoff& h, const MarketParams& m, double Tp, double t, double s,
                                std::optional<double> settled_spot) {
    if (s < 0) throw DomainError("intrinsic value at negative spot");
    if (!(Tp > 0) || Tp > m.T) throw DomainError("claim maturity outside (0,T]");
    if (t < 0 || t > m.T) throw DomainError("intrinsic value: t outside [0,T]");
    if (t == Tp) return h(s);
    if (t > Tp) {
        if (!settled_spot) throw DomainError("intrinsic value after maturity needs the settled spot");
        return m.discount(Tp) * h(*settled_spot) / m.discount(t);
    }
    double dt = m.discount(t), dT = m.discount(Tp);
    return dT / dt * convex_minorant(h)(dt * s / dT);
}

void OneTouchState::validate(double T) const {
    if (!(B > 0)) throw DomainError("one-touch barrier must be > 0");
    if (hit_time && (!hit || *hit_time > T || *hit_time < 0)) throw DomainError("inconsistent one-touch hit time");
}

double intrinsic_onetouch(Side side, const OneTouchState& state, double t, double s, double T) {
    state.validate(T);
    if (t < 0 || t > T) throw DomainError("intrinsic_onetouch: t outside [0,T]");
    if (s < 0) throw DomainError("intrinsic_onetouch: negative spot");
    if (!state.hit && s >= state.B && t < T) throw DomainError("spot at or above the barrier but hit flag is false");
    double sign = side == Side::long_position ? 1.0 : -1.0;
    if (state.hit) return sign;
    if (side == Side::long_position || t == T) return 0.0;
    return -s / state.B;
}

double intrinsic_hobson_package(const MarketParams& m, double t, double s, const OneTouchState& state, double K) {
    state.validate(m.T);
    if (!(K > 0) || K >= state.B) throw DomainError("Hobson package needs 0 < K < B");
    if (t < 0 || t > m.T) throw DomainError("intrinsic_hobson_package: t outside [0,T]");
    if (!state.hit) return 0.0;
    double kd = K * m.DT();
    double sd = s * m.discount(t);
    return std::max(kd - sd, 0.0) / (state.B - K);
}

}  // namespace intrinsic
