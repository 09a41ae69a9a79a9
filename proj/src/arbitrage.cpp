#include "intrinsic/arbitrage.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "intrinsic/errors.hpp"
#include "intrinsic/normal.hpp"

namespace intrinsic {

void CallCurve::validate() const {
    if (quotes.empty()) throw DomainError("call curve needs at least one quote");
    if (!(s0 > 0)) throw DomainError("call curve spot must be > 0");
    if (!(DT > 0 && DT <= 1)) throw DomainError("discount factor must lie in (0,1]");
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        if (!(quotes[i].strike >= 0) || !std::isfinite(quotes[i].price))
            throw DomainError("call quote with negative strike or non-finite price");
        if (i > 0 && !(quotes[i].strike > quotes[i - 1].strike))
            throw DomainError("call curve strikes must be strictly ascending");
    }
}

CallCurve CallCurve::black_scholes(const MarketParams& m, const std::vector<double>& strikes) {
    m.validate();
    CallCurve c;
    c.s0 = m.s0;
    c.DT = m.DT();
    for (double k : strikes) c.quotes.push_back({k, m.T, bs_call(m.s0, k, m.T, m.sigma, m.r)});
    c.validate();
    return c;
}

std::string_view to_string(Condition c) {
    switch (c) {
        case Condition::convexity: return "convexity";
        case Condition::monotonicity: return "monotonicity";
        case Condition::zero_strike: return "zero_strike";
        case Condition::slope: return "slope";
        case Condition::nonnegativity: return "nonnegativity";
    }
    return "?";
}

bool ConsistencyReport::flags(Condition c) const {
    return std::any_of(violations.begin(), violations.end(), [c](const Violation& v) { return v.condition == c; });
}

ConsistencyReport check_consistency(const CallCurve& curve, double tol) {
    curve.validate();
    ConsistencyReport rep;
    const auto& q = curve.quotes;
    for (std::size_t i = 0; i + 2 < q.size(); ++i) {
        double lam = (q[i + 2].strike - q[i + 1].strike) / (q[i + 2].strike - q[i].strike);
        double eps = q[i + 1].price - lam * q[i].price - (1 - lam) * q[i + 2].price;
        if (eps > tol)
            rep.violations.push_back({Condition::convexity, {q[i].strike, q[i + 1].strike, q[i + 2].strike}, eps});
    }
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        double eps = q[i + 1].price - q[i].price;
        if (eps > tol) rep.violations.push_back({Condition::monotonicity, {q[i].strike, q[i + 1].strike}, eps});
    }
    if (q.front().strike == 0.0) {
        double gap = q.front().price - curve.s0;
        if (std::abs(gap) > tol) rep.violations.push_back({Condition::zero_strike, {0.0}, gap});
        if (q.size() > 1) {
            // one-sided difference at the smallest positive strike
            double k1 = q[1].strike;
            double eps = q.front().price - q[1].price - curve.DT * k1;
            if (eps > tol) rep.violations.push_back({Condition::slope, {0.0, k1}, eps});
        } else {
            rep.not_checkable.push_back(Condition::slope);
        }
    } else {
        rep.not_checkable.push_back(Condition::zero_strike);
        rep.not_checkable.push_back(Condition::slope);
    }
    for (const auto& c : q)
        if (c.price < -tol) rep.violations.push_back({Condition::nonnegativity, {c.strike}, -c.price});
    return rep;
}

PiecewisePayoff ArbPortfolio::terminal_payoff(double DT) const {
    return PiecewisePayoff::from_legs(calls, cash / DT, asset);
}

ArbPortfolio ArbPortfolio::scaled(double c) const {
    if (!(c > 0)) throw DomainError("portfolio scale must be > 0");
    ArbPortfolio out = *this;
    for (auto& leg : out.calls) leg.quantity *= c;
    out.asset *= c;
    out.cash *= c;
    out.epsilon *= c;
    out.intrinsic_bound *= c;
    return out;
}

double intrinsic_lower_bound(const PiecewisePayoff& g, double DT) {
    return DT * convex_minorant(g).infimum();
}

namespace {

double price_at(const CallCurve& curve, double K) {
    for (const auto& q : curve.quotes)
        if (q.strike == K) return q.price;
    throw DomainError("violation refers to an unquoted strike");
}

}  // namespace

ArbPortfolio construct_arbitrage(const CallCurve& curve, const Violation& v) {
    curve.validate();
    ArbPortfolio pf{v.condition, {}, 0.0, 0.0, 0.0, 0.0, {}};
    std::ostringstream cert;
    switch (v.condition) {
        case Condition::convexity: {
            double k1 = v.strikes.at(0), k2 = v.strikes.at(1), k3 = v.strikes.at(2);
            double lam = (k3 - k2) / (k3 - k1);
            pf.calls = {{k1, lam}, {k2, -1.0}, {k3, 1 - lam}};
            pf.epsilon = price_at(curve, k2) - lam * price_at(curve, k1) - (1 - lam) * price_at(curve, k3);
            cert << "butterfly " << k1 << "/" << k2 << "/" << k3 << " with lambda " << lam;
            break;
        }
        case Condition::monotonicity: {
            double k1 = v.strikes.at(0), k2 = v.strikes.at(1);
            pf.calls = {{k1, 1.0}, {k2, -1.0}};
            pf.epsilon = price_at(curve, k2) - price_at(curve, k1);
            cert << "call spread long " << k1 << " short " << k2;
            break;
        }
        case Condition::zero_strike: {
            double c0 = price_at(curve, 0.0);
            double sgn = c0 > curve.s0 ? -1.0 : 1.0;  // sell the dear side
            pf.calls = {{0.0, sgn}};
            pf.asset = -sgn;
            pf.epsilon = std::abs(c0 - curve.s0);
            cert << (sgn < 0 ? "short zero-strike call, long asset" : "long zero-strike call, short asset");
            break;
        }
        case Condition::slope: {
            double k1 = v.strikes.at(1);
            pf.calls = {{k1, 1.0}, {0.0, -1.0}};
            pf.cash = curve.DT * k1;
            pf.epsilon = price_at(curve, 0.0) - price_at(curve, k1) - curve.DT * k1;
            cert << "long call " << k1 << ", short zero-strike call, cash " << pf.cash;
            break;
        }
        case Condition::nonnegativity: {
            double k = v.strikes.at(0);
            pf.calls = {{k, 1.0}};
            pf.epsilon = -price_at(curve, k);
            cert << "long call " << k << " at a negative price";
            break;
        }
    }
    pf.intrinsic_bound = intrinsic_lower_bound(pf.terminal_payoff(curve.DT), curve.DT);
    cert << "; credit " << pf.epsilon << ", intrinsic wealth >= " << pf.intrinsic_bound;
    pf.certificate = cert.str();
    return pf;
}

AdmissibilityDecision call_admissibility(Direction dir, double K, double c0, const MarketParams& m) {
    m.validate();
    if (!(K > 0)) throw DomainError("strike must be > 0");
    double dC = bs_call(m.s0, K, m.T, m.sigma, m.r) - c0;
    double KD = K * m.DT();
    AdmissibilityDecision d;
    if (dir == Direction::long_position) d.slack = m.w0 + dC + m.alpha - atm_value(KD, m.T, m.sigma);
    else d.slack = m.w0 + m.alpha - dC - KD;
    d.pass = d.slack >= -1e-12 * (1 + std::abs(m.w0) + m.alpha + KD);
    return d;
}

std::pair<double, double> critical_strikes(double w0, double alpha, const MarketParams& m) {
    m.validate();
    double budget = w0 + alpha;
    if (!(budget > 0)) throw DomainError("critical strikes need w0 + alpha > 0");
    double DT = m.DT();
    double factor = 2 * norm_cdf(0.5 * m.sigma * std::sqrt(m.T)) - 1;
    return {budget / (DT * factor), budget / DT};
}

}  // namespace intrinsic
