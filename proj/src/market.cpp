#include "intrinsic/market.hpp"

#include <cmath>

#include "intrinsic/errors.hpp"

namespace intrinsic {

Measure parse_measure(std::string_view s) {
    if (s == "P") return Measure::P;
    if (s == "Q") return Measure::Q;
    if (s == "Qbar") return Measure::Qbar;
    throw DomainError("unknown measure tag '" + std::string(s) + "' (expected P, Q or Qbar)");
}

std::string_view to_string(Measure m) {
    switch (m) {
        case Measure::P: return "P";
        case Measure::Q: return "Q";
        case Measure::Qbar: return "Qbar";
    }
    return "?";
}

DiscountCurve::DiscountCurve(double rate)
    : factor_([rate](double t) { return std::exp(-rate * t); }) {
    if (rate < 0) throw DomainError("discount rate must be >= 0");
}

DiscountCurve::DiscountCurve(std::function<double(double)> factor, double horizon)
    : factor_(std::move(factor)) {
    if (std::abs(factor_(0.0) - 1.0) > 1e-15) throw DomainError("discount curve must satisfy D(0) = 1");
    // coarse monotonicity screen
    double prev = 1.0;
    for (int i = 1; i <= 64; ++i) {
        double d = factor_(horizon * i / 64.0);
        if (!(d <= prev) || d <= 0) throw DomainError("discount curve must be positive and nonincreasing");
        prev = d;
    }
}

double DiscountCurve::operator()(double t) const { return factor_(t); }

void MarketParams::validate() const {
    if (!(s0 > 0)) throw DomainError("s0 must be > 0");
    if (!(sigma > 0)) throw DomainError("sigma must be > 0");
    if (!(T > 0)) throw DomainError("T must be > 0");
    if (!(p > 0 && p < 1)) throw DomainError("p must lie in (0,1)");
    if (!(r >= 0)) throw DomainError("r must be >= 0");
    if (!(w0 >= 0)) throw DomainError("w0 must be >= 0");
    if (!(alpha >= 0)) throw DomainError("alpha must be >= 0");
    if (!std::isfinite(mu) || !std::isfinite(theta())) throw DomainError("theta must be finite");
}

bool MarketParams::z_decreasing() const {
    double th = theta();
    return th > 0 && p * sigma > th;
}

double MarketParams::discount(double t) const {
    if (t < 0 || t > T * (1 + 1e-14)) throw DomainError("discount: t outside [0,T]");
    return std::exp(-r * t);
}

double MarketParams::spd_moment(double q) const {
    double th = theta();
    return std::exp(0.5 * q * q * th * th * T - q * (0.5 * th * th + r) * T);
}

double MarketParams::cp() const { return std::pow(spd_moment(1.0 - 1.0 / p), p); }

double MarketParams::utility(double w) const {
    if (w < 0) throw DomainError("utility of negative wealth");
    return std::pow(w, 1.0 - p) / (1.0 - p);
}

double MarketParams::inverse_utility(double u) const {
    if (u < 0) throw DomainError("utility value outside the range of u_p");
    return std::pow((1.0 - p) * u, 1.0 / (1.0 - p));
}

double MarketParams::phi_on_strike_line(double t, double Kd) const {
    if (!(Kd > 0)) throw DomainError("phi_on_strike_line: Kd must be > 0");
    if (t < 0 || t > T * (1 + 1e-14)) throw DomainError("phi_on_strike_line: t outside [0,T]");
    double th = theta();
    return std::pow(s0 / Kd, th / (sigma * p)) * std::exp(th / (2 * p * p) * (th - sigma * p) * t);
}

double MarketParams::phi_path(double t, double b) const {
    double k = theta() / p;
    return std::exp(-k * b + 0.5 * k * k * t);
}

double MarketParams::discounted_spot(double t, double b) const {
    return s0 * std::exp(sigma * b - 0.5 * sigma * sigma * t);
}

double MarketParams::level(double s) const { return std::log(s) / sigma; }

double MarketParams::q_drift(Measure m) const {
    switch (m) {
        case Measure::Q: return 0.0;
        case Measure::Qbar: return theta() / p;
        case Measure::P: return theta();
    }
    return 0.0;
}

double MarketParams::line_slope(Measure m) const { return 0.5 * sigma - q_drift(m); }

}  // namespace intrinsic
