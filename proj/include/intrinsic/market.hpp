#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace intrinsic {

/// Probability measure tag. Q is the pricing measure, Qbar the power-utility
/// measure (B^Qbar = B^Q - (theta/p) t), P the real-world measure.
enum class Measure { P, Q, Qbar };

Measure parse_measure(std::string_view s);
std::string_view to_string(Measure m);

/// Deterministic discount curve. Constant rate by default; any decreasing
/// factor with D(0) = 1 can be injected.
class DiscountCurve {
public:
    explicit DiscountCurve(double rate = 0.0);
    DiscountCurve(std::function<double(double)> factor, double horizon);

    double operator()(double t) const;

private:
    std::function<double(double)> factor_;
};

/// Black-Scholes-Merton market with a power-utility agent.
struct MarketParams {
    double s0 = 1.2;
    double mu = 0.035;
    double r = 0.01;
    double sigma = 0.5;
    double T = 2.0;
    double p = 0.75;
    double w0 = 0.16;
    double alpha = 0.4;

    /// Throws DomainError if any invariant fails.
    void validate() const;

    double theta() const { return (mu - r) / sigma; }

    /// theta > 0 and p*sigma > theta: z(.;lambda) is decreasing and the
    /// closed-form max-plus representation applies.
    bool z_decreasing() const;

    /// D_t = exp(-r t); t must lie in [0, T].
    double discount(double t) const;
    double DT() const { return discount(T); }

    /// E_P[H_T^q] for the lognormal state-price density.
    double spd_moment(double q) const;

    /// c_p = (E_P[H_T^{1-1/p}])^p
    double cp() const;

    /// u_p(w) = w^{1-p}/(1-p); negative wealth is a hard error.
    double utility(double w) const;
    double inverse_utility(double u) const;

    /// phi(t) = (s0/Kd)^{theta/(sigma p)} exp{theta (theta - sigma p) t / (2 p^2)}.
    double phi_on_strike_line(double t, double Kd) const;

    /// Path weight phi_t = D_t^{-1} xi_t^{-1} in terms of the Q-Brownian value b = B^Q_t.
    double phi_path(double t, double b) const;

    /// Discounted price S^D_t from the Q-Brownian value b.
    double discounted_spot(double t, double b) const;

    /// Log-price coordinate of a discounted level: log(s)/sigma.
    double level(double s) const;

    /// Drift of B^Q under the given measure: B^Q = W + shift * t.
    double q_drift(Measure m) const;

    /// Slope beta of the line {S^D = const} in the coordinates x + B^W of measure m.
    double line_slope(Measure m) const;
};

}  // namespace intrinsic
