#include "intrinsic/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "intrinsic/errors.hpp"
#include "intrinsic/normal.hpp"

namespace intrinsic {

double discounted_call(double sd, double Kd, double tau, double sigma) {
    if (sd < 0 || Kd < 0 || tau < 0 || !(sigma > 0)) throw DomainError("discounted_call: bad arguments");
    if (Kd == 0) return sd;
    if (sd == 0) return 0.0;
    if (tau == 0) return std::max(sd - Kd, 0.0);
    double v = sigma * std::sqrt(tau);
    double d1 = (std::log(sd / Kd) + 0.5 * v * v) / v;
    return sd * norm_cdf(d1) - Kd * norm_cdf(d1 - v);
}

double discounted_put(double sd, double Kd, double tau, double sigma) {
    if (sd < 0 || Kd < 0 || tau < 0 || !(sigma > 0)) throw DomainError("discounted_put: bad arguments");
    if (Kd == 0) return 0.0;
    if (sd == 0) return Kd;
    if (tau == 0) return std::max(Kd - sd, 0.0);
    double v = sigma * std::sqrt(tau);
    double d1 = (std::log(sd / Kd) + 0.5 * v * v) / v;
    return Kd * norm_cdf(v - d1) - sd * norm_cdf(-d1);
}

double bs_call(double s, double K, double tau, double sigma, double r) {
    return discounted_call(s, K * std::exp(-r * tau), tau, sigma);
}

double bs_put(double s, double K, double tau, double sigma, double r) {
    return bs_call(s, K, tau, sigma, r) - s + K * std::exp(-r * tau);
}

double expected_local_time(double sd, double Kd, double tau, double sigma) {
    if (!(sd > 0) || !(Kd > 0)) throw DomainError("expected_local_time: sd and Kd must be > 0");
    // use the out-of-the-money side to avoid cancellation
    if (sd >= Kd) return discounted_put(sd, Kd, tau, sigma);
    return discounted_call(sd, Kd, tau, sigma);
}

double atm_value(double Kd, double tau, double sigma) {
    return Kd * (2.0 * norm_cdf(0.5 * sigma * std::sqrt(tau)) - 1.0);
}

double rho(const MarketParams& m, double t, double Kd) {
    if (t < 0 || t > m.T) throw DomainError("rho: t outside [0,T]");
    return m.phi_on_strike_line(t, Kd) * atm_value(Kd, m.T - t, m.sigma);
}

double z(const MarketParams& m, double u, double lambda, double Kd, double alpha) {
    if (lambda < 0) throw DomainError("z: lambda must be >= 0");
    return lambda * rho(m, u, Kd) - alpha * m.phi_on_strike_line(u, Kd);
}

}  // namespace intrinsic
