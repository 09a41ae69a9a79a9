#pragma once

#include "intrinsic/market.hpp"

namespace intrinsic {

struct CallQuote {
    double strike;
    double maturity;
    double price;
};

/// Black-Scholes call. tau = 0 gives the payoff.
double bs_call(double s, double K, double tau, double sigma, double r);
/// Put by parity with bs_call.
double bs_put(double s, double K, double tau, double sigma, double r);

/// Call on the discounted (martingale) price: sd Phi(d1) - Kd Phi(d1 - v), v = sigma sqrt(tau).
double discounted_call(double sd, double Kd, double tau, double sigma);
double discounted_put(double sd, double Kd, double tau, double sigma);

/// E_Q[L_T - L_t | F_t] for the local time of S^D at Kd:
/// discounted_call - (sd - Kd)_+ (equivalently discounted_put - (Kd - sd)_+).
double expected_local_time(double sd, double Kd, double tau, double sigma);

/// Kd (2 Phi(sigma sqrt(tau)/2) - 1): the at-the-money value of either.
double atm_value(double Kd, double tau, double sigma);

/// rho(t) = phi(t) Kd (2 Phi(sigma sqrt(T-t)/2) - 1)
double rho(const MarketParams& m, double t, double Kd);

/// z(u; lambda) = lambda rho(u) - alpha phi(u)
double z(const MarketParams& m, double u, double lambda, double Kd, double alpha);

}  // namespace intrinsic
