#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace intrinsic {

using RealFn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod on [a,b] (b may be +inf). Throws AccuracyError when
/// the error estimate exceeds abs_tol (and 1e-9 relative).
double integrate(const RealFn& f, double a, double b, double abs_tol = 1e-9);

/// Integral over [0,b] of an integrand with an integrable u^{-3/2}-type
/// factor at 0, via the substitution u = v^2.
double integrate_from_zero(const RealFn& f, double b, double abs_tol = 1e-9);

/// Bracketed root of f on [lo,hi] (TOMS 748). f(lo), f(hi) must differ in sign.
double find_root(const RealFn& f, double lo, double hi, double x_tol);

/// Minimiser of f on [lo,hi] (Brent). Returns (argmin, min).
std::pair<double, double> minimise(const RealFn& f, double lo, double hi);

/// Composite Gauss-Legendre nodes/weights on [a,b]. Extra breakpoints inside
/// (a,b) are honoured as panel edges, so kinks there are integrated exactly.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_legendre_rule(double a, double b, int panels, std::vector<double> breakpoints = {});

}  // namespace intrinsic
