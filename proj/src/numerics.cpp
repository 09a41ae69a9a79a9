#include "intrinsic/numerics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

#include "intrinsic/errors.hpp"

namespace intrinsic {

namespace bq = boost::math::quadrature;

double integrate(const RealFn& f, double a, double b, double abs_tol) {
    if (a == b) return 0.0;
    double err = 0.0, l1 = 0.0;
    double val = bq::gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-12, &err, &l1);
    if (!std::isfinite(val)) throw AccuracyError("quadrature produced a non-finite value", err);
    if (err > abs_tol && err > 1e-9 * l1) throw AccuracyError("quadrature did not converge", err);
    return val;
}

double integrate_from_zero(const RealFn& f, double b, double abs_tol) {
    if (b <= 0) return 0.0;
    auto g = [&f](double v) {
        if (v <= 0) return 0.0;
        return 2.0 * v * f(v * v);
    };
    return integrate(g, 0.0, std::sqrt(b), abs_tol);
}

double find_root(const RealFn& f, double lo, double hi, double x_tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0)) throw AccuracyError("find_root: root not bracketed", std::min(std::abs(flo), std::abs(fhi)));
    std::uintmax_t iters = 200;
    auto tol = [x_tol](double u, double v) { return std::abs(v - u) <= x_tol; };
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    double a = r.first, b = r.second;
    // pick the endpoint with the smaller residual; both are within x_tol
    double fa = f(a), fb = f(b);
    return std::abs(fa) <= std::abs(fb) ? a : b;
}

std::pair<double, double> minimise(const RealFn& f, double lo, double hi) {
    int bits = std::numeric_limits<double>::digits / 2;
    return boost::math::tools::brent_find_minima(f, lo, hi, bits);
}

QuadratureRule gauss_legendre_rule(double a, double b, int panels, std::vector<double> breakpoints) {
    constexpr int kOrder = 10;
    const auto& xs = bq::gauss<double, kOrder>::abscissa();
    const auto& ws = bq::gauss<double, kOrder>::weights();

    std::vector<double> edges{a};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double bp : breakpoints)
        if (bp > a && bp < b) edges.push_back(bp);
    edges.push_back(b);

    QuadratureRule rule;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        double lo = edges[s], hi = edges[s + 1];
        int n = std::max(1, static_cast<int>(std::ceil(panels * (hi - lo) / (b - a))));
        double h = (hi - lo) / n;
        for (int k = 0; k < n; ++k) {
            double c = lo + (k + 0.5) * h, r = 0.5 * h;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (xs[i] == 0) {
                    rule.nodes.push_back(c);
                    rule.weights.push_back(r * ws[i]);
                    continue;
                }
                rule.nodes.push_back(c - r * xs[i]);
                rule.weights.push_back(r * ws[i]);
                rule.nodes.push_back(c + r * xs[i]);
                rule.weights.push_back(r * ws[i]);
            }
        }
    }
    return rule;
}

}  // namespace intrinsic
