#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace intrinsic {

/// Brownian motion started at x against the line y + beta t.
struct LineBoundary {
    double x;
    double y;
    double beta;

    double gap() const { return y - x; }
    /// True when the boundary lies above the start.
    bool upward() const { return y > x; }
};

/// Gaussian density with mean x and variance t.
double gamma0(double v, double t, double x);

/// First-passage density of x + W to the line y + beta u (Bachelier-Levy).
double gamma1(double u, const LineBoundary& b);

/// Density of x + W_t at v on paths that have not met the line by t
/// (zero on the far side of y + beta t).
double gamma2(double v, double t, const LineBoundary& b);

/// P(H <= t): integral of gamma1 over [0, t], in closed form.
double hit_probability(const LineBoundary& b, double t);

/// Integral of gamma2 over levels <= v (start below) or >= v (start above).
double survival_mass(double v, double t, const LineBoundary& b);

/// P(sup_{s<=tau} (W_s + nu s) >= h) for h >= 0.
double max_crossing_probability(double h, double nu, double tau);

/// Laplace transform E[exp(-s H) 1{H < inf}] of the first-passage time.
std::complex<double> first_passage_transform(std::complex<double> s, const LineBoundary& b);

struct LaplaceOptions {
    double A = 18.4;   // discretisation error ~ exp(-A)
    int n = 38;        // terms before Euler averaging
    int m = 11;        // binomial averaging order
    double tolerance = 1e-7;  // accuracy failure threshold on the Euler residual
};

/// Abate-Whitt Euler inversion of a Laplace transform at t > 0.
/// Throws AccuracyError when successive Euler sums disagree by more than the tolerance.
double laplace_invert(const std::function<std::complex<double>(std::complex<double>)>& F, double t,
                      const LaplaceOptions& opt = {});

/// Monte Carlo first passage of x + W against the line, with per-step
/// Brownian-bridge crossing detection. Path i uses RandomStream(seed, i).
struct PassageSample {
    std::vector<double> hit_times;         // hits in [0, horizon]
    std::vector<double> survivor_levels;   // x + W_horizon on surviving paths
    int n_paths = 0;
};
PassageSample simulate_first_passage(const LineBoundary& b, double horizon, int n_paths, int n_steps,
                                     std::uint64_t seed);

/// Kolmogorov-Smirnov distance between an empirical (possibly defective)
/// sample of n_total draws and a reference CDF. `end` is the right edge of
/// the support, checked as well so missing mass is detected.
double ks_distance(std::vector<double> sample, int n_total, const std::function<double(double)>& cdf, double end);

/// Two-sided KS critical value for n draws at 99% (asymptotic).
double ks_critical_99(int n);

}  // namespace intrinsic
