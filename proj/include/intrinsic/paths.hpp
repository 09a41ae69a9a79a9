#pragma once

#include <cstdint>
#include <vector>

#include "intrinsic/market.hpp"

namespace intrinsic {

/// Simulated discounted log-prices log S^D_t on a uniform grid.
struct PathBatch {
    std::vector<double> times;   // n_steps + 1 points, times[0] = 0
    std::vector<double> log_sd;  // row-major, n_paths x (n_steps + 1)
    int n_paths = 0;
    int n_steps = 0;

    double log_price(int path, int step) const { return log_sd[static_cast<std::size_t>(path) * (n_steps + 1) + step]; }
};

/// Exact Gaussian-increment paths under the chosen measure over [0, T].
/// Path i draws from RandomStream(seed, i), so output is independent of
/// batching or thread layout.
PathBatch simulate_paths(const MarketParams& m, Measure measure, int n_paths, int n_steps, std::uint64_t seed);

/// Probability that a Brownian bridge over a step of length dt crosses a flat
/// level, given signed distances d0, d1 to the level at both ends (positive
/// on the starting side). Exact for Brownian motion with any constant drift.
double bridge_cross_probability(double d0, double d1, double dt);

}  // namespace intrinsic
