#include "intrinsic/paths.hpp"

#include <cmath>

#include "intrinsic/errors.hpp"
#include "intrinsic/random.hpp"

namespace intrinsic {

PathBatch simulate_paths(const MarketParams& m, Measure measure, int n_paths, int n_steps, std::uint64_t seed) {
    if (n_paths < 1 || n_steps < 1) throw DomainError("simulate_paths: need n_paths >= 1 and n_steps >= 1");
    m.validate();
    PathBatch out;
    out.n_paths = n_paths;
    out.n_steps = n_steps;
    double dt = m.T / n_steps;
    out.times.resize(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) out.times[k] = m.T * k / n_steps;
    out.log_sd.resize(static_cast<std::size_t>(n_paths) * (n_steps + 1));

    double drift = (m.sigma * m.q_drift(measure) - 0.5 * m.sigma * m.sigma) * dt;
    double vol = m.sigma * std::sqrt(dt);
    double start = std::log(m.s0);
    for (int i = 0; i < n_paths; ++i) {
        RandomStream rng(seed, static_cast<std::uint64_t>(i));
        double* row = &out.log_sd[static_cast<std::size_t>(i) * (n_steps + 1)];
        row[0] = start;
        for (int k = 1; k <= n_steps; ++k) row[k] = row[k - 1] + drift + vol * rng.normal();
    }
    return out;
}

double bridge_cross_probability(double d0, double d1, double dt) {
    if (d0 <= 0 || d1 <= 0) return 1.0;
    return std::exp(-2.0 * d0 * d1 / dt);
}

}  // namespace intrinsic
