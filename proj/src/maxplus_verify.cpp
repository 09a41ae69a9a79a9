#include "intrinsic/maxplus_verify.hpp"

#include <algorithm>
#include <cmath>

#include "intrinsic/errors.hpp"
#include "intrinsic/paths.hpp"
#include "intrinsic/random.hpp"

namespace intrinsic {

namespace {

struct Tail {
    std::optional<double> hit;
    double x_T;
};

// Simulates x + W from (t0, x0) to the horizon; records the first visit of the
// line y + beta u (bridge-corrected, placed mid-step) and the terminal level.
Tail simulate_tail(RandomStream& rng, const LineBoundary& b, double t0, double x0, double horizon, int steps) {
    Tail out{std::nullopt, x0};
    double dt = (horizon - t0) / steps, sdt = std::sqrt(dt);
    double orient = b.y + b.beta * t0 > x0 ? 1.0 : -1.0;
    double xv = x0;
    double d0 = orient * (b.y + b.beta * t0 - xv);
    for (int k = 0; k < steps; ++k) {
        xv += sdt * rng.normal();
        if (!out.hit) {
            double t1 = t0 + (k + 1) * dt;
            double d1 = orient * (b.y + b.beta * t1 - xv);
            double pc = bridge_cross_probability(d0, d1, dt);
            if (d1 <= 0 || (pc > 0 && rng.uniform() < pc)) out.hit = t0 + (k + 0.5) * dt;
            d0 = d1;
        }
    }
    out.x_T = xv;
    return out;
}

struct Moments {
    double sum = 0, sum2 = 0;
    long n = 0;
    void add(double v) {
        sum += v;
        sum2 += v * v;
        ++n;
    }
    double mean() const { return sum / n; }
    double se() const {
        double m = mean();
        double var = std::max(0.0, sum2 / n - m * m) * n / std::max<long>(1, n - 1);
        return std::sqrt(var / n);
    }
};

}  // namespace

double VerifyReport::max_abs_z() const {
    double z = 0.0;
    for (const auto& r : rows) z = std::max(z, std::abs(r.z_score));
    return z;
}

VerifyReport verify_maxplus(const LineBoundary& b, const SupJEvaluator& sup_j, const XEvaluator& x_eval,
                            const VerifyConfig& cfg) {
    if (!sup_j || !x_eval) throw DomainError("verify_maxplus: evaluators missing");
    if (cfg.inner_paths < 2 || cfg.outer_states < 1 || cfg.steps < 1 || !(cfg.horizon > 0))
        throw DomainError("verify_maxplus: bad Monte Carlo sizes");
    VerifyReport rep;
    std::uint64_t stream = 0;
    const bool split = static_cast<bool>(cfg.part_a) && static_cast<bool>(cfg.part_b);

    for (double t : cfg.times) {
        if (t < 0 || t >= cfg.horizon) throw DomainError("verify_maxplus: time outside [0, T)");
        int steps = std::max(1, static_cast<int>(std::lround(cfg.steps * (cfg.horizon - t) / cfg.horizon)));
        int n_states = t == 0.0 ? 1 : cfg.outer_states;
        int n_inner = t == 0.0 ? cfg.inner_paths * cfg.outer_states : cfg.inner_paths;

        VerifyRow row;
        row.t = t;
        double var_sum = 0.0;
        for (int i = 0; i < n_states; ++i) {
            double xt = b.x;
            if (t > 0) {
                RandomStream outer(cfg.seed ^ 0x9e3779b97f4a7c15ull, stream++);
                xt = b.x + std::sqrt(t) * outer.normal();
            }
            Moments mom;
            for (int k = 0; k < n_inner; ++k) {
                RandomStream rng(cfg.seed, stream++);
                Tail tail = simulate_tail(rng, b, t, xt, cfg.horizon, steps);
                double v = sup_j(t, tail.hit, tail.x_T);
                mom.add(v);
                if (split) {
                    double a = cfg.part_a(t, tail.hit, tail.x_T);
                    double c = cfg.part_b(t, tail.hit, tail.x_T);
                    if (a == 0.0 || c == 0.0) {
                        rep.split_max_error = std::max(rep.split_max_error, std::abs(v - (a + c)));
                        ++rep.split_paths;
                    }
                }
            }
            double xv = x_eval(t, xt);
            double se = mom.se();
            row.mean_sup_J += mom.mean() / n_states;
            row.mean_X += xv / n_states;
            var_sum += se * se;
            if (se > 0) row.max_state_z = std::max(row.max_state_z, std::abs(mom.mean() - xv) / se);
        }
        row.deviation = row.mean_sup_J - row.mean_X;
        row.se = std::sqrt(var_sum) / n_states;
        row.z_score = row.se > 0 ? row.deviation / row.se : (row.deviation == 0 ? 0.0 : INFINITY);
        rep.rows.push_back(row);
    }

    if (cfg.girsanov_shift) {
        // simulate the reference Brownian motion and reweight to the simulation measure
        double k = *cfg.girsanov_shift;
        LineBoundary ref{b.x, b.y, b.beta + k};
        Moments mom;
        int n = cfg.inner_paths * cfg.outer_states;
        for (int i = 0; i < n; ++i) {
            RandomStream rng(cfg.seed + 0x5bd1e995ull, static_cast<std::uint64_t>(i));
            Tail tail = simulate_tail(rng, ref, 0.0, b.x, cfg.horizon, cfg.steps);
            double w_ref = tail.x_T - b.x;
            double weight = std::exp(k * w_ref - 0.5 * k * k * cfg.horizon);
            mom.add(weight * sup_j(0.0, tail.hit, tail.x_T - k * cfg.horizon));
        }
        rep.measure_change_value = mom.mean();
        rep.measure_change_se = mom.se();
    }
    return rep;
}

}  // namespace intrinsic
