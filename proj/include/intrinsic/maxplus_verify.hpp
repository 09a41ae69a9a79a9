#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "intrinsic/passage.hpp"

namespace intrinsic {

/// Running supremum of the index process J over [t, T] along one simulated
/// continuation, given the first visit `hit` of the line after t (if any) and
/// the terminal level x_T. Levels are in the coordinates x + W of the
/// simulation measure.
using SupJEvaluator = std::function<double(double t, std::optional<double> hit, double x_T)>;

/// Candidate supermartingale X(t, x_t).
using XEvaluator = std::function<double(double t, double x_t)>;

struct VerifyConfig {
    std::vector<double> times{0.0};
    double horizon = 1.0;
    int outer_states = 16;  // sampled states per t > 0 (t = 0 uses the start only)
    int inner_paths = 4000;
    int steps = 1024;       // time steps over [0, horizon]
    std::uint64_t seed = 1;
    /// Drift of the simulation Brownian motion relative to the reference
    /// measure; enables the measure-change check when set.
    std::optional<double> girsanov_shift;
    /// Optional split J = J_a + J_b (supports on the line and at T) for the
    /// additive-split check.
    SupJEvaluator part_a;
    SupJEvaluator part_b;
};

struct VerifyRow {
    double t = 0.0;
    double mean_sup_J = 0.0;  // average over outer states of the inner estimates
    double mean_X = 0.0;
    double deviation = 0.0;   // mean_sup_J - mean_X
    double se = 0.0;          // standard error of the deviation
    double z_score = 0.0;
    double max_state_z = 0.0; // largest |z| over individual outer states
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    /// Additive split sup(J1 + J2) = sup J1 + sup J2 on paths where the hit
    /// part and the terminal part have disjoint support.
    double split_max_error = 0.0;
    long split_paths = 0;
    /// X_0 recomputed under the reference measure with the density weight.
    std::optional<double> measure_change_value;
    std::optional<double> measure_change_se;

    double max_abs_z() const;
    bool within(double k) const { return max_abs_z() <= k; }
};

/// Nested Monte Carlo check that X_t = E[sup_{t<=u<=T} J_u | F_t] at the
/// configured times, for index processes living on the line `b` plus T.
VerifyReport verify_maxplus(const LineBoundary& b, const SupJEvaluator& sup_j, const XEvaluator& x_eval,
                            const VerifyConfig& cfg);

}  // namespace intrinsic
