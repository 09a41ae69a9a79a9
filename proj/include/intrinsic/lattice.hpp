#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "intrinsic/market.hpp"

namespace intrinsic {

/// Trinomial lattice for a Brownian coordinate c with constant drift, state
/// grid c_j = c_min + j dc, and optional path flags carried as layers
/// (e.g. "barrier already hit").
struct LatticeProcessSpec {
    double horizon = 1.0;
    int time_steps = 100;
    double c_min = 0.0;
    double dc = 0.1;
    int nodes = 100;
    double drift = 0.0;  // drift of c per unit time under the lattice measure
    int layers = 1;
    /// Layer after arriving at level c while in layer l. Empty means no switching.
    std::function<int(int, double)> layer_update;
    /// Obstacle at time index n (t = n dt), level c, layer l.
    std::function<double(int, double, double, int)> obstacle;
    Measure measure = Measure::Qbar;

    void validate() const;
    double dt() const { return horizon / time_steps; }
    double level(int j) const { return c_min + j * dc; }
};

struct LatticeResult {
    int time_steps = 0;
    int nodes = 0;
    int layers = 1;
    double c_min = 0.0;
    double dc = 0.0;
    double dt = 0.0;
    /// Envelope for every (n, layer, j), flattened.
    std::vector<double> envelope;
    /// Law of the envelope at the first time it meets the obstacle, from the
    /// start node: (value, probability) atoms. Empty unless the start is a node.
    std::vector<std::pair<double, double>> stopped_law;
    /// Envelope at the start (initial value of the dominating martingale).
    double initial_value = 0.0;

    double at(int n, int layer, int j) const {
        return envelope[(static_cast<std::size_t>(n) * layers + layer) * nodes + j];
    }
    /// Linear interpolation in c of the envelope at time index n.
    double value(int n, double c, int layer = 0) const;
    /// Expectation of g over stopped_law.
    double expect(const std::function<double(double)>& g) const;
};

/// Backward induction envelope = max(obstacle, E[next]); with a start level on
/// the grid, also propagates probability mass forward until the first stop.
LatticeResult snell_lattice(const LatticeProcessSpec& spec, std::optional<double> start = std::nullopt);

/// Initial envelope only (no storage of the full grid), for root finding.
double snell_initial_value(const LatticeProcessSpec& spec, double start);

}  // namespace intrinsic
