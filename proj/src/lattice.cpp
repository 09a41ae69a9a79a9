#include "intrinsic/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "intrinsic/errors.hpp"

namespace intrinsic {

void LatticeProcessSpec::validate() const {
    if (!(horizon > 0) || time_steps < 1 || nodes < 4 || !(dc > 0) || layers < 1)
        throw DomainError("lattice: bad grid sizes");
    if (!obstacle) throw DomainError("lattice: obstacle evaluator missing");
    double q = dt() / (dc * dc);
    double skew = std::abs(drift) * dt() / dc;
    if (q > 1.0 || skew > q) throw DomainError("lattice: transition probabilities would be negative (refine dc or dt)");
}

namespace {

struct Kernel {
    double pu, pm, pd;
};

Kernel kernel(const LatticeProcessSpec& s) {
    double dt = s.dt();
    double q = dt / (s.dc * s.dc);
    double skew = s.drift * dt / s.dc;
    return {0.5 * (q + skew), 1.0 - q, 0.5 * (q - skew)};
}

std::vector<int> layer_table(const LatticeProcessSpec& s) {
    std::vector<int> next(static_cast<std::size_t>(s.layers) * s.nodes);
    for (int l = 0; l < s.layers; ++l)
        for (int j = 0; j < s.nodes; ++j)
            next[static_cast<std::size_t>(l) * s.nodes + j] = s.layer_update ? s.layer_update(l, s.level(j)) : l;
    return next;
}

// One backward step: cur <- max(obstacle(n), E[next slice]).
void backward_step(const LatticeProcessSpec& s, const Kernel& k, const std::vector<int>& next_layer, int n,
                   const std::vector<double>& next, std::vector<double>& cur) {
    const int J = s.nodes;
    const double t = n * s.dt();
    for (int l = 0; l < s.layers; ++l) {
        const int* nl = &next_layer[static_cast<std::size_t>(l) * J];
        auto nv = [&](int j) { return next[static_cast<std::size_t>(nl[j]) * J + j]; };
        double* row = &cur[static_cast<std::size_t>(l) * J];
        for (int j = 1; j + 1 < J; ++j) row[j] = k.pu * nv(j + 1) + k.pm * nv(j) + k.pd * nv(j - 1);
        row[0] = row[1];
        row[J - 1] = row[J - 2];
        for (int j = 0; j < J; ++j) row[j] = std::max(row[j], s.obstacle(n, t, s.level(j), l));
    }
}

void terminal_slice(const LatticeProcessSpec& s, std::vector<double>& cur) {
    const int J = s.nodes;
    for (int l = 0; l < s.layers; ++l)
        for (int j = 0; j < J; ++j)
            cur[static_cast<std::size_t>(l) * J + j] = s.obstacle(s.time_steps, s.horizon, s.level(j), l);
}

double interpolate(const double* row, int J, double c_min, double dc, double c) {
    double pos = (c - c_min) / dc;
    if (pos < 0 || pos > J - 1) throw DomainError("lattice: query level outside the grid");
    int j = static_cast<int>(std::floor(pos));
    double f = pos - j;
    if (f < 1e-9) return row[j];
    if (f > 1 - 1e-9) return row[j + 1];
    if (j >= 1 && j + 2 < J) {
        // cubic Lagrange through j-1 .. j+2
        double a = row[j - 1], b = row[j], c2 = row[j + 1], d = row[j + 2];
        double u = f;
        return a * (-u * (u - 1) * (u - 2) / 6) + b * ((u + 1) * (u - 1) * (u - 2) / 2) +
               c2 * (-(u + 1) * u * (u - 2) / 2) + d * ((u + 1) * u * (u - 1) / 6);
    }
    return row[j] * (1 - f) + row[j + 1] * f;
}

int start_layer(const LatticeProcessSpec& s, double start) {
    return s.layer_update ? s.layer_update(0, start) : 0;
}

}  // namespace

double LatticeResult::value(int n, double c, int layer) const {
    const double* row = &envelope[(static_cast<std::size_t>(n) * layers + layer) * nodes];
    return interpolate(row, nodes, c_min, dc, c);
}

double LatticeResult::expect(const std::function<double(double)>& g) const {
    double acc = 0.0;
    for (const auto& [v, p] : stopped_law) acc += p * g(v);
    return acc;
}

LatticeResult snell_lattice(const LatticeProcessSpec& s, std::optional<double> start) {
    s.validate();
    const Kernel k = kernel(s);
    const auto next_layer = layer_table(s);
    const int N = s.time_steps, J = s.nodes, L = s.layers;
    const std::size_t slice = static_cast<std::size_t>(L) * J;

    LatticeResult res;
    res.time_steps = N;
    res.nodes = J;
    res.layers = L;
    res.c_min = s.c_min;
    res.dc = s.dc;
    res.dt = s.dt();
    res.envelope.resize((N + 1) * slice);

    std::vector<double> cur(slice), next(slice);
    terminal_slice(s, next);
    std::copy(next.begin(), next.end(), res.envelope.begin() + N * slice);
    for (int n = N - 1; n >= 0; --n) {
        backward_step(s, k, next_layer, n, next, cur);
        std::copy(cur.begin(), cur.end(), res.envelope.begin() + n * slice);
        std::swap(cur, next);
    }
    if (!start) return res;

    int l0 = start_layer(s, *start);
    res.initial_value = res.value(0, *start, l0);
    double pos = (*start - s.c_min) / s.dc;
    int j0 = static_cast<int>(std::lround(pos));
    if (std::abs(pos - j0) > 1e-7) return res;

    // forward propagation of mass, absorbed where the envelope meets the obstacle
    std::unordered_map<double, double> atoms;
    std::vector<double> mass(slice, 0.0), nmass(slice, 0.0);
    mass[static_cast<std::size_t>(l0) * J + j0] = 1.0;
    for (int n = 0; n <= N; ++n) {
        const double t = n * s.dt();
        std::fill(nmass.begin(), nmass.end(), 0.0);
        for (int l = 0; l < L; ++l) {
            for (int j = 0; j < J; ++j) {
                double w = mass[static_cast<std::size_t>(l) * J + j];
                if (w == 0) continue;
                double obs = s.obstacle(n, t, s.level(j), l);
                double env = res.at(n, l, j);
                if (n == N || env <= obs + 1e-13 * (1 + std::abs(obs))) {
                    atoms[obs] += w;
                    continue;
                }
                const int* nl = &next_layer[static_cast<std::size_t>(l) * J];
                int jc = std::clamp(j, 1, J - 2);
                nmass[static_cast<std::size_t>(nl[jc + 1]) * J + jc + 1] += w * k.pu;
                nmass[static_cast<std::size_t>(nl[jc]) * J + jc] += w * k.pm;
                nmass[static_cast<std::size_t>(nl[jc - 1]) * J + jc - 1] += w * k.pd;
            }
        }
        std::swap(mass, nmass);
    }
    res.stopped_law.assign(atoms.begin(), atoms.end());
    std::sort(res.stopped_law.begin(), res.stopped_law.end());
    return res;
}

double snell_initial_value(const LatticeProcessSpec& s, double start) {
    s.validate();
    const Kernel k = kernel(s);
    const auto next_layer = layer_table(s);
    const std::size_t slice = static_cast<std::size_t>(s.layers) * s.nodes;
    std::vector<double> cur(slice), next(slice);
    terminal_slice(s, next);
    for (int n = s.time_steps - 1; n >= 0; --n) {
        backward_step(s, k, next_layer, n, next, cur);
        std::swap(cur, next);
    }
    int l0 = start_layer(s, start);
    return interpolate(&next[static_cast<std::size_t>(l0) * s.nodes], s.nodes, s.c_min, s.dc, start);
}

}  // namespace intrinsic
