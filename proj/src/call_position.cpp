#include "intrinsic/call_position.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "intrinsic/errors.hpp"
#include "intrinsic/numerics.hpp"
#include "intrinsic/pricing.hpp"

namespace intrinsic {

void CallPosition::validate() const {
    if (!(K > 0)) throw DomainError("call strike must be > 0");
    if (!(lambda >= 0)) throw DomainError("lambda must be >= 0");
    if (!std::isfinite(deltaC)) throw DomainError("deltaC must be finite");
}

CallProblem::CallProblem(const MarketParams& m, const CallPosition& pos) : m_(m), pos_(pos) {
    m_.validate();
    pos_.validate();
    if (!m_.z_decreasing())
        throw UnsupportedRegime("z(.;lambda) is not decreasing (need theta > 0 and p sigma > theta)");
    kd_ = pos_.K * m_.DT();
    if (std::abs(std::log(m_.s0 / kd_)) < 1e-12) throw DomainError("s0 equals the discounted strike");
    z0_ = z(0.0);
}

double CallProblem::z(double u) const { return intrinsic::z(m_, u, pos_.lambda, kd_, m_.alpha); }

LineBoundary CallProblem::line(Measure meas) const {
    return {m_.level(m_.s0), m_.level(kd_), m_.line_slope(meas)};
}

double CallProblem::zeta(double t, double sd) const {
    if (t < 0 || t > m_.T) throw DomainError("zeta: t outside [0,T]");
    double b = (std::log(sd / m_.s0) + 0.5 * m_.sigma * m_.sigma * t) / m_.sigma;
    double lt = t < m_.T ? expected_local_time(sd, kd_, m_.T - t, m_.sigma) : 0.0;
    return m_.phi_path(t, b) * (pos_.lambda * lt - m_.alpha);
}

double CallProblem::rstar(double M) const {
    if (M >= z0_) return 0.0;
    if (M < z(m_.T)) return m_.T;
    return find_root([&](double u) { return z(u) - M; }, 0.0, m_.T, 1e-10 * m_.T);
}

double CallProblem::expected_sup_J(double M) const {
    if (M < 0) throw DomainError("expected_sup_J needs M >= 0");
    double r = rstar(M);
    if (r == 0.0) return M;
    LineBoundary b = line(Measure::Qbar);
    double integral = integrate_from_zero([&](double u) { return gamma1(u, b) * (z(u) - M); }, r, 1e-11);
    return M + integral;
}

MaxPlusSolution CallProblem::solve(double w0) const {
    if (w0 < 0) throw DomainError("w0 must be >= 0");
    MaxPlusSolution sol;
    sol.budget = w0 + pos_.lambda * pos_.deltaC;
    double e0 = feasibility_integral();
    sol.minimal_w0 = std::max(0.0, e0 - pos_.lambda * pos_.deltaC);
    if (sol.budget >= z0_) {
        // constraint never binds: M is the whole budget
        sol.M = sol.budget;
        sol.rstar = 0.0;
        sol.feasible = true;
        sol.residual = 0.0;
        sol.utility = m_.cp() * m_.utility(sol.M);
        return sol;
    }
    if (e0 > sol.budget) {
        sol.feasible = false;
        return sol;
    }
    auto f = [&](double M) { return expected_sup_J(M) - sol.budget; };
    sol.M = f(0.0) == 0.0 ? 0.0 : find_root(f, 0.0, sol.budget, 1e-14 * (1 + sol.budget));
    sol.residual = -f(sol.M);
    if (std::abs(sol.residual) >= 1e-9 * (1 + w0))
        throw AccuracyError("M-equation residual above tolerance", sol.residual);
    sol.rstar = rstar(sol.M);
    sol.feasible = true;
    sol.utility = utility_at(sol.M);
    return sol;
}

double CallProblem::utility_at(double M) const {
    double r = rstar(M);
    double um = m_.utility(M);
    if (r == 0.0) return m_.cp() * um;
    LineBoundary b = line(Measure::Qbar);
    auto f = [&](double u) { return gamma1(u, b) * (m_.utility(std::max(z(u), 0.0)) - um); };
    // u_p(z) behaves like (r - u)^{1-p} near r when M = 0; u = r - (r/2) s^4 removes that
    double head = integrate_from_zero(f, 0.5 * r, 1e-12);
    double tail = integrate([&](double s) { return 2 * r * s * s * s * f(r - 0.5 * r * s * s * s * s); }, 0.0, 1.0, 1e-12);
    return m_.cp() * (um + head + tail);
}

double CallProblem::wealth_cdf(double w, double M, Measure meas) const {
    if (w < M) return 0.0;
    double r = rstar(w);
    if (r == 0.0) return 1.0;
    return 1.0 - hit_probability(line(meas), r);
}

double rstar(const MarketParams& m, const CallPosition& pos, double M) { return CallProblem(m, pos).rstar(M); }

double expected_sup_J(const MarketParams& m, const CallPosition& pos, double M) {
    return CallProblem(m, pos).expected_sup_J(M);
}

MaxPlusSolution solve_M(const MarketParams& m, const CallPosition& pos, double w0) {
    m.validate();
    if (!m.z_decreasing()) {
        MaxPlusSolution sol = solve_M_lattice(m, pos, w0);
        sol.lattice_fallback = true;
        return sol;
    }
    return CallProblem(m, pos).solve(w0);
}

double optimal_utility(const MarketParams& m, const CallPosition& pos, double w0) {
    auto sol = solve_M(m, pos, w0);
    if (!sol.feasible) throw InfeasibleError("call position infeasible for this initial wealth", sol.minimal_w0);
    return sol.utility;
}

ResultTable terminal_wealth_cdf(const MarketParams& m, const CallPosition& pos, double w0,
                                const std::vector<double>& grid, Measure meas) {
    CallProblem prob(m, pos);
    auto sol = prob.solve(w0);
    if (!sol.feasible) throw InfeasibleError("call position infeasible for this initial wealth", sol.minimal_w0);
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("wealth grid must be ascending");
    ResultTable tab("cdf", {"wealth_level", "cdf"});
    for (double w : grid) tab.add_row({w, prob.wealth_cdf(w, sol.M, meas)});
    return tab;
}

ResultTable lambda_sweep(const MarketParams& m, const CallPosition& pos, double w0, const std::vector<double>& lambdas) {
    ResultTable tab("call_sweep", {"lambda", "M", "rstar", "utility"});
    for (double lam : lambdas) {
        CallPosition p = pos;
        p.lambda = lam;
        auto sol = solve_M(m, p, w0);
        if (sol.feasible) tab.add_row({lam, sol.M, sol.rstar, sol.utility});
        else tab.add_row({lam, std::monostate{}, std::monostate{}, std::monostate{}});
    }
    return tab;
}

namespace {

// zeta on the lattice nodes; shared by every M so root finding only redoes the max
struct CallGrid {
    LatticeProcessSpec base;
    std::shared_ptr<std::vector<double>> zeta;  // (N+1) x nodes
    double start = 0.0;
    int line_node = 0;
};

CallGrid build_call_grid(const MarketParams& m, const CallPosition& pos, int N, double ratio, double width) {
    m.validate();
    pos.validate();
    if (N < 1) throw DomainError("lattice needs at least one time step");
    const double kd = pos.K * m.DT();
    const double x = m.level(m.s0), y = m.level(kd);
    const double beta = m.line_slope(Measure::Qbar);
    const double gap = std::abs(x - y);
    if (gap < 1e-12) throw DomainError("s0 equals the discounted strike");
    const double dt = m.T / N;
    int cells = std::max(1, static_cast<int>(std::lround(gap / std::sqrt(dt / ratio))));
    double dc = gap / cells;
    while (dt / (dc * dc) > 1.0 && cells > 1) dc = gap / --cells;

    const double reach = width * std::sqrt(m.T) + std::abs(beta) * m.T;
    const double lo = std::min(x, y) - reach, hi = std::max(x, y) + reach;
    CallGrid g;
    auto& s = g.base;
    s.horizon = m.T;
    s.time_steps = N;
    s.dc = dc;
    s.c_min = y + std::floor((lo - y) / dc) * dc;
    s.nodes = static_cast<int>(std::ceil((hi - s.c_min) / dc)) + 1;
    s.drift = -beta;
    s.measure = Measure::Qbar;
    g.start = x;
    g.line_node = static_cast<int>(std::lround((y - s.c_min) / dc));

    g.zeta = std::make_shared<std::vector<double>>(static_cast<std::size_t>(N + 1) * s.nodes);
    const double shift = m.theta() / m.p;
    for (int n = 0; n <= N; ++n) {
        double t = n * dt;
        for (int j = 0; j < s.nodes; ++j) {
            double X = s.level(j) + beta * t;
            double b = X - x + shift * t;
            double sd = m.discounted_spot(t, b);
            double lt = n < N ? expected_local_time(sd, kd, m.T - t, m.sigma) : 0.0;
            double zt = m.phi_path(t, b) * (pos.lambda * lt - m.alpha);
            // at T the obstacle is the positive part of the left limit
            (*g.zeta)[static_cast<std::size_t>(n) * s.nodes + j] = n < N ? zt : std::max(zt, 0.0);
        }
    }
    return g;
}

LatticeProcessSpec with_floor(const CallGrid& g, double M) {
    LatticeProcessSpec s = g.base;
    auto table = g.zeta;
    int J = s.nodes;
    double cmin = s.c_min, dc = s.dc;
    s.obstacle = [table, J, cmin, dc, M](int n, double, double c, int) {
        int j = static_cast<int>(std::lround((c - cmin) / dc));
        return std::max((*table)[static_cast<std::size_t>(n) * J + j], M);
    };
    return s;
}

}  // namespace

LatticeProcessSpec call_lattice_spec(const MarketParams& m, const CallPosition& pos, double M, int time_steps,
                                     double ratio, double width) {
    return with_floor(build_call_grid(m, pos, time_steps, ratio, width), M);
}

MaxPlusSolution solve_M_lattice(const MarketParams& m, const CallPosition& pos, double w0, int time_steps) {
    CallGrid g = build_call_grid(m, pos, time_steps, 0.5, 8.0);
    MaxPlusSolution sol;
    sol.budget = w0 + pos.lambda * pos.deltaC;
    auto value = [&](double M) { return snell_initial_value(with_floor(g, M), g.start); };
    double e0 = value(0.0);
    sol.minimal_w0 = std::max(0.0, e0 - pos.lambda * pos.deltaC);
    if (e0 > sol.budget) return sol;
    auto f = [&](double M) { return value(M) - sol.budget; };
    sol.M = f(sol.budget) <= 0 ? sol.budget : find_root(f, 0.0, sol.budget, 1e-12 * (1 + sol.budget));
    sol.residual = -f(sol.M);
    sol.feasible = true;
    auto res = snell_lattice(with_floor(g, sol.M), g.start);
    sol.utility = m.cp() * res.expect([&](double v) { return m.utility(std::max(v, 0.0)); });
    // binding horizon: first line node where zeta drops below M
    const auto& zt = *g.zeta;
    sol.rstar = m.T;
    for (int n = 0; n <= g.base.time_steps; ++n) {
        if (zt[static_cast<std::size_t>(n) * g.base.nodes + g.line_node] < sol.M) {
            sol.rstar = n * g.base.dt();
            break;
        }
    }
    return sol;
}

}  // namespace intrinsic
