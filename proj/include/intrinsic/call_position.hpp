#pragma once

#include <vector>

#include "intrinsic/lattice.hpp"
#include "intrinsic/market.hpp"
#include "intrinsic/passage.hpp"
#include "intrinsic/result_table.hpp"

namespace intrinsic {

/// Long position in lambda calls struck at K, bought deltaC below the
/// replication price.
struct CallPosition {
    double K = 0.85;
    double lambda = 1.0;
    double deltaC = 0.02;

    void validate() const;
};

struct MaxPlusSolution {
    double M = 0.0;
    double rstar = 0.0;
    double utility = 0.0;
    bool feasible = false;
    double budget = 0.0;      // w0 + lambda deltaC
    double residual = 0.0;    // budget - E[sup J v M]
    double minimal_w0 = 0.0;  // smallest w0 for which the position is feasible
    bool lattice_fallback = false;  // recursive-z regime: solved on the lattice Snell oracle
};

/// Closed-form max-plus solution for a long call position in the regime
/// theta > 0, p sigma > theta, where z(.;lambda) is decreasing and
/// sup J = z(H) v 0 with H the first visit of S^D to K^D.
class CallProblem {
public:
    /// Throws UnsupportedRegime outside the decreasing-z regime.
    CallProblem(const MarketParams& m, const CallPosition& pos);

    const MarketParams& market() const { return m_; }
    const CallPosition& position() const { return pos_; }
    double Kd() const { return kd_; }

    double z(double u) const;
    /// Strike line in the coordinates of measure m (x = log s0/sigma, y = log Kd/sigma).
    LineBoundary line(Measure meas = Measure::Qbar) const;

    /// zeta_t at discounted spot sd: phi_t (lambda E_Q[L_T - L_t | F_t] - alpha).
    double zeta(double t, double sd) const;

    /// inf{u < T : z(u) < M} ^ T
    double rstar(double M) const;

    /// E_Qbar[(sup J) v M] = M + int_0^{r*} gamma1 (z - M). Needs M >= 0.
    double expected_sup_J(double M) const;

    /// Smallest budget w0 + lambda deltaC that admits the position: E[sup J].
    double feasibility_integral() const { return expected_sup_J(0.0); }

    /// Solves the M-equation for the given initial wealth.
    MaxPlusSolution solve(double w0) const;

    /// c_p (u_p(M) + int_0^{r*} gamma1 (u_p(z) - u_p(M)))
    double utility_at(double M) const;

    /// P(Ybar_T <= w) under the chosen measure, for the floor M.
    double wealth_cdf(double w, double M, Measure meas = Measure::Qbar) const;

private:
    MarketParams m_;
    CallPosition pos_;
    double kd_;
    double z0_;
};

/// Free-function forms of the operations.
double rstar(const MarketParams& m, const CallPosition& pos, double M);
double expected_sup_J(const MarketParams& m, const CallPosition& pos, double M);
/// Outside the decreasing-z regime this falls back to solve_M_lattice and
/// sets lattice_fallback.
MaxPlusSolution solve_M(const MarketParams& m, const CallPosition& pos, double w0);
double optimal_utility(const MarketParams& m, const CallPosition& pos, double w0);

/// CDF table (wealth_level, cdf) of Ybar_T on the given ascending grid.
ResultTable terminal_wealth_cdf(const MarketParams& m, const CallPosition& pos, double w0,
                                const std::vector<double>& grid, Measure meas = Measure::Qbar);

/// lambda sweep table (lambda, M, rstar, utility); infeasible rows have empty cells.
ResultTable lambda_sweep(const MarketParams& m, const CallPosition& pos, double w0, const std::vector<double>& lambdas);

/// Lattice description of the Snell problem for the obstacle zeta v M under Qbar,
/// with the start and the strike line on grid nodes.
LatticeProcessSpec call_lattice_spec(const MarketParams& m, const CallPosition& pos, double M, int time_steps,
                                     double ratio = 0.5, double width = 8.0);

/// Lattice route for the M-equation, used outside the decreasing-z regime.
MaxPlusSolution solve_M_lattice(const MarketParams& m, const CallPosition& pos, double w0, int time_steps = 400);

}  // namespace intrinsic
