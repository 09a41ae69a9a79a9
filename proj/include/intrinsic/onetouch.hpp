#pragma once

#include <string_view>
#include <vector>

#include "intrinsic/lattice.hpp"
#include "intrinsic/market.hpp"
#include "intrinsic/passage.hpp"
#include "intrinsic/result_table.hpp"

namespace intrinsic {

/// Short one-touch on the discounted barrier S^D >= B^D (B^D = B D_T), sold
/// `premium` above its replication price, optionally hedged with 1/(B-K)
/// calls at K plus a forward sale at the barrier.
struct OneTouchSpec {
    double B = 1.9;
    double K = 1.3;
    double premium = 0.02;
    double w0 = 0.1;
    double alpha = 0.1;

    void validate(const MarketParams& m) const;
};

enum class HedgeMode { semi_static, dynamic_only, no_sale };
HedgeMode parse_hedge_mode(std::string_view s);
std::string_view to_string(HedgeMode mode);

/// Hobson package payoff C~0_T - C0_T: (S_T-K)_+/(B-K) without a hit,
/// (K-S_T)_+/(B-K) after a hit.
double hobson_payoff(double s_T, bool hit, const OneTouchSpec& spec);

/// E_Q[D_T 1{H_B <= T}] from the gamma1 integral.
double onetouch_price(const MarketParams& m, double B);
/// Same price from the closed-form barrier-crossing probability.
double onetouch_price_closed_form(const MarketParams& m, double B);

/// Kd (2 Phi(sigma sqrt(T-u)/2) - 1)/(B-K) - alpha
double varphi_Q(double u, const OneTouchSpec& spec, const MarketParams& m);

/// Hedge strike with the cheapest superhedge: argmin_K C(K)/(B-K) on (0,B).
double hobson_optimal_strike(const MarketParams& m, double B);

struct OneTouchResult {
    HedgeMode mode = HedgeMode::no_sale;
    bool feasible = false;
    double M = 0.0;
    double utility = 0.0;
    double ce = 0.0;
    double minimal_w0 = 0.0;    // smallest w0 with a feasible position
    double expected_sup_J = 0.0;  // E_Qbar[sup J] (budget needed at M = 0)
};

/// Law of sup J for the semi-static hedge under Qbar, tabulated on
/// quadrature nodes: atoms on first visits of the K-line after the barrier
/// hit, a continuous terminal part on no-hit paths, and the remaining mass at 0.
class SemiStaticLaw {
public:
    SemiStaticLaw(const OneTouchSpec& spec, const MarketParams& m, int panels = 240);

    /// E_Qbar[g(sup J)]
    double expect(const std::function<double(double)>& g) const;
    double expect_floor(double M) const;  // E[(sup J) v M]

    double mass_hit_part() const { return p_hit_; }
    double mass_terminal_part() const { return p_term_; }
    double barrier_hit_probability() const { return p_barrier_; }

private:
    std::vector<double> hit_w_, hit_j_;    // weights and J values on the K-line part
    std::vector<double> term_w_, term_j_;  // weights and J values at T
    double p_hit_ = 0.0, p_term_ = 0.0, p_zero_ = 0.0, p_barrier_ = 0.0;
};

/// Density of the first visit to the K-line after the first barrier hit
/// (convolution of the two first-passage densities, in closed form).
double semi_static_hit_density(double u, const OneTouchSpec& spec, const MarketParams& m);

OneTouchResult utility_semi_static(const OneTouchSpec& spec, const MarketParams& m);

struct OneTouchLatticeOptions {
    int time_steps = 400;
    double ratio = 0.5;
    double width = 8.0;
};

/// Lattice for the zeta-hat obstacle (Qbar units) with a hit layer.
/// Dynamic-only puts the start and the barrier on nodes; semi-static puts the
/// barrier and the K-line on nodes.
LatticeProcessSpec onetouch_lattice_spec(HedgeMode mode, const OneTouchSpec& spec, const MarketParams& m, double M,
                                         const OneTouchLatticeOptions& opt = {});
double onetouch_lattice_start(const MarketParams& m);

OneTouchResult utility_dynamic_only(const OneTouchSpec& spec, const MarketParams& m,
                                    const OneTouchLatticeOptions& opt = {});
OneTouchResult utility_no_sale(const OneTouchSpec& spec, const MarketParams& m);
OneTouchResult utility_for(HedgeMode mode, const OneTouchSpec& spec, const MarketParams& m,
                           const OneTouchLatticeOptions& opt = {});

/// zeta-hat in Q units (discounted currency) for the semi-static or
/// dynamic-only position at time t < T, discounted spot sd, hit flag.
double zeta_hat(HedgeMode mode, const OneTouchSpec& spec, const MarketParams& m, double t, double sd, bool hit);

/// Deterministic wealth with the same objective value: ((1-p) U / c_p)^{1/(1-p)}.
double certainty_equivalent(double utility, const MarketParams& m);

enum class SweepVariable { w0, K };

/// Rows (w0, mode, M, utility, ce, feasible) for a w0 grid, or (K, ce) for a K grid.
ResultTable sweep(HedgeMode mode, SweepVariable variable, const std::vector<double>& grid, const OneTouchSpec& spec,
                  const MarketParams& m, const OneTouchLatticeOptions& opt = {});

}  // namespace intrinsic
