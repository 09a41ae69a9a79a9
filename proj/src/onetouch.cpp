#include "intrinsic/onetouch.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "intrinsic/errors.hpp"
#include "intrinsic/numerics.hpp"
#include "intrinsic/pricing.hpp"

namespace intrinsic {

void OneTouchSpec::validate(const MarketParams& m) const {
    m.validate();
    if (!(K > 0) || !(K < B)) throw DomainError("one-touch spec needs 0 < K < B");
    if (!(premium >= 0)) throw DomainError("premium must be >= 0");
    if (!(w0 >= 0)) throw DomainError("w0 must be >= 0");
    if (!(alpha >= 0)) throw DomainError("alpha must be >= 0");
    if (!(m.s0 < B * m.DT())) throw DomainError("barrier already touched (s0 >= B D_T)");
}

HedgeMode parse_hedge_mode(std::string_view s) {
    if (s == "semi_static") return HedgeMode::semi_static;
    if (s == "dynamic_only") return HedgeMode::dynamic_only;
    if (s == "no_sale") return HedgeMode::no_sale;
    throw DomainError("unknown hedge mode '" + std::string(s) + "'");
}

std::string_view to_string(HedgeMode mode) {
    switch (mode) {
        case HedgeMode::semi_static: return "semi_static";
        case HedgeMode::dynamic_only: return "dynamic_only";
        case HedgeMode::no_sale: return "no_sale";
    }
    return "?";
}

double hobson_payoff(double s_T, bool hit, const OneTouchSpec& spec) {
    if (s_T < 0) throw DomainError("hobson_payoff: negative spot");
    if (!(spec.K > 0) || !(spec.K < spec.B)) throw DomainError("hobson_payoff needs 0 < K < B");
    double leg = hit ? std::max(spec.K - s_T, 0.0) : std::max(s_T - spec.K, 0.0);
    return leg / (spec.B - spec.K);
}

namespace {

LineBoundary barrier_line(const MarketParams& m, double B, Measure meas) {
    return {m.level(m.s0), m.level(B * m.DT()), m.line_slope(meas)};
}

// P(no barrier hit before T) from discounted level sd at time t; drift of
// log(S^D)/sigma is -sigma/2 under Q and +sigma/2 under the share measure
double no_hit_probability(const MarketParams& m, double Bd, double sd, double tau, bool share) {
    if (sd >= Bd) return 0.0;
    double h = (std::log(Bd) - std::log(sd)) / m.sigma;
    double nu = share ? 0.5 * m.sigma : -0.5 * m.sigma;
    return 1.0 - max_crossing_probability(h, nu, tau);
}

}  // namespace

double onetouch_price(const MarketParams& m, double B) {
    m.validate();
    double DT = m.DT();
    if (m.s0 >= B * DT) return DT;
    LineBoundary line = barrier_line(m, B, Measure::Q);
    return DT * integrate_from_zero([&](double u) { return gamma1(u, line); }, m.T, 1e-12);
}

double onetouch_price_closed_form(const MarketParams& m, double B) {
    m.validate();
    double DT = m.DT();
    if (m.s0 >= B * DT) return DT;
    return DT * hit_probability(barrier_line(m, B, Measure::Q), m.T);
}

double varphi_Q(double u, const OneTouchSpec& spec, const MarketParams& m) {
    if (u < 0 || u > m.T) throw DomainError("varphi_Q: u outside [0,T]");
    return atm_value(spec.K * m.DT(), m.T - u, m.sigma) / (spec.B - spec.K) - spec.alpha;
}

double hobson_optimal_strike(const MarketParams& m, double B) {
    m.validate();
    auto cost = [&](double K) { return bs_call(m.s0, K, m.T, m.sigma, m.r) / (B - K); };
    return minimise(cost, 1e-6 * B, B * (1 - 1e-6)).first;
}

double zeta_hat(HedgeMode mode, const OneTouchSpec& spec, const MarketParams& m, double t, double sd, bool hit) {
    if (t < 0 || t > m.T) throw DomainError("zeta_hat: t outside [0,T]");
    if (t == m.T) return -spec.alpha;
    double tau = m.T - t, DT = m.DT();
    double Kd = spec.K * DT, Bd = spec.B * DT;
    switch (mode) {
        case HedgeMode::semi_static: {
            if (hit) return -spec.alpha + expected_local_time(sd, Kd, tau, m.sigma) / (spec.B - spec.K);
            double v = discounted_put(sd, Kd, tau, m.sigma) + sd * no_hit_probability(m, Bd, sd, tau, true) -
                       Kd * no_hit_probability(m, Bd, sd, tau, false);
            return -spec.alpha + v / (spec.B - spec.K);
        }
        case HedgeMode::dynamic_only: {
            if (hit) return -spec.alpha;
            return -spec.alpha + sd / spec.B - DT * (1.0 - no_hit_probability(m, Bd, sd, tau, false));
        }
        case HedgeMode::no_sale: return -spec.alpha;
    }
    return -spec.alpha;
}

double semi_static_hit_density(double u, const OneTouchSpec& spec, const MarketParams& m) {
    if (u <= 0) return 0.0;
    double beta = m.line_slope(Measure::Qbar);
    double x = m.level(m.s0), yB = m.level(spec.B * m.DT()), yK = m.level(spec.K * m.DT());
    // both legs run against lines of slope beta, so the convolution is one
    // passage over the total distance, reweighted for the downward leg
    double down = yB - yK;
    return std::exp(2 * beta * down) * gamma1(u, LineBoundary{x, x + (yB - x) + down, beta});
}

SemiStaticLaw::SemiStaticLaw(const OneTouchSpec& spec, const MarketParams& m, int panels) {
    spec.validate(m);
    if (!m.z_decreasing())
        throw UnsupportedRegime("semi-static representation needs theta > 0 and p sigma > theta");
    const double DT = m.DT(), T = m.T;
    const double Kd = spec.K * DT, Bd = spec.B * DT;
    const double x = m.level(m.s0), yB = m.level(Bd);
    const double beta = m.line_slope(Measure::Qbar);
    const double shift = m.theta() / m.p;
    LineBoundary first{x, yB, beta};
    p_barrier_ = hit_probability(first, T);

    // K-line visits after the barrier: J = phi(u) max(varphi_Q(u), 0), positive before u0
    double u0 = T;
    if (varphi_Q(0.0, spec, m) <= 0) u0 = 0.0;
    else if (spec.alpha > 0)
        u0 = find_root([&](double u) { return varphi_Q(u, spec, m); }, 0.0, T, 1e-14);
    if (u0 > 0) {
        auto rule = gauss_legendre_rule(0.0, u0, panels);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double u = rule.nodes[i];
            double w = rule.weights[i] * semi_static_hit_density(u, spec, m);
            hit_w_.push_back(w);
            hit_j_.push_back(m.phi_on_strike_line(u, Kd) * std::max(varphi_Q(u, spec, m), 0.0));
            p_hit_ += w;
        }
    }

    // no-hit paths: J_T = phi_T (-alpha + (S^D_T - Kd)_+/(B-K))_+, positive above v_min
    const double top = yB + beta * T;
    const double sd_min = Kd + spec.alpha * (spec.B - spec.K);
    const double b_min = (std::log(sd_min / m.s0) + 0.5 * m.sigma * m.sigma * T) / m.sigma;
    const double v_min = x + b_min - shift * T;
    if (v_min < top) {
        auto rule = gauss_legendre_rule(v_min, top, panels);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double v = rule.nodes[i];
            double b = v - x + shift * T;
            double sd = m.discounted_spot(T, b);
            double j = m.phi_path(T, b) * std::max(-spec.alpha + std::max(sd - Kd, 0.0) / (spec.B - spec.K), 0.0);
            double w = rule.weights[i] * gamma2(v, T, first);
            term_w_.push_back(w);
            term_j_.push_back(j);
            p_term_ += w;
        }
    }
    p_zero_ = 1.0 - p_hit_ - p_term_;
    if (p_zero_ < -1e-9) throw AccuracyError("semi-static law has negative residual mass", p_zero_);
    p_zero_ = std::max(p_zero_, 0.0);
}

double SemiStaticLaw::expect(const std::function<double(double)>& g) const {
    double acc = p_zero_ * g(0.0);
    for (std::size_t i = 0; i < hit_w_.size(); ++i) acc += hit_w_[i] * g(hit_j_[i]);
    for (std::size_t i = 0; i < term_w_.size(); ++i) acc += term_w_[i] * g(term_j_[i]);
    return acc;
}

double SemiStaticLaw::expect_floor(double M) const {
    return expect([M](double j) { return std::max(j, M); });
}

namespace {

OneTouchResult finish(HedgeMode mode, const MarketParams& m, const OneTouchSpec& spec, double e0,
                      const std::function<double(double)>& floor_value,
                      const std::function<double(double)>& utility_given_M) {
    OneTouchResult res;
    res.mode = mode;
    res.expected_sup_J = e0;
    res.minimal_w0 = std::max(0.0, e0 - spec.premium);
    double budget = spec.w0 + spec.premium;
    if (e0 > budget) return res;
    auto f = [&](double M) { return floor_value(M) - budget; };
    double fb = f(budget);
    res.M = fb <= 0 ? budget : find_root(f, 0.0, budget, 1e-13 * (1 + budget));
    res.feasible = true;
    res.utility = utility_given_M(res.M);
    res.ce = certainty_equivalent(res.utility, m);
    return res;
}

struct SemiStaticSolver {
    SemiStaticLaw law;
    SemiStaticSolver(const OneTouchSpec& s, const MarketParams& m) : law(s, m) {}
    OneTouchResult solve(const OneTouchSpec& spec, const MarketParams& m) const {
        double e0 = law.expect([](double j) { return j; });
        return finish(
            HedgeMode::semi_static, m, spec, e0, [&](double M) { return law.expect_floor(M); },
            [&](double M) { return m.cp() * law.expect([&](double j) { return m.utility(std::max(j, M)); }); });
    }
};

// obstacle table of phi * zeta-hat on the lattice; M is applied on top
struct OneTouchGrid {
    LatticeProcessSpec base;
    std::shared_ptr<std::vector<double>> table;
    double start = 0.0;
};

OneTouchGrid build_onetouch_grid(HedgeMode mode, const OneTouchSpec& spec, const MarketParams& m,
                                 const OneTouchLatticeOptions& opt) {
    spec.validate(m);
    if (mode == HedgeMode::no_sale) throw DomainError("no lattice for the no-sale mode");
    const int N = opt.time_steps;
    if (N < 1) throw DomainError("lattice needs at least one time step");
    const double DT = m.DT(), T = m.T, dt = T / N;
    const double Kd = spec.K * DT, Bd = spec.B * DT;
    const double x = m.level(m.s0), yB = m.level(Bd), yK = m.level(Kd);
    const double beta = m.line_slope(Measure::Qbar);
    const double shift = m.theta() / m.p;

    const double anchor_lo = mode == HedgeMode::dynamic_only ? x : std::min(yK, yB);
    const double gap = yB - anchor_lo;
    int cells = std::max(1, static_cast<int>(std::lround(gap / std::sqrt(dt / opt.ratio))));
    double dc = gap / cells;
    while (dt / (dc * dc) > 1.0 && cells > 1) dc = gap / --cells;

    const double reach = opt.width * std::sqrt(T) + std::abs(beta) * T;
    const double lo = std::min({x, yK, yB}) - reach, hi = yB + reach;
    OneTouchGrid g;
    auto& s = g.base;
    s.horizon = T;
    s.time_steps = N;
    s.dc = dc;
    s.c_min = yB + std::floor((lo - yB) / dc) * dc;
    s.nodes = static_cast<int>(std::ceil((hi - s.c_min) / dc)) + 1;
    s.drift = -beta;
    s.layers = 2;
    s.measure = Measure::Qbar;
    const double barrier = yB - 1e-9 * dc;
    s.layer_update = [barrier](int l, double c) { return (l == 1 || c >= barrier) ? 1 : 0; };
    g.start = x;

    const int J = s.nodes;
    g.table = std::make_shared<std::vector<double>>(static_cast<std::size_t>(N + 1) * 2 * J);
    for (int n = 0; n <= N; ++n) {
        double t = n * dt;
        for (int l = 0; l < 2; ++l) {
            for (int j = 0; j < J; ++j) {
                double X = s.level(j) + beta * t;
                double b = X - x + shift * t;
                double sd = m.discounted_spot(t, b);
                double phi = m.phi_path(t, b);
                double val;
                if (n < N) {
                    val = phi * zeta_hat(mode, spec, m, t, sd, l == 1);
                } else {
                    // positive part of the left limit at T
                    double left = -spec.alpha;
                    if (l == 0) {
                        left += mode == HedgeMode::semi_static ? std::max(sd - Kd, 0.0) / (spec.B - spec.K)
                                                               : std::min(sd, Bd) / spec.B;
                    }
                    val = phi * std::max(left, 0.0);
                }
                (*g.table)[(static_cast<std::size_t>(n) * 2 + l) * J + j] = val;
            }
        }
    }
    return g;
}

LatticeProcessSpec with_floor(const OneTouchGrid& g, double M) {
    LatticeProcessSpec s = g.base;
    auto table = g.table;
    int J = s.nodes;
    double cmin = s.c_min, dc = s.dc;
    s.obstacle = [table, J, cmin, dc, M](int n, double, double c, int l) {
        int j = static_cast<int>(std::lround((c - cmin) / dc));
        return std::max((*table)[(static_cast<std::size_t>(n) * 2 + l) * J + j], M);
    };
    return s;
}

struct LatticeSolver {
    HedgeMode mode;
    OneTouchGrid grid;
    LatticeSolver(HedgeMode md, const OneTouchSpec& s, const MarketParams& m, const OneTouchLatticeOptions& opt)
        : mode(md), grid(build_onetouch_grid(md, s, m, opt)) {}
    OneTouchResult solve(const OneTouchSpec& spec, const MarketParams& m) const {
        auto value = [&](double M) { return snell_initial_value(with_floor(grid, M), grid.start); };
        return finish(mode, m, spec, value(0.0), value, [&](double M) {
            auto res = snell_lattice(with_floor(grid, M), grid.start);
            return m.cp() * res.expect([&](double v) { return m.utility(std::max(v, 0.0)); });
        });
    }
};

}  // namespace

LatticeProcessSpec onetouch_lattice_spec(HedgeMode mode, const OneTouchSpec& spec, const MarketParams& m, double M,
                                         const OneTouchLatticeOptions& opt) {
    return with_floor(build_onetouch_grid(mode, spec, m, opt), M);
}

double onetouch_lattice_start(const MarketParams& m) { return m.level(m.s0); }

OneTouchResult utility_semi_static(const OneTouchSpec& spec, const MarketParams& m) {
    return SemiStaticSolver(spec, m).solve(spec, m);
}

OneTouchResult utility_dynamic_only(const OneTouchSpec& spec, const MarketParams& m,
                                    const OneTouchLatticeOptions& opt) {
    return LatticeSolver(HedgeMode::dynamic_only, spec, m, opt).solve(spec, m);
}

OneTouchResult utility_no_sale(const OneTouchSpec& spec, const MarketParams& m) {
    m.validate();
    if (!(spec.w0 >= 0)) throw DomainError("w0 must be >= 0");
    OneTouchResult res;
    res.mode = HedgeMode::no_sale;
    res.feasible = true;
    res.M = spec.w0;
    res.utility = m.cp() * m.utility(spec.w0);
    res.ce = spec.w0;
    return res;
}

OneTouchResult utility_for(HedgeMode mode, const OneTouchSpec& spec, const MarketParams& m,
                           const OneTouchLatticeOptions& opt) {
    switch (mode) {
        case HedgeMode::semi_static: return utility_semi_static(spec, m);
        case HedgeMode::dynamic_only: return utility_dynamic_only(spec, m, opt);
        case HedgeMode::no_sale: return utility_no_sale(spec, m);
    }
    throw DomainError("unknown hedge mode");
}

double certainty_equivalent(double utility, const MarketParams& m) {
    double cp = m.cp();
    if (!(utility >= 0) || !std::isfinite(utility)) throw DomainError("utility outside the range of c_p u_p");
    return std::pow((1 - m.p) * utility / cp, 1.0 / (1 - m.p));
}

ResultTable sweep(HedgeMode mode, SweepVariable variable, const std::vector<double>& grid, const OneTouchSpec& spec,
                  const MarketParams& m, const OneTouchLatticeOptions& opt) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("sweep grid must be ascending");

    if (variable == SweepVariable::w0) {
        ResultTable tab("onetouch_utility", {"w0", "mode", "M", "utility", "ce", "feasible"});
        std::unique_ptr<SemiStaticSolver> semi;
        std::unique_ptr<LatticeSolver> lat;
        if (mode == HedgeMode::semi_static) semi = std::make_unique<SemiStaticSolver>(spec, m);
        if (mode == HedgeMode::dynamic_only) lat = std::make_unique<LatticeSolver>(mode, spec, m, opt);
        for (double w : grid) {
            OneTouchSpec s = spec;
            s.w0 = w;
            OneTouchResult r = semi ? semi->solve(s, m) : lat ? lat->solve(s, m) : utility_no_sale(s, m);
            if (r.feasible)
                tab.add_row({w, std::string(to_string(mode)), r.M, r.utility, r.ce, 1.0});
            else
                tab.add_row({w, std::string(to_string(mode)), std::monostate{}, std::monostate{}, std::monostate{}, 0.0});
        }
        return tab;
    }

    ResultTable tab("onetouch_ce_k", {"K", "ce"});
    for (double k : grid) {
        OneTouchSpec s = spec;
        s.K = k;
        OneTouchResult r = utility_for(mode, s, m, opt);
        if (r.feasible) tab.add_row({k, r.ce});
        else tab.add_row({k, std::monostate{}});
    }
    return tab;
}

}  // namespace intrinsic
