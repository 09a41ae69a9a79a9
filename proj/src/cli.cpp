#include "intrinsic/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "intrinsic/acceptance.hpp"
#include "intrinsic/call_position.hpp"
#include "intrinsic/config.hpp"
#include "intrinsic/errors.hpp"
#include "intrinsic/onetouch.hpp"
#include "intrinsic/passage.hpp"
#include "intrinsic/pricing.hpp"
#include "intrinsic/result_table.hpp"

namespace intrinsic {

namespace fs = std::filesystem;

CallCurve read_curve_csv(const std::string& path, double s0, double DT) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open curve file '" + path + "'", "curve", 0);
    CallCurve curve;
    curve.s0 = s0;
    curve.DT = DT;
    std::string line;
    int n = 0;
    bool header = false;
    auto fail = [&](const std::string& why) { throw ConfigError(path + ":" + std::to_string(n) + ": " + why, "curve", n); };
    auto parse = [&](std::string s) {
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        double v = 0.0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("not a number: '" + s + "'");
        return v;
    };
    while (std::getline(f, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "strike,price") fail("expected header 'strike,price'");
            header = true;
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) fail("expected two columns");
        double k = parse(line.substr(0, comma));
        double c = parse(line.substr(comma + 1));
        curve.quotes.push_back({k, 0.0, c});
    }
    if (!header) fail("missing header 'strike,price'");
    try {
        curve.validate();
    } catch (const DomainError& e) {
        throw ConfigError(path + ": " + e.what(), "curve", 0);
    }
    return curve;
}

namespace {

class Session {
public:
    Session(RunConfig cfg, std::string sub, std::ostream& out) : cfg_(std::move(cfg)), sub_(std::move(sub)), out_(out) {
        dir_ = resolve_out_dir(cfg_);
        fs::create_directories(dir_);
        hash_ = fnv1a_hex(config_echo(cfg_));
    }

    const RunConfig& cfg() const { return cfg_; }
    std::ostream& out() { return out_; }

    void write(ResultTable tab, const std::string& file) {
        tab.set_provenance({{"table", tab.name()},
                            {"subcommand", sub_},
                            {"config_hash", hash_},
                            {"seed", std::to_string(cfg_.seed)},
                            {"version", INTRINSIC_VERSION}});
        fs::path p = fs::path(dir_) / file;
        std::ofstream f(p);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        tab.write_csv(f);
        outputs_.push_back(file);
        out_ << "wrote " << p.string() << "\n";
    }

    void manifest(int code, double seconds) const {
        nlohmann::json j;
        j["subcommand"] = sub_;
        j["version"] = INTRINSIC_VERSION;
        j["seed"] = cfg_.seed;
        j["config_hash"] = hash_;
        j["config"] = config_echo(cfg_);
        j["out_dir"] = dir_;
        j["outputs"] = outputs_;
        j["exit_code"] = code;
        j["wall_time_s"] = seconds;
        std::ofstream f(fs::path(dir_) / ("manifest_" + sub_ + ".json"));
        f << j.dump(2) << "\n";
    }

private:
    RunConfig cfg_;
    std::string sub_;
    std::ostream& out_;
    std::string dir_;
    std::string hash_;
    std::vector<std::string> outputs_;
};

int cmd_call_sweep(Session& s) {
    const RunConfig& c = s.cfg();
    const MarketParams& m = c.market;
    if (!m.z_decreasing())
        s.out() << "warning: recursive-z regime (z not decreasing); using the lattice Snell oracle\n";
    ResultTable sweep = lambda_sweep(m, c.call, m.w0, c.lambda_grid.values());
    s.write(sweep, "call_sweep.csv");

    double kd = c.call.K * m.DT();
    ResultTable rp("rho_phi", {"t", "rho", "phi"});
    for (int i = 0; i <= 100; ++i) {
        double t = m.T * i / 100;
        rp.add_row({t, rho(m, t, kd), m.phi_on_strike_line(t, kd)});
    }
    s.write(rp, "rho_phi.csv");

    ResultTable zc("z_curve", {"u", "lambda", "z"});
    for (double lam : c.lambda_grid.values())
        for (int i = 0; i <= 100; ++i) {
            double u = m.T * i / 100;
            zc.add_row({u, lam, z(m, u, lam, kd, m.alpha)});
        }
    s.write(zc, "z_curve.csv");

    std::size_t best = sweep.rows().size();
    for (std::size_t i = 0; i < sweep.rows().size(); ++i)
        if (sweep.has_number(i, 3) && (best == sweep.rows().size() || sweep.number(i, 3) > sweep.number(best, 3)))
            best = i;
    if (best < sweep.rows().size())
        s.out() << "utility-maximising lambda " << format_number(sweep.number(best, 0)) << " (utility "
                << format_number(sweep.number(best, 3)) << ")\n";
    return exit_ok;
}

int cmd_call_cdf(Session& s) {
    const RunConfig& c = s.cfg();
    for (double lam : c.cdf_lambdas) {
        CallPosition pos = c.call;
        pos.lambda = lam;
        ResultTable tab = terminal_wealth_cdf(c.market, pos, c.market.w0, c.wealth_grid.values(), c.cdf_measure);
        s.write(tab, "cdf_lambda" + format_number(lam) + ".csv");
    }
    return exit_ok;
}

int cmd_onetouch_utility(Session& s) {
    const RunConfig& c = s.cfg();
    ResultTable all("onetouch_utility", {"w0", "mode", "M", "utility", "ce", "feasible"});
    for (HedgeMode mode : {HedgeMode::semi_static, HedgeMode::dynamic_only, HedgeMode::no_sale}) {
        ResultTable t = sweep(mode, SweepVariable::w0, c.onetouch_w0_grid.values(), c.onetouch, c.market, c.lattice);
        for (const auto& row : t.rows()) all.add_row(row);
    }
    s.write(all, "onetouch_utility.csv");
    double semi = utility_semi_static(c.onetouch, c.market).minimal_w0;
    double dyn = utility_dynamic_only(c.onetouch, c.market, c.lattice).minimal_w0;
    s.out() << "one-touch price " << format_number(onetouch_price(c.market, c.onetouch.B)) << "\n"
            << "minimal feasible w0: semi_static " << format_number(semi) << ", dynamic_only " << format_number(dyn)
            << "\n";
    return exit_ok;
}

int cmd_onetouch_ce_k(Session& s) {
    const RunConfig& c = s.cfg();
    s.write(sweep(HedgeMode::semi_static, SweepVariable::K, c.onetouch_K_grid.values(), c.onetouch, c.market,
                  c.lattice),
            "ce_k.csv");

    // CE with the static hedge minus CE with dynamic trading only, per strike
    std::vector<double> w0s = c.onetouch_w0_grid.values();
    ResultTable dyn = sweep(HedgeMode::dynamic_only, SweepVariable::w0, w0s, c.onetouch, c.market, c.lattice);
    std::size_t ce_col = dyn.column_index("ce");
    ResultTable diff("ce_diff", {"w0", "K", "ce_diff"});
    for (double K : c.ce_diff_strikes) {
        OneTouchSpec spec = c.onetouch;
        spec.K = K;
        ResultTable semi = sweep(HedgeMode::semi_static, SweepVariable::w0, w0s, spec, c.market, c.lattice);
        for (std::size_t i = 0; i < w0s.size(); ++i) {
            if (semi.has_number(i, ce_col) && dyn.has_number(i, ce_col))
                diff.add_row({w0s[i], K, semi.number(i, ce_col) - dyn.number(i, ce_col)});
            else
                diff.add_row({w0s[i], K, std::monostate{}});
        }
    }
    s.write(diff, "ce_diff.csv");
    s.out() << "Hobson-optimal strike " << format_number(hobson_optimal_strike(c.market, c.onetouch.B)) << "\n";
    return exit_ok;
}

std::string legs_text(const ArbPortfolio& pf) {
    std::string s;
    for (const auto& leg : pf.calls)
        s += (s.empty() ? "" : ";") + std::string("call@") + format_number(leg.strike) + ":" +
             format_number(leg.quantity);
    if (pf.asset != 0) s += ";asset:" + format_number(pf.asset);
    if (pf.cash != 0) s += ";cash:" + format_number(pf.cash);
    return s;
}

int cmd_arb_check(Session& s, const std::string& curve_path) {
    const RunConfig& c = s.cfg();
    std::string path = curve_path.empty() ? c.curve_path : curve_path;
    if (path.empty()) throw ConfigError("arb-check needs --curve or [arbitrage] curve", "arbitrage.curve", 0);
    CallCurve curve = read_curve_csv(path, c.market.s0, c.market.DT());
    ConsistencyReport rep = check_consistency(curve);
    ResultTable tab("arb_violations", {"condition", "strikes", "amount", "epsilon", "intrinsic_bound", "legs"});
    auto& o = s.out();
    if (rep.consistent()) o << "no violations\n";
    for (Condition nc : rep.not_checkable) o << "not checkable without a zero-strike quote: " << to_string(nc) << "\n";
    for (const auto& v : rep.violations) {
        ArbPortfolio pf = construct_arbitrage(curve, v);
        std::string ks;
        for (double k : v.strikes) ks += (ks.empty() ? "" : ";") + format_number(k);
        o << "violation " << to_string(v.condition) << " at strikes " << ks << ": " << pf.certificate << "\n";
        tab.add_row({std::string(to_string(v.condition)), ks, v.amount, pf.epsilon, pf.intrinsic_bound, legs_text(pf)});
    }
    s.write(tab, "arb_violations.csv");
    return exit_ok;
}

int cmd_densities(Session& s) {
    const RunConfig& c = s.cfg();
    const MarketParams& m = c.market;
    LineBoundary b{m.level(m.s0), m.level(c.call.K * m.DT()), m.line_slope(c.density_measure)};
    ResultTable g1("gamma1", {"u", "gamma1"});
    for (double u : c.density_u_grid.values()) g1.add_row({u, gamma1(u, b)});
    s.write(g1, "gamma1.csv");

    double t = c.density_t, edge = b.y + b.beta * t, reach = 5 * std::sqrt(t);
    double lo = b.upward() ? std::min(b.x, edge) - reach : edge;
    double hi = b.upward() ? edge : std::max(b.x, edge) + reach;
    ResultTable g2("gamma2", {"v", "gamma2"});
    for (int i = 0; i < c.density_v_points; ++i) {
        double v = lo + (hi - lo) * i / (c.density_v_points - 1);
        g2.add_row({v, gamma2(v, t, b)});
    }
    s.write(g2, "gamma2.csv");
    return exit_ok;
}

int cmd_verify(Session& s, bool quick) {
    AcceptanceOptions opt;
    opt.quick = quick || s.cfg().quick;
    opt.seed = s.cfg().seed;
    ResultTable tab("verify", {"criterion", "pass", "detail"});
    bool all = true;
    run_acceptance(opt, [&](const CriterionResult& r) {
        s.out() << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << std::endl;
        std::string detail = r.detail;
        for (char& ch : detail)
            if (ch == ',') ch = ';';
        tab.add_row({r.name, r.pass ? 1.0 : 0.0, detail});
        all = all && r.pass;
    });
    s.write(tab, "verify.csv");
    return all ? exit_ok : exit_internal;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Utility maximisation under intrinsic wealth constraints", "intrinsic"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(INTRINSIC_VERSION));

    std::string config_path, out_dir, curve_path;
    std::optional<std::uint64_t> seed;
    bool quick = false;
    app.add_option("--config", config_path, "INI config file");
    app.add_option("--out", out_dir, "Output directory (default: INTRINSIC_OUT_DIR or .)");
    app.add_option("--seed", seed, "Random seed");
    std::map<std::string, std::string> override_text;
    std::vector<std::pair<std::string, CLI::Option*>> overrides;
    for (const auto& k : config_keys())
        overrides.emplace_back(k.flag(), app.add_option("--" + k.flag(), override_text[k.flag()],
                                                        "Override [" + k.section + "] " + k.key)
                                             ->group("Config overrides"));

    const std::pair<const char*, const char*> subs[] = {
        {"call-sweep", "lambda sweep of the long-call position (call_sweep.csv, rho_phi.csv, z_curve.csv)"},
        {"call-cdf", "terminal wealth CDFs for the configured lambdas (cdf_lambda*.csv)"},
        {"onetouch-utility", "utility against w0 for the three one-touch modes (onetouch_utility.csv)"},
        {"onetouch-ce-k", "certainty equivalent against the hedge strike (ce_k.csv, ce_diff.csv)"},
        {"arb-check", "static consistency audit of a call price curve (arb_violations.csv)"},
        {"densities", "first-passage and absorbed densities (gamma1.csv, gamma2.csv)"},
        {"verify", "acceptance suite (verify.csv); exit 0 iff all criteria pass"},
    };
    std::map<std::string, CLI::App*> cmd;
    for (auto [name, help] : subs) cmd[name] = app.add_subcommand(name, help);
    cmd["arb-check"]->add_option("--curve", curve_path, "CSV with header strike,price");
    cmd["verify"]->add_flag("--quick", quick, "Smaller samples, same tolerances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    std::string sub = app.get_subcommands().front()->get_name();
    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        for (const auto& [flag, opt] : overrides)
            if (opt->count() > 0) apply_override(cfg, flag, override_text[flag]);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed) cfg.seed = *seed;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    }

    auto start = std::chrono::steady_clock::now();
    std::optional<Session> session;
    int code = exit_internal;
    try {
        cfg.validate();
        session.emplace(cfg, sub, out);
        if (sub == "call-sweep") code = cmd_call_sweep(*session);
        else if (sub == "call-cdf") code = cmd_call_cdf(*session);
        else if (sub == "onetouch-utility") code = cmd_onetouch_utility(*session);
        else if (sub == "onetouch-ce-k") code = cmd_onetouch_ce_k(*session);
        else if (sub == "arb-check") code = cmd_arb_check(*session, curve_path);
        else if (sub == "densities") code = cmd_densities(*session);
        else if (sub == "verify") code = cmd_verify(*session, quick);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        code = exit_config;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << " (minimal w0 " << format_number(e.minimal_w0) << ")\n";
        code = exit_domain;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        code = exit_domain;
    } catch (const UnsupportedRegime& e) {
        err << "unsupported regime: " << e.what() << "\n";
        code = exit_domain;
    } catch (const AccuracyError& e) {
        err << "numerical failure: " << e.what() << " (residual " << format_number(e.residual) << ")\n";
        code = exit_internal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        code = exit_internal;
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (session) session->manifest(code, seconds);
    return code;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace intrinsic
