#include "intrinsic/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "intrinsic/errors.hpp"
#include "intrinsic/result_table.hpp"

namespace intrinsic {

std::vector<double> Grid::values() const {
    if (points < 1) throw DomainError("grid needs at least one point");
    if (points == 1) return {min};
    if (!(max > min)) throw DomainError("grid needs max > min");
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i) out[i] = min + (max - min) * i / (points - 1);
    out.back() = max;
    return out;
}

void RunConfig::validate() const {
    market.validate();
    call.validate();
    onetouch.validate(market);
    for (const Grid* g : {&lambda_grid, &wealth_grid, &onetouch_w0_grid, &onetouch_K_grid, &density_u_grid})
        (void)g->values();
    if (lattice.time_steps < 1 || !(lattice.ratio > 0 && lattice.ratio <= 1) || !(lattice.width > 0))
        throw DomainError("lattice options out of range");
    if (density_v_points < 2 || !(density_t > 0 && density_t <= market.T))
        throw DomainError("density options out of range");
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct BadValue {
    std::string why;
};

double to_double(const std::string& text) {
    std::string s = trim(text);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) throw BadValue{"not a number: '" + s + "'"};
    return v;
}

long to_long(const std::string& text) {
    std::string s = trim(text);
    long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
        throw BadValue{"not an integer: '" + s + "'"};
    return v;
}

std::vector<double> to_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(item));
    if (out.empty()) throw BadValue{"empty list"};
    return out;
}

std::string list_text(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s;
}

bool to_bool(const std::string& text) {
    std::string s = trim(text);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw BadValue{"not a boolean: '" + s + "'"};
}

Measure to_measure(const std::string& text) {
    try {
        return parse_measure(trim(text));
    } catch (const DomainError& e) {
        throw BadValue{e.what()};
    }
}

template <class Get>
ConfigKey real(std::string sec, std::string key, Get member) {
    return {std::move(sec), std::move(key), [member](RunConfig& c, const std::string& v) { member(c) = to_double(v); },
            [member](const RunConfig& c) { return format_number(member(const_cast<RunConfig&>(c))); }};
}

template <class Get>
ConfigKey integer(std::string sec, std::string key, Get member) {
    return {std::move(sec), std::move(key),
            [member](RunConfig& c, const std::string& v) { member(c) = static_cast<int>(to_long(v)); },
            [member](const RunConfig& c) { return std::to_string(member(const_cast<RunConfig&>(c))); }};
}

template <class Get>
ConfigKey list(std::string sec, std::string key, Get member) {
    return {std::move(sec), std::move(key), [member](RunConfig& c, const std::string& v) { member(c) = to_list(v); },
            [member](const RunConfig& c) { return list_text(member(const_cast<RunConfig&>(c))); }};
}

template <class Get>
ConfigKey measure(std::string sec, std::string key, Get member) {
    return {std::move(sec), std::move(key), [member](RunConfig& c, const std::string& v) { member(c) = to_measure(v); },
            [member](const RunConfig& c) { return std::string(to_string(member(const_cast<RunConfig&>(c)))); }};
}

std::vector<ConfigKey> make_keys() {
    std::vector<ConfigKey> k;
    k.push_back(real("market", "s0", [](RunConfig& c) -> double& { return c.market.s0; }));
    k.push_back(real("market", "mu", [](RunConfig& c) -> double& { return c.market.mu; }));
    k.push_back(real("market", "r", [](RunConfig& c) -> double& { return c.market.r; }));
    k.push_back(real("market", "sigma", [](RunConfig& c) -> double& { return c.market.sigma; }));
    k.push_back(real("market", "T", [](RunConfig& c) -> double& { return c.market.T; }));
    k.push_back(real("market", "p", [](RunConfig& c) -> double& { return c.market.p; }));
    k.push_back(real("market", "w0", [](RunConfig& c) -> double& { return c.market.w0; }));
    k.push_back(real("market", "alpha", [](RunConfig& c) -> double& { return c.market.alpha; }));

    k.push_back(real("call", "K", [](RunConfig& c) -> double& { return c.call.K; }));
    k.push_back(real("call", "lambda", [](RunConfig& c) -> double& { return c.call.lambda; }));
    k.push_back(real("call", "deltaC", [](RunConfig& c) -> double& { return c.call.deltaC; }));
    k.push_back(real("call", "lambda_min", [](RunConfig& c) -> double& { return c.lambda_grid.min; }));
    k.push_back(real("call", "lambda_max", [](RunConfig& c) -> double& { return c.lambda_grid.max; }));
    k.push_back(integer("call", "lambda_points", [](RunConfig& c) -> int& { return c.lambda_grid.points; }));
    k.push_back(list("call", "cdf_lambdas", [](RunConfig& c) -> std::vector<double>& { return c.cdf_lambdas; }));
    k.push_back(real("call", "wealth_min", [](RunConfig& c) -> double& { return c.wealth_grid.min; }));
    k.push_back(real("call", "wealth_max", [](RunConfig& c) -> double& { return c.wealth_grid.max; }));
    k.push_back(integer("call", "wealth_points", [](RunConfig& c) -> int& { return c.wealth_grid.points; }));
    k.push_back(measure("call", "cdf_measure", [](RunConfig& c) -> Measure& { return c.cdf_measure; }));

    k.push_back(real("onetouch", "B", [](RunConfig& c) -> double& { return c.onetouch.B; }));
    k.push_back(real("onetouch", "K", [](RunConfig& c) -> double& { return c.onetouch.K; }));
    k.push_back(real("onetouch", "premium", [](RunConfig& c) -> double& { return c.onetouch.premium; }));
    k.push_back(real("onetouch", "w0", [](RunConfig& c) -> double& { return c.onetouch.w0; }));
    k.push_back(real("onetouch", "alpha", [](RunConfig& c) -> double& { return c.onetouch.alpha; }));
    k.push_back(real("onetouch", "w0_min", [](RunConfig& c) -> double& { return c.onetouch_w0_grid.min; }));
    k.push_back(real("onetouch", "w0_max", [](RunConfig& c) -> double& { return c.onetouch_w0_grid.max; }));
    k.push_back(integer("onetouch", "w0_points", [](RunConfig& c) -> int& { return c.onetouch_w0_grid.points; }));
    k.push_back(real("onetouch", "K_min", [](RunConfig& c) -> double& { return c.onetouch_K_grid.min; }));
    k.push_back(real("onetouch", "K_max", [](RunConfig& c) -> double& { return c.onetouch_K_grid.max; }));
    k.push_back(integer("onetouch", "K_points", [](RunConfig& c) -> int& { return c.onetouch_K_grid.points; }));
    k.push_back(
        list("onetouch", "ce_diff_strikes", [](RunConfig& c) -> std::vector<double>& { return c.ce_diff_strikes; }));

    k.push_back(integer("lattice", "time_steps", [](RunConfig& c) -> int& { return c.lattice.time_steps; }));
    k.push_back(real("lattice", "ratio", [](RunConfig& c) -> double& { return c.lattice.ratio; }));
    k.push_back(real("lattice", "width", [](RunConfig& c) -> double& { return c.lattice.width; }));

    k.push_back(real("densities", "u_min", [](RunConfig& c) -> double& { return c.density_u_grid.min; }));
    k.push_back(real("densities", "u_max", [](RunConfig& c) -> double& { return c.density_u_grid.max; }));
    k.push_back(integer("densities", "u_points", [](RunConfig& c) -> int& { return c.density_u_grid.points; }));
    k.push_back(integer("densities", "v_points", [](RunConfig& c) -> int& { return c.density_v_points; }));
    k.push_back(real("densities", "t", [](RunConfig& c) -> double& { return c.density_t; }));
    k.push_back(measure("densities", "measure", [](RunConfig& c) -> Measure& { return c.density_measure; }));

    k.push_back({"arbitrage", "curve", [](RunConfig& c, const std::string& v) { c.curve_path = trim(v); },
                 [](const RunConfig& c) { return c.curve_path; }});

    k.push_back({"run", "seed",
                 [](RunConfig& c, const std::string& v) {
                     long s = to_long(v);
                     if (s < 0) throw BadValue{"seed must be >= 0"};
                     c.seed = static_cast<std::uint64_t>(s);
                 },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    k.push_back({"run", "out_dir", [](RunConfig& c, const std::string& v) { c.out_dir = trim(v); },
                 [](const RunConfig& c) { return c.out_dir; }});
    k.push_back({"run", "quick", [](RunConfig& c, const std::string& v) { c.quick = to_bool(v); },
                 [](const RunConfig& c) { return std::string(c.quick ? "true" : "false"); }});
    return k;
}

const ConfigKey* find_key(const std::string& section, const std::string& key) {
    for (const auto& k : config_keys())
        if (k.section == section && k.key == key) return &k;
    return nullptr;
}

// line of `key` inside `[section]`, for diagnostics
int line_of(const std::string& text, const std::string& section, const std::string& key) {
    std::istringstream in(text);
    std::string line, current;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            current = trim(t.substr(1, t.size() - 2));
            continue;
        }
        auto eq = t.find('=');
        if (eq != std::string::npos && current == section && trim(t.substr(0, eq)) == key) return n;
    }
    return 0;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = make_keys();
    return keys;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    // the INI reader only knows ';' comments
    std::string cleaned;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            std::string t = trim(line);
            cleaned += (!t.empty() && t[0] == '#') ? ";" : line;
            cleaned += '\n';
        }
    }
    boost::property_tree::ptree tree;
    std::istringstream in(cleaned);
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message(), "", static_cast<int>(e.line()));
    }
    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            int ln = line_of(text, "", section);
            throw ConfigError(origin + ":" + std::to_string(ln) + ": key '" + section + "' outside a section", section,
                              ln);
        }
        for (const auto& [key, node] : body) {
            const ConfigKey* k = find_key(section, key);
            int ln = line_of(text, section, key);
            std::string where = origin + ":" + std::to_string(ln) + ": ";
            if (!k) throw ConfigError(where + "unknown key '" + section + "." + key + "'", section + "." + key, ln);
            try {
                k->set(cfg, node.data());
            } catch (const BadValue& e) {
                throw ConfigError(where + section + "." + key + ": " + e.why, section + "." + key, ln);
            }
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'", "", 0);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str(), path);
}

void apply_override(RunConfig& cfg, const std::string& dotted, const std::string& value) {
    auto dot = dotted.find('.');
    const ConfigKey* k = dot == std::string::npos ? nullptr : find_key(dotted.substr(0, dot), dotted.substr(dot + 1));
    if (!k) throw ConfigError("unknown option '" + dotted + "'", dotted, 0);
    try {
        k->set(cfg, value);
    } catch (const BadValue& e) {
        throw ConfigError("--" + dotted + ": " + e.why, dotted, 0);
    }
}

std::string config_echo(const RunConfig& cfg) {
    std::string out, section;
    for (const auto& k : config_keys()) {
        if (k.flag() == "run.out_dir") continue;  // where results go does not change them
        if (k.section != section) {
            section = k.section;
            out += "[" + section + "]\n";
        }
        out += k.key + " = " + k.get(cfg) + "\n";
    }
    return out;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string resolve_out_dir(const RunConfig& cfg) {
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv("INTRINSIC_OUT_DIR"); env && *env) return env;
    return ".";
}

}  // namespace intrinsic
