#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "intrinsic/call_position.hpp"
#include "intrinsic/lattice.hpp"
#include "intrinsic/market.hpp"
#include "intrinsic/onetouch.hpp"

namespace intrinsic {

/// Evenly spaced grid, both ends included.
struct Grid {
    double min = 0.0;
    double max = 1.0;
    int points = 2;
    std::vector<double> values() const;
};

struct RunConfig {
    MarketParams market;
    CallPosition call;
    Grid lambda_grid{0.1, 6.0, 60};
    std::vector<double> cdf_lambdas{1.0, 2.0, 3.1};
    Grid wealth_grid{0.0, 1.5, 301};
    Measure cdf_measure = Measure::Qbar;

    OneTouchSpec onetouch;
    Grid onetouch_w0_grid{0.0, 1.0, 51};
    Grid onetouch_K_grid{0.55, 1.75, 25};
    std::vector<double> ce_diff_strikes{0.9, 1.1, 1.3, 1.5};

    OneTouchLatticeOptions lattice;

    Grid density_u_grid{0.01, 2.0, 200};
    int density_v_points = 200;
    double density_t = 1.0;
    Measure density_measure = Measure::Qbar;

    std::string curve_path;

    std::uint64_t seed = 20240601;
    std::string out_dir;  // empty: INTRINSIC_OUT_DIR or "."
    bool quick = false;

    /// Checks every module's preconditions; throws DomainError.
    void validate() const;
};

/// One `[section] key` entry; every entry is also a `--section.key` flag.
struct ConfigKey {
    std::string section;
    std::string key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;

    std::string flag() const { return section + "." + key; }
};

const std::vector<ConfigKey>& config_keys();

/// Reads an INI file over the defaults. Syntax errors, unknown keys and
/// unparsable values raise ConfigError with the field and line.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");

/// Sets `section.key` from text; throws ConfigError.
void apply_override(RunConfig& cfg, const std::string& dotted, const std::string& value);

/// Canonical INI echo of every key except run.out_dir (stable order), used for hashing.
std::string config_echo(const RunConfig& cfg);

/// FNV-1a 64-bit hash, hex.
std::string fnv1a_hex(const std::string& text);

/// Output directory: the configured one, else INTRINSIC_OUT_DIR, else ".".
std::string resolve_out_dir(const RunConfig& cfg);

}  // namespace intrinsic
