#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace intrinsic {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceOptions {
    /// Smaller Monte Carlo samples and grids (same tolerances), for `verify`.
    bool quick = false;
    std::uint64_t seed = 20240601;
};

CriterionResult check_atm_identity(const AcceptanceOptions& opt);
CriterionResult check_density_triangulation(const AcceptanceOptions& opt);
CriterionResult check_chapman_kolmogorov(const AcceptanceOptions& opt);
CriterionResult check_maxplus_verification(const AcceptanceOptions& opt);
CriterionResult check_m_equation(const AcceptanceOptions& opt);
CriterionResult check_headline_lambda(const AcceptanceOptions& opt);
CriterionResult check_lattice_oracle(const AcceptanceOptions& opt);
CriterionResult check_onetouch_price(const AcceptanceOptions& opt);
CriterionResult check_onetouch_thresholds(const AcceptanceOptions& opt);
CriterionResult check_ce_vs_strike(const AcceptanceOptions& opt);
CriterionResult check_arbitrage_suite(const AcceptanceOptions& opt);
CriterionResult check_supermartingales(const AcceptanceOptions& opt);

struct Criterion {
    std::string name;
    std::function<CriterionResult(const AcceptanceOptions&)> run;
};

const std::vector<Criterion>& acceptance_criteria();

/// Runs every criterion; exceptions become failures. `on_result` sees each
/// result as soon as it is ready.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace intrinsic
