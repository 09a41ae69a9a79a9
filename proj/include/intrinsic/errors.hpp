#pragma once

#include <stdexcept>
#include <string>

namespace intrinsic {

/// Input outside an operation's domain (bad parameter, t outside [0,T], ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Budget too small to implement the position. Carries the smallest w0 that works.
struct InfeasibleError : std::runtime_error {
    InfeasibleError(const std::string& what, double min_w0)
        : std::runtime_error(what), minimal_w0(min_w0) {}
    double minimal_w0;
};

/// Numerical routine could not reach its accuracy target.
struct AccuracyError : std::runtime_error {
    AccuracyError(const std::string& what, double res)
        : std::runtime_error(what), residual(res) {}
    double residual;
};

/// Parameters outside the regime where the closed-form max-plus path applies.
struct UnsupportedRegime : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or unknown configuration input.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& what, std::string fld, int ln = 0)
        : std::runtime_error(what), field(std::move(fld)), line(ln) {}
    std::string field;
    int line;
};

}  // namespace intrinsic
