#pragma once

#include <stdexcept>
#include <string>

namespace oscitrace {

/// Requested (k, n) combination is outside the regime a formula is valid in.
struct unsupported_regime_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Sphere operations are implemented for n in {1, 2} only.
struct unsupported_dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition of the operation does not hold for the input.
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expansion term whose distributional kernel would need a regularization
/// that is not implemented (pairing exponent outside (-1, 0)).
struct unsupported_term_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Both chart Jacobian candidates vanish at the requested direction.
struct degenerate_chart_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shooting solver failed to invert the flow chart (caustic or chart breakdown).
struct chart_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evaluation budget of an oscillatory or sweep computation exceeded.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature could not reach the requested tolerance.  Carries the
/// best estimate obtained so far.
struct convergence_error : std::runtime_error {
    double best_value;
    double best_error;
    convergence_error(const std::string& what, double value, double error)
        : std::runtime_error(what), best_value(value), best_error(error) {}
};

/// Trajectory left the guard ball or the step size underflowed.
struct flow_integration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration or input file rejected; carries the offending key path.
struct parse_error : std::runtime_error {
    std::string key_path;
    parse_error(const std::string& what, std::string path = {})
        : std::runtime_error(what), key_path(std::move(path)) {}
};

} // namespace oscitrace
