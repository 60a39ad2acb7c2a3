#pragma once

#include <string>

#include "oscitrace/errors.hpp"

namespace oscitrace {

/// Degree k of the leading homogeneous part and half-dimension n of phase
/// space (R^{2n}).  k > 2 throughout (hypothesis H2: the critical point is
/// totally degenerate), and the trace regime is k >= 2n.
struct ProblemDims {
    int k = 0;
    int n = 0;

    enum class Regime { k_gt_2n, k_eq_2n, k_lt_2n };

    Regime regime() const {
        if (k > 2 * n) return Regime::k_gt_2n;
        if (k == 2 * n) return Regime::k_eq_2n;
        return Regime::k_lt_2n;
    }

    /// Basic validity: k > 2, n >= 1.
    void validate() const {
        if (k <= 2)
            throw unsupported_regime_error(
                "ProblemDims: degree k must exceed 2 (hypothesis H2, totally "
                "degenerate critical point), got k=" + std::to_string(k));
        if (n < 1)
            throw unsupported_regime_error("ProblemDims: n must be >= 1, got n=" +
                                           std::to_string(n));
    }

    /// Validity for trace assembly: additionally k >= 2n.
    void validate_trace_regime() const {
        validate();
        if (regime() == Regime::k_lt_2n)
            throw unsupported_regime_error(
                "ProblemDims: trace assembly requires k >= 2n, got k=" +
                std::to_string(k) + ", n=" + std::to_string(n));
    }

    bool operator==(const ProblemDims&) const = default;
};

} // namespace oscitrace
