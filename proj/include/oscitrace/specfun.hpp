#pragma once

// Self-contained special functions: Gamma, Euler's constant, and the cylinder
// functions J0, Y0, H0 (Struve).  Everything here is pure and stateless.
//
// Accuracy contract: gamma is good to ~1e-13 relative on [0.05, 50];
// the cylinder functions to ~1e-10 absolute on (0, 10], which is the only
// regime the library evaluates them in (arguments of the form 2/lambda).

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace oscitrace::specfun {

/// Value plus an absolute error bound.  The bound is an estimate of rounding
/// and truncation error, not a rigorous interval.
struct SpecialValue {
    double value;
    double abs_error;
};

inline constexpr double euler_mascheroni = 0.577215664901532860606512090082;

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients (Godfrey's set).  Relative
// error below 1e-14 for positive arguments in double precision.
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_coeff[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

// ln Gamma(x) for x > 0.5 via Lanczos; returns the log and the sign is +1.
inline double lanczos_log_gamma(double x) {
    const double z = x - 1.0;
    double acc = lanczos_coeff[0];
    for (int i = 1; i < 9; ++i) acc += lanczos_coeff[i] / (z + i);
    const double base = z + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(base) - base +
           std::log(acc);
}

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

} // namespace detail

/// Gamma function (or ln Gamma for log_scale, x > 0).  Reflection formula for
/// x < 0.5.  Throws std::domain_error at the poles.
inline SpecialValue gamma(double x, bool log_scale = false) {
    if (detail::is_nonpositive_integer(x))
        throw std::domain_error("gamma: pole at nonpositive integer argument");
    if (log_scale) {
        if (x <= 0.0) throw std::domain_error("gamma: log scale requires x > 0");
        if (x >= 0.5) {
            const double lg = detail::lanczos_log_gamma(x);
            return {lg, std::abs(lg) * 1e-13 + 1e-15};
        }
        const double g = gamma(x, false).value;
        return {std::log(g), std::abs(std::log(g)) * 1e-13 + 1e-15};
    }
    if (x >= 0.5) {
        const double v = std::exp(detail::lanczos_log_gamma(x));
        return {v, std::abs(v) * 1e-13};
    }
    // Gamma(x) Gamma(1-x) = pi / sin(pi x)
    const double s = std::sin(std::numbers::pi * x);
    const double v = std::numbers::pi / (s * std::exp(detail::lanczos_log_gamma(1.0 - x)));
    return {v, std::abs(v) * 2e-13};
}

/// Euler's constant to full double precision.
inline SpecialValue euler_gamma() {
    return {euler_mascheroni, 1e-16};
}

struct CylinderValues {
    SpecialValue j0;
    SpecialValue y0;
    SpecialValue h0;
};

/// Bessel J0, Y0 and Struve H0 by power series.  The series are used over the
/// whole supported range (0, series_cutoff]; cancellation grows with x, and the
/// stated 1e-10 bound holds for x <= 10.  Y0 requires x > 0.
inline CylinderValues cylinder_functions(double x) {
    constexpr double series_cutoff = 30.0;
    if (x < 0.0) throw std::domain_error("cylinder_functions: x must be nonnegative");
    if (x > series_cutoff)
        throw std::domain_error("cylinder_functions: argument beyond series validity");

    const double q = 0.25 * x * x; // (x/2)^2

    // J0 = sum (-1)^m q^m / (m!)^2, and the companion sum with harmonic
    // numbers that enters Y0.
    double j0 = 1.0, yser = 0.0;
    double term = 1.0, harmonic = 0.0, peak = 1.0;
    for (int m = 1; m <= 120; ++m) {
        term *= -q / (static_cast<double>(m) * m);
        harmonic += 1.0 / m;
        j0 += term;
        yser += -term * harmonic; // (-1)^{m+1} H_m q^m / (m!)^2
        peak = std::max(peak, std::abs(term));
        if (std::abs(term) < 1e-18 * peak && m > 4) break;
    }
    const double cancel = peak * 1e-16;

    SpecialValue j0v{j0, cancel + 1e-16};

    SpecialValue y0v{std::numeric_limits<double>::quiet_NaN(),
                     std::numeric_limits<double>::quiet_NaN()};
    if (x > 0.0) {
        const double two_over_pi = 2.0 / std::numbers::pi;
        y0v.value = two_over_pi * ((std::log(0.5 * x) + euler_mascheroni) * j0 + yser);
        y0v.abs_error = cancel * std::abs(std::log(0.5 * x) + 1.0) + 1e-15;
    }

    // H0 = sum (-1)^m (x/2)^{2m+1} / Gamma(m + 3/2)^2
    double h0 = 0.0;
    double num = 0.5 * x;                                  // (x/2)^{2m+1}
    double gden = 0.5 * std::sqrt(std::numbers::pi);       // Gamma(m + 3/2)
    double hterm = num / (gden * gden), hpeak = 0.0;
    int sign = 1;
    for (int m = 0; m <= 120; ++m) {
        h0 += sign * hterm;
        hpeak = std::max(hpeak, std::abs(hterm));
        if (std::abs(hterm) < 1e-18 * hpeak && m > 4) break;
        sign = -sign;
        num *= 0.25 * x * x;
        gden *= (m + 1.5);
        hterm = num / (gden * gden);
    }
    SpecialValue h0v{h0, hpeak * 1e-16 + 1e-16};

    return {j0v, y0v, h0v};
}

inline SpecialValue bessel_j0(double x) { return cylinder_functions(x).j0; }

inline SpecialValue bessel_y0(double x) {
    if (x <= 0.0) throw std::domain_error("bessel_y0: x must be positive");
    return cylinder_functions(x).y0;
}

inline SpecialValue struve_h0(double x) { return cylinder_functions(x).h0; }

} // namespace oscitrace::specfun
