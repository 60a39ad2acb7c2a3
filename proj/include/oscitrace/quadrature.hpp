#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature with endpoint-singularity
// substitutions and half-infinite maps, the closed-form Gaussian radial
// oracle, direct oscillatory-integral evaluation, and asymptotic-law fitting.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oscitrace/amplitude.hpp"
#include "oscitrace/dims.hpp"
#include "oscitrace/errors.hpp"

namespace oscitrace::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

struct ComplexResult {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
    long evaluations = 0;
};

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_panels = 30000;
    bool throw_on_failure = true;
};

namespace detail {

// 15-point Kronrod nodes on [-1,1] (odd indices form the embedded Gauss-7 rule).
inline constexpr double gk_nodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};

inline constexpr double k15_weights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};

inline constexpr double g7_weights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

template <class F>
void gk15(F& f, double a, double b, double& value, double& error) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double k15 = 0.0, g7 = 0.0, absint = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double y = f(mid + half * gk_nodes[i]);
        k15 += k15_weights[i] * y;
        absint += k15_weights[i] * std::abs(y);
        if (i % 2 == 1) g7 += g7_weights[i / 2] * y;
    }
    value = k15 * half;
    const double diff = std::abs(k15 - g7) * std::abs(half);
    // QUADPACK-style damped estimate, floored by roundoff on |integrand|.
    double err = diff;
    const double scale = absint * std::abs(half);
    if (scale > 0.0 && diff > 0.0) {
        const double ratio = std::pow(200.0 * diff / scale, 1.5);
        if (ratio < 1.0) err = scale * ratio;
    }
    err = std::max(err, scale * 1e-16);
    error = err;
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Result adaptive(F&& f, double a, double b, const Options& opt) {
    Result res;
    if (a == b) return res;
    std::vector<Panel> heap;
    auto push = [&](double lo, double hi) -> Panel {
        Panel p{lo, hi, 0.0, 0.0};
        gk15(f, lo, hi, p.value, p.error);
        res.evaluations += 15;
        heap.push_back(p);
        std::push_heap(heap.begin(), heap.end());
        return p;
    };
    push(a, b);
    double total = heap[0].value, toterr = heap[0].error;
    long resum_in = 64;
    while (toterr > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (static_cast<int>(heap.size()) >= opt.max_panels) {
            if (opt.throw_on_failure)
                throw convergence_error("integrate: panel budget exhausted", total, toterr);
            break;
        }
        std::pop_heap(heap.begin(), heap.end());
        Panel worst = heap.back();
        heap.pop_back();
        if (worst.b - worst.a < 1e-15 * (std::abs(worst.a) + std::abs(worst.b)) + 1e-300) {
            // cannot split further; accept the current estimate
            heap.push_back(worst);
            break;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel c1 = push(worst.a, mid);
        Panel c2 = push(mid, worst.b);
        total += c1.value + c2.value - worst.value;
        toterr += c1.error + c2.error - worst.error;
        if (--resum_in == 0) { // refresh accumulated drift
            resum_in = 64;
            total = toterr = 0.0;
            for (const Panel& p : heap) {
                total += p.value;
                toterr += p.error;
            }
        }
    }
    total = toterr = 0.0;
    for (const Panel& p : heap) {
        total += p.value;
        toterr += p.error;
    }
    res.value = total;
    res.error = toterr;
    return res;
}

} // namespace detail

/// Adaptive integral over the finite interval [a, b].
template <class F>
Result integrate(F&& f, double a, double b, Options opt = {}) {
    return detail::adaptive(std::forward<F>(f), a, b, opt);
}

/// Which endpoint carries an algebraic singularity |t - endpoint|^{-s}.
enum class SingularEnd { lower, upper };

/// Integral of f over [a, b] where f(t) ~ |t - e|^{-s} near the declared
/// endpoint e, 0 < s < 1.  Substitution u = w^{1/(1-s)} makes the transformed
/// integrand bounded.
template <class F>
Result integrate_singular(F&& f, double a, double b, SingularEnd end, double s,
                          Options opt = {}) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("integrate_singular: exponent must be in (0,1)");
    if (a >= b) return {};
    const double len = b - a;
    const double q = 1.0 / (1.0 - s); // u = len * w^q
    auto g = [&](double w) {
        const double u = len * std::pow(w, q);
        const double jac = len * q * std::pow(w, q - 1.0);
        const double t = (end == SingularEnd::lower) ? a + u : b - u;
        return f(t) * jac;
    };
    return detail::adaptive(g, 0.0, 1.0, opt);
}

/// Integral over [a, +inf) via t = a + u/(1-u).
template <class F>
Result integrate_to_inf(F&& f, double a, Options opt = {}) {
    auto g = [&](double u) {
        const double om = 1.0 - u;
        const double t = a + u / om;
        return f(t) / (om * om);
    };
    return detail::adaptive(g, 0.0, 1.0, opt);
}

/// Integral over a finite union of pieces; errors add.
inline Result combine(std::initializer_list<Result> parts) {
    Result r;
    for (const Result& p : parts) {
        r.value += p.value;
        r.error += p.error;
        r.evaluations += p.evaluations;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Gaussian radial oracle
// ---------------------------------------------------------------------------

/// I(lambda, k, n) = 2 pi int_0^inf r^{2n-1} e^{-r^2} / sqrt(4 + r^{2k} lambda^2) dr,
/// the exact radial reduction of the triple oscillatory integral with Gaussian
/// amplitude.  The integrand has a knee at r* = (2/lambda)^{1/k}; the range is
/// split there so the adaptive rule does not chase it from cold.
inline Result gaussian_oracle_radial(ProblemDims dims, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("gaussian_oracle_radial: lambda >= 0");
    const int k = dims.k, n = dims.n;
    auto f = [&](double r) {
        const double rk = std::pow(r, k);
        return std::pow(r, 2 * n - 1) * std::exp(-r * r) /
               std::sqrt(4.0 + rk * rk * lambda * lambda);
    };
    Options opt;
    opt.rel_tol = 1e-12;
    const double rmax = 9.0; // e^{-81} below double underflow relative to value
    Result total;
    if (lambda > 0.0) {
        const double knee = std::pow(2.0 / lambda, 1.0 / k);
        if (knee < rmax) {
            total = combine({integrate(f, 0.0, knee, opt),
                             integrate(f, knee, std::min(8.0 * knee, rmax), opt)});
            if (8.0 * knee < rmax) {
                Result tail = integrate(f, std::min(8.0 * knee, rmax), rmax, opt);
                total = combine({total, tail});
            }
        } else {
            total = integrate(f, 0.0, rmax, opt);
        }
    } else {
        total = integrate(f, 0.0, rmax, opt);
    }
    total.value *= 2.0 * std::numbers::pi;
    total.error *= 2.0 * std::numbers::pi;
    return total;
}

// ---------------------------------------------------------------------------
// Oscillatory oracles
// ---------------------------------------------------------------------------

/// Phase shapes of the two normal-form charts.
enum class PhaseKind {
    t_rk,   // 2D: int_0^inf dr int_R dt  e^{i lambda t r^k} a(t, r)
    t_rk_v, // 3D: int_0^inf dr int_R2 dt dv e^{i lambda t r^k v} a(t,r,v) r^{2n-1}
};

namespace detail {

/// int_R t^m exp(-(t/w)^2) e^{i omega t} dt, by the Hermite-type recurrence
/// I_m = p_m(Omega) I_0 with I_0 = w sqrt(pi) e^{-Omega^2/4}, Omega = omega w.
inline std::complex<double> gaussian_fourier_factor(int m, double w, double omega) {
    const double Omega = omega * w;
    const std::complex<double> I(0.0, 1.0);
    // I_m = p_m(Omega) I_0 with p_m = -i p'_{m-1} + (i Omega / 2) p_{m-1}
    std::vector<std::complex<double>> p{1.0}; // p_0
    for (int j = 1; j <= m; ++j) {
        std::vector<std::complex<double>> np(p.size() + 1, 0.0);
        for (size_t c = 0; c + 1 < p.size(); ++c)
            np[c] += -I * static_cast<double>(c + 1) * p[c + 1];
        for (size_t c = 0; c < p.size(); ++c) np[c + 1] += 0.5 * I * p[c];
        p = std::move(np);
    }
    std::complex<double> val = 0.0;
    double pw = 1.0;
    for (size_t c = 0; c < p.size(); ++c) {
        val += p[c] * pw;
        pw *= Omega;
    }
    // substitution t = w s contributes w^{m+1}
    double wm = w;
    for (int j = 0; j < m; ++j) wm *= w;
    return wm * std::sqrt(std::numbers::pi) * std::exp(-0.25 * Omega * Omega) * val;
}

} // namespace detail

struct OscillatoryOptions {
    double rel_tol = 1e-9;
    double callable_lambda_guard = 1e4;
    long eval_budget = 200'000'000;
};

/// Direct evaluation of the normal-form oscillatory integrals.  For separable
/// amplitudes the t-integral is done analytically (Gaussian Fourier factor)
/// and the rest by nested adaptive quadrature; callable amplitudes go through
/// oscillation-resolving tensor quadrature and are cost-guarded in lambda.
inline ComplexResult oscillatory_oracle(PhaseKind kind, ProblemDims dims,
                                        const AmplitudeSpec& a, double lambda,
                                        OscillatoryOptions oo = {}) {
    const int k = dims.k;
    ComplexResult out;
    Options opt;
    opt.rel_tol = oo.rel_tol;

    if (a.separable()) {
        const int mt = a.power(0);
        const double wt = a.width(0);
        if (kind == PhaseKind::t_rk) {
            if (a.arity() != 2)
                throw std::invalid_argument("oscillatory_oracle: 2D phase needs arity 2");
            // inner t-integral analytic with omega = lambda r^k
            const double rmax = 9.0 * a.width(1);
            auto full = [&](double r, bool real_part) {
                const double omega = lambda * std::pow(r, k);
                const std::complex<double> tf = detail::gaussian_fourier_factor(mt, wt, omega);
                const double rest = a.scale() * a.factor(1, r);
                return real_part ? (tf * rest).real() : (tf * rest).imag();
            };
            Result re = integrate([&](double r) { return full(r, true); }, 0.0, rmax, opt);
            Result im = integrate([&](double r) { return full(r, false); }, 0.0, rmax, opt);
            out.value = {re.value, im.value};
            out.error = re.error + im.error;
            out.evaluations = re.evaluations + im.evaluations;
            return out;
        }
        // 3D kind: analytic in t, numeric in v then r, r^{2n-1} weight included.
        if (a.arity() != 3)
            throw std::invalid_argument("oscillatory_oracle: 3D phase needs arity 3");
        const int twon1 = 2 * dims.n - 1;
        const double vmax = 9.0 * a.width(2);
        const double rmax = 9.0 * a.width(1);
        auto inner_v = [&](double r, bool real_part) {
            auto g = [&](double v) {
                const double omega = lambda * std::pow(r, k) * v;
                const std::complex<double> tf = detail::gaussian_fourier_factor(mt, wt, omega);
                const double rest = a.scale() * a.factor(1, r) * a.factor(2, v);
                return real_part ? (tf * rest).real() : (tf * rest).imag();
            };
            Options vopt = opt;
            vopt.rel_tol = std::max(opt.rel_tol * 0.1, 1e-12);
            vopt.abs_tol = 1e-16;
            vopt.throw_on_failure = false;
            Result rv =
                combine({integrate(g, -vmax, 0.0, vopt), integrate(g, 0.0, vmax, vopt)});
            out.evaluations += rv.evaluations;
            return rv.value * std::pow(r, twon1);
        };
        Options ropt = opt;
        ropt.abs_tol = 1e-300; // values decay like lambda^{-1}; pure relative control
        Result re = integrate([&](double r) { return inner_v(r, true); }, 0.0, rmax, ropt);
        Result im = integrate([&](double r) { return inner_v(r, false); }, 0.0, rmax, ropt);
        out.value = {re.value, im.value};
        out.error = re.error + im.error;
        out.evaluations += re.evaluations + im.evaluations;
        return out;
    }

    // Callable amplitude: oscillation-resolving direct tensor quadrature.
    if (lambda > oo.callable_lambda_guard)
        throw budget_error("oscillatory_oracle: lambda exceeds the callable-amplitude guard");
    const double R = a.decay_radius();
    long evals = 0;
    auto check_budget = [&]() {
        if (evals > oo.eval_budget)
            throw budget_error("oscillatory_oracle: evaluation budget exceeded");
    };
    if (kind == PhaseKind::t_rk) {
        auto inner_t = [&](double r, bool real_part) {
            const double freq = lambda * std::pow(r, k);
            // panels short enough that the phase varies < pi/5 per panel
            const int panels =
                std::max(1, static_cast<int>(std::ceil(2.0 * R * freq / (std::numbers::pi / 5.0))));
            const int segs = std::min(panels, 16'000'000);
            double acc = 0.0;
            const double h = 2.0 * R / segs;
            Options topt;
            topt.rel_tol = 1e-8;
            topt.max_panels = 64;
            topt.throw_on_failure = false;
            for (int i = 0; i < segs; ++i) {
                const double lo = -R + i * h, hi = lo + h;
                Result seg = integrate(
                    [&](double t) {
                        ++evals;
                        const std::array<double, 2> u{t, r};
                        const double av = a(std::span<const double>(u));
                        return real_part ? av * std::cos(freq * t) : av * std::sin(freq * t);
                    },
                    lo, hi, topt);
                acc += seg.value;
            }
            check_budget();
            return acc;
        };
        Options ropt = opt;
        ropt.rel_tol = 1e-7;
        Result re = integrate([&](double r) { return inner_t(r, true); }, 0.0, R, ropt);
        Result im = integrate([&](double r) { return inner_t(r, false); }, 0.0, R, ropt);
        out.value = {re.value, im.value};
        out.error = re.error + im.error;
        out.evaluations = evals;
        return out;
    }
    throw std::invalid_argument(
        "oscillatory_oracle: callable amplitudes are supported for the 2D phase only");
}

// ---------------------------------------------------------------------------
// Asymptotic-law fitting
// ---------------------------------------------------------------------------

enum class FitModel { pure_power, power_with_log };

struct FitResult {
    FitModel model;
    double exponent;          // alpha in C lambda^{-alpha} (pinned to 1 for the log model)
    double coefficient;       // C, or C_log for the log model
    double secondary;         // unused / constant B in (C_log ln lambda + B)/lambda
    double max_rel_residual;
};

namespace detail {

inline void validate_samples(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 4)
        throw std::invalid_argument("fit_asymptotic: need at least 4 samples");
    double lmin = samples[0].first, lmax = samples[0].first;
    for (auto& [l, v] : samples) {
        if (l <= 0.0 || v == 0.0 || !std::isfinite(v))
            throw std::invalid_argument("fit_asymptotic: samples must be nonzero at lambda > 0");
        lmin = std::min(lmin, l);
        lmax = std::max(lmax, l);
    }
    if (lmax / lmin < 99.0)
        throw std::invalid_argument("fit_asymptotic: lambda must span >= 2 decades");
}

// least squares for y ~ a x + b
inline std::pair<double, double> line_fit(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-12 * n * sxx)
        throw std::runtime_error("fit: degenerate design matrix");
    const double a = (n * sxy - sx * sy) / det;
    const double b = (sy - a * sx) / n;
    return {a, b};
}

} // namespace detail

inline FitResult fit_asymptotic(std::span<const std::pair<double, double>> samples,
                                FitModel model) {
    detail::validate_samples(samples);
    FitResult fr{};
    fr.model = model;
    const size_t n = samples.size();
    std::vector<double> x(n), y(n);
    if (model == FitModel::pure_power) {
        for (size_t i = 0; i < n; ++i) {
            x[i] = std::log(samples[i].first);
            y[i] = std::log(std::abs(samples[i].second));
        }
        auto [slope, inter] = detail::line_fit(x, y);
        fr.exponent = -slope;
        fr.coefficient = std::exp(inter);
        fr.secondary = 0.0;
        double mr = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double pred = fr.coefficient * std::pow(samples[i].first, -fr.exponent);
            mr = std::max(mr, std::abs(pred - samples[i].second) / std::abs(samples[i].second));
        }
        fr.max_rel_residual = mr;
        return fr;
    }
    // power_with_log: value * lambda = C_log ln(lambda) + B
    for (size_t i = 0; i < n; ++i) {
        x[i] = std::log(samples[i].first);
        y[i] = samples[i].second * samples[i].first;
    }
    auto [clog, b] = detail::line_fit(x, y);
    fr.exponent = 1.0;
    fr.coefficient = clog;
    fr.secondary = b;
    double mr = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double pred = (clog * x[i] + b) / samples[i].first;
        mr = std::max(mr, std::abs(pred - samples[i].second) / std::abs(samples[i].second));
    }
    fr.max_rel_residual = mr;
    return fr;
}

/// Linear fit against a basis of known powers { lambda^{-p_0}, lambda^{-p_1}, ... }
/// (p_0 = predicted leading power).  Returns the basis coefficients plus the
/// exponent recovered by a pure-power refit after subtracting the fitted
/// correction terms.  This is how a sweep is compared against a residue
/// prediction whose subleading poles are known: a naive one-term fit would be
/// biased by the correction terms at any practical lambda.
struct CorrectedFit {
    std::vector<double> coefficients; // per basis power
    double exponent_refit;
    double coefficient_refit;
    double max_rel_residual;
};

inline CorrectedFit fit_with_known_powers(std::span<const std::pair<double, double>> samples,
                                          std::span<const double> powers) {
    detail::validate_samples(samples);
    const size_t n = samples.size(), m = powers.size();
    if (m < 1 || m > 6 || n < m)
        throw std::invalid_argument("fit_with_known_powers: bad basis size");
    // normal equations for min || A c - b ||
    std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
    std::vector<double> atb(m, 0.0);
    std::vector<std::vector<double>> A(n, std::vector<double>(m));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) A[i][j] = std::pow(samples[i].first, -powers[j]);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) {
            atb[j] += A[i][j] * samples[i].second;
            for (size_t l = 0; l < m; ++l) ata[j][l] += A[i][j] * A[i][l];
        }
    }
    // Gaussian elimination with partial pivoting
    std::vector<double> c(m);
    {
        auto M = ata;
        auto rhs = atb;
        for (size_t col = 0; col < m; ++col) {
            size_t piv = col;
            for (size_t r = col + 1; r < m; ++r)
                if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
            std::swap(M[piv], M[col]);
            std::swap(rhs[piv], rhs[col]);
            if (std::abs(M[col][col]) < 1e-300)
                throw std::runtime_error("fit_with_known_powers: singular normal equations");
            for (size_t r = col + 1; r < m; ++r) {
                const double f = M[r][col] / M[col][col];
                for (size_t cc = col; cc < m; ++cc) M[r][cc] -= f * M[col][cc];
                rhs[r] -= f * rhs[col];
            }
        }
        for (size_t col = m; col-- > 0;) {
            double acc = rhs[col];
            for (size_t cc = col + 1; cc < m; ++cc) acc -= M[col][cc] * c[cc];
            c[col] = acc / M[col][col];
        }
    }
    CorrectedFit cf;
    cf.coefficients = c;
    double mr = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double pred = 0.0;
        for (size_t j = 0; j < m; ++j) pred += c[j] * A[i][j];
        mr = std::max(mr, std::abs(pred - samples[i].second) / std::abs(samples[i].second));
    }
    cf.max_rel_residual = mr;
    // refit the leading exponent on correction-subtracted data
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        double corrected = samples[i].second;
        for (size_t j = 1; j < m; ++j) corrected -= c[j] * A[i][j];
        if (corrected <= 0.0) corrected = std::abs(corrected) + 1e-300;
        x[i] = std::log(samples[i].first);
        y[i] = std::log(corrected);
    }
    auto [slope, inter] = detail::line_fit(x, y);
    cf.exponent_refit = -slope;
    cf.coefficient_refit = std::exp(inter);
    return cf;
}

/// One Richardson step ladder for f(lambda_i) -> limit assuming an error term
/// c * lambda^{-order}, on a geometric grid with known ratio.
inline double richardson_limit(std::span<const double> values, double ratio, double order) {
    if (values.size() < 2) throw std::invalid_argument("richardson_limit: need >= 2 values");
    std::vector<double> cur(values.begin(), values.end());
    const double w = std::pow(ratio, order);
    double p = order;
    while (cur.size() > 1) {
        std::vector<double> next(cur.size() - 1);
        const double wp = std::pow(ratio, p);
        for (size_t i = 0; i + 1 < cur.size(); ++i)
            next[i] = (wp * cur[i + 1] - cur[i]) / (wp - 1.0);
        cur = std::move(next);
        p += 1.0;
    }
    (void)w;
    return cur[0];
}

} // namespace oscitrace::quad
