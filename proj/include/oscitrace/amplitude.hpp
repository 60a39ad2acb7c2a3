#pragma once

// Amplitude specifications for the oscillatory model integrals.  Three kinds:
// separable Gaussians exp(-sum (u_i/w_i)^2), monomials times such Gaussians,
// and a generic smooth callable with a declared decay radius.

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace oscitrace {

class AmplitudeSpec {
  public:
    enum class Kind { gaussian_separable, polynomial_times_gaussian, callable_smooth };

    static AmplitudeSpec gaussian(int arity, double scale = 1.0) {
        AmplitudeSpec a;
        a.kind_ = Kind::gaussian_separable;
        a.arity_ = arity;
        a.scale_ = scale;
        a.powers_.assign(arity, 0);
        a.widths_.assign(arity, 1.0);
        return a;
    }

    /// prod_i u_i^{powers[i]} exp(-u_i^2)
    static AmplitudeSpec poly_gaussian(std::vector<int> powers, double scale = 1.0) {
        AmplitudeSpec a;
        a.kind_ = Kind::polynomial_times_gaussian;
        a.arity_ = static_cast<int>(powers.size());
        a.scale_ = scale;
        a.powers_ = std::move(powers);
        a.widths_.assign(a.arity_, 1.0);
        return a;
    }

    static AmplitudeSpec callable(int arity, std::function<double(std::span<const double>)> fn,
                                  double decay_radius = 8.0) {
        AmplitudeSpec a;
        a.kind_ = Kind::callable_smooth;
        a.arity_ = arity;
        a.fn_ = std::move(fn);
        a.decay_radius_ = decay_radius;
        return a;
    }

    Kind kind() const { return kind_; }
    int arity() const { return arity_; }
    double scale() const { return scale_; }
    double decay_radius() const { return decay_radius_; }
    bool separable() const { return kind_ != Kind::callable_smooth; }
    int power(int var) const { return separable() ? powers_[var] : 0; }
    double width(int var) const { return separable() ? widths_[var] : 1.0; }

    double operator()(std::span<const double> u) const {
        if (static_cast<int>(u.size()) != arity_)
            throw std::invalid_argument("AmplitudeSpec: arity mismatch");
        if (kind_ == Kind::callable_smooth) {
            for (double x : u)
                if (std::abs(x) > decay_radius_) return 0.0;
            return fn_(u);
        }
        double v = scale_;
        for (int i = 0; i < arity_; ++i) v *= factor(i, u[i]);
        return v;
    }

    /// One-dimensional factor of a separable amplitude.
    double factor(int var, double u) const {
        if (!separable())
            throw std::logic_error("AmplitudeSpec: factor() needs a separable kind");
        double v = std::exp(-(u / widths_[var]) * (u / widths_[var]));
        for (int p = 0; p < powers_[var]; ++p) v *= u;
        return v;
    }

    double value_at_origin() const {
        if (separable()) {
            for (int p : powers_)
                if (p > 0) return 0.0;
            return scale_;
        }
        std::vector<double> z(arity_, 0.0);
        return fn_(z);
    }

    /// j-th derivative at 0 of the factor in variable `var`.  Analytic for the
    /// structured kinds: d^j/du^j [u^m e^{-u^2/w^2}]_{u=0} = j! * c_{j-m} where
    /// c_{2i} = (-1)^i / (w^{2i} i!) are the Gaussian Taylor coefficients.
    double factor_derivative_at_zero(int var, int j) const {
        if (!separable())
            throw std::logic_error(
                "AmplitudeSpec: analytic derivatives need a separable kind");
        const int m = powers_[var];
        if (j < m || (j - m) % 2 != 0) return 0.0;
        const int i = (j - m) / 2;
        double c = (i % 2 == 0) ? 1.0 : -1.0;
        for (int t = 1; t <= i; ++t) c /= (widths_[var] * widths_[var] * t);
        double fact = 1.0;
        for (int t = 2; t <= j; ++t) fact *= t;
        return fact * c;
    }

    /// Product of all separable factors except `var`, evaluated pointwise.
    double cofactor(int var, std::span<const double> u) const {
        double v = scale_;
        for (int i = 0; i < arity_; ++i) {
            if (i == var) continue;
            v *= factor(i, u[i < var ? i : i - 1]);
        }
        return v;
    }

  private:
    Kind kind_ = Kind::gaussian_separable;
    int arity_ = 0;
    double scale_ = 1.0;
    std::vector<int> powers_;
    std::vector<double> widths_;
    std::function<double(std::span<const double>)> fn_;
    double decay_radius_ = 8.0;
};

} // namespace oscitrace
