#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "oscitrace/quadrature.hpp"
#include "oscitrace/specfun.hpp"

using namespace oscitrace;
using std::numbers::pi;

TEST_CASE("basic integrals") {
    auto one = quad::integrate([](double) { return 1.0; }, 0.0, 1.0);
    CHECK(one.value == Catch::Approx(1.0).epsilon(1e-14));

    auto gauss = quad::integrate_to_inf([](double x) { return std::exp(-x * x); }, 0.0);
    CHECK(gauss.value == Catch::Approx(0.88622692545275801).epsilon(1e-11));
}

TEST_CASE("declared algebraic endpoint singularity") {
    auto r = quad::integrate_singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                                      quad::SingularEnd::lower, 0.5);
    CHECK(r.value == Catch::Approx(2.0).epsilon(1e-12));

    // upper-endpoint variant: int_0^1 (1-x)^{-1/3} dx = 3/2
    auto u = quad::integrate_singular([](double x) { return std::pow(1.0 - x, -1.0 / 3.0); },
                                      0.0, 1.0, quad::SingularEnd::upper, 1.0 / 3.0);
    CHECK(u.value == Catch::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("declared singularity agrees with shifted naive integration") {
    // property from the module contract, s in {0.2, 0.5, 0.8}
    for (double s : {0.2, 0.5, 0.8}) {
        auto f = [s](double x) { return std::pow(x, -s) * std::cos(x); };
        auto a = quad::integrate_singular(f, 0.0, 1.0, quad::SingularEnd::lower, s);
        quad::Options opt;
        opt.rel_tol = 1e-9;
        opt.max_panels = 100000;
        auto b = quad::integrate(f, 1e-6, 1.0, opt);
        const double missing = std::pow(1e-6, 1.0 - s) / (1.0 - s); // int_0^eps x^-s (1+O(eps^2))
        CHECK(a.value == Catch::Approx(b.value + missing).margin(5e-7 + a.error + b.error));
    }
}

TEST_CASE("convergence error carries the best estimate") {
    quad::Options opt;
    opt.rel_tol = 1e-15;
    opt.max_panels = 8;
    bool threw = false;
    try {
        quad::integrate([](double x) { return std::pow(std::abs(x - 0.3337), -0.4); }, 0.0, 1.0,
                        opt);
    } catch (const convergence_error& e) {
        threw = true;
        CHECK(std::isfinite(e.best_value));
        CHECK(e.best_error > 0.0);
    }
    CHECK(threw);
}

TEST_CASE("gaussian radial oracle at lambda = 0 and monotonicity") {
    auto v0 = quad::gaussian_oracle_radial({5, 2}, 0.0);
    CHECK(v0.value == Catch::Approx(pi / 2.0).epsilon(1e-10));
    double prev = v0.value;
    for (double lam : {1.0, 10.0, 100.0, 1e4}) {
        double v = quad::gaussian_oracle_radial({5, 2}, lam).value;
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("gaussian radial oracle frozen value at lambda = 1e4") {
    // frozen from an independent high-precision evaluation of the radial form
    auto v = quad::gaussian_oracle_radial({5, 2}, 1e4);
    CHECK(v.value == Catch::Approx(0.00309746853825).epsilon(1e-8));
}

TEST_CASE("3D oscillatory oracle matches the radial reduction") {
    auto a = AmplitudeSpec::gaussian(3);
    for (double lam : {0.0, 1.0, 10.0, 100.0}) {
        auto osc = quad::oscillatory_oracle(quad::PhaseKind::t_rk_v, {5, 2}, a, lam);
        auto rad = quad::gaussian_oracle_radial({5, 2}, lam);
        CHECK(osc.value.imag() == Catch::Approx(0.0).margin(1e-9 * std::abs(osc.value.real())));
        CHECK(osc.value.real() == Catch::Approx(rad.value).epsilon(1e-8));
    }
}

TEST_CASE("2D oscillatory oracle, separable gaussian at lambda = 0") {
    auto a = AmplitudeSpec::gaussian(2);
    auto v = quad::oscillatory_oracle(quad::PhaseKind::t_rk, {5, 1}, a, 0.0);
    // int_R e^{-t^2} dt * int_0^inf e^{-r^2} dr = sqrt(pi) * sqrt(pi)/2
    CHECK(v.value.real() == Catch::Approx(std::sqrt(pi) * std::sqrt(pi) / 2.0).epsilon(1e-9));
    CHECK(std::abs(v.value.imag()) < 1e-10);
}

TEST_CASE("callable amplitude: guard and small-lambda agreement") {
    auto smooth = AmplitudeSpec::callable(
        2, [](std::span<const double> u) { return std::exp(-u[0] * u[0] - u[1] * u[1]); }, 7.0);
    auto sep = AmplitudeSpec::gaussian(2);
    auto v1 = quad::oscillatory_oracle(quad::PhaseKind::t_rk, {3, 1}, smooth, 50.0);
    auto v2 = quad::oscillatory_oracle(quad::PhaseKind::t_rk, {3, 1}, sep, 50.0);
    CHECK(v1.value.real() == Catch::Approx(v2.value.real()).epsilon(1e-5));
    CHECK(v1.value.imag() == Catch::Approx(v2.value.imag()).epsilon(1e-5));
    CHECK_THROWS_AS(quad::oscillatory_oracle(quad::PhaseKind::t_rk, {3, 1}, smooth, 1e5),
                    budget_error);
}

TEST_CASE("fit_asymptotic recovers exact synthetic models") {
    std::vector<std::pair<double, double>> s;
    for (double e = 3.0; e <= 6.01; e += 0.5) {
        const double lam = std::pow(10.0, e);
        s.emplace_back(lam, 3.0 * std::pow(lam, -0.8));
    }
    auto fit = quad::fit_asymptotic(s, quad::FitModel::pure_power);
    CHECK(fit.exponent == Catch::Approx(0.8).epsilon(1e-12));
    CHECK(fit.coefficient == Catch::Approx(3.0).epsilon(1e-12));
    CHECK(fit.max_rel_residual < 1e-12);

    std::vector<std::pair<double, double>> sl;
    for (double e = 3.0; e <= 6.01; e += 0.5) {
        const double lam = std::pow(10.0, e);
        sl.emplace_back(lam, (pi * std::log(lam) - 1.8133764923916035) / lam);
    }
    auto lfit = quad::fit_asymptotic(sl, quad::FitModel::power_with_log);
    CHECK(lfit.coefficient == Catch::Approx(pi).epsilon(1e-12));
    CHECK(lfit.secondary == Catch::Approx(-1.8133764923916035).epsilon(1e-10));
    CHECK(lfit.max_rel_residual < 1e-12);
}

TEST_CASE("fit_asymptotic input validation") {
    std::vector<std::pair<double, double>> s{{1e3, 1.0}, {2e3, 0.5}, {4e3, 0.25}};
    CHECK_THROWS_AS(quad::fit_asymptotic(s, quad::FitModel::pure_power), std::invalid_argument);
    s = {{1e3, 1.0}, {2e3, 0.5}, {3e3, 0.25}, {4e3, 0.125}}; // < 2 decades
    CHECK_THROWS_AS(quad::fit_asymptotic(s, quad::FitModel::pure_power), std::invalid_argument);
}

TEST_CASE("fit_with_known_powers separates leading term from corrections") {
    std::vector<std::pair<double, double>> s;
    for (double e = 3.0; e <= 6.01; e += 0.5) {
        const double lam = std::pow(10.0, e);
        s.emplace_back(lam, 6.5 * std::pow(lam, -0.8) - 11.0 / lam + 6.0 * std::pow(lam, -1.2));
    }
    const double powers[] = {0.8, 1.0, 1.2};
    auto cf = quad::fit_with_known_powers(s, powers);
    CHECK(cf.coefficients[0] == Catch::Approx(6.5).epsilon(1e-9));
    CHECK(cf.coefficients[1] == Catch::Approx(-11.0).epsilon(1e-7));
    CHECK(cf.exponent_refit == Catch::Approx(0.8).epsilon(1e-9));
    CHECK(cf.max_rel_residual < 1e-10);
}

TEST_CASE("richardson limit on a geometric grid") {
    std::vector<double> vals;
    for (double lam : {1e6, 1e7, 1e8}) vals.push_back(-1.5 + 2.75 / lam);
    CHECK(quad::richardson_limit(vals, 10.0, 1.0) == Catch::Approx(-1.5).margin(1e-12));
}
