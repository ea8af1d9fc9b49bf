#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "zsspec/errors.hpp"
#include "zsspec/monodromy.hpp"
#include "zsspec/potential.hpp"

using namespace zsspec;

namespace {

// cos sqrt(z^2 - a^2), continued through cosh below |z| = a.
double constant_delta(double a, double z) {
    return std::real(std::cos(std::sqrt(std::complex<double>(z * z - a * a, 0.0))));
}

Potential cos_potential(double c) { return Potential::fourier({{0.0}}, {{0.0, c}}); }

}  // namespace

TEST_CASE("potential evaluation") {
    const auto zero = Potential::zero();
    CHECK(zero(0.3).first == 0.0);
    CHECK(zero(0.3).second == 0.0);

    const auto c = Potential::constant_offdiagonal(0.7);
    CHECK(c(0.9).first == 0.0);
    CHECK(c(0.9).second == 0.7);

    const auto f = Potential::fourier({{0.5}, {0.0, 0.0, 2.0}}, {{0.0, 1.0}});
    const auto [v1, v2] = f(0.125);
    CHECK(v1 == doctest::Approx(0.5 + 2.0 * std::sin(4.0 * std::numbers::pi * 0.125)));
    CHECK(v2 == doctest::Approx(std::cos(2.0 * std::numbers::pi * 0.125)));
    // periodic
    CHECK(f(1.125).first == doctest::Approx(v1));

    const auto s = Potential::sampled({0.0, 1.0, 0.0, -1.0}, {2.0, 2.0, 2.0, 2.0});
    CHECK(s(0.125).first == doctest::Approx(0.5));
    CHECK(s(0.875).first == doctest::Approx(-0.5));  // wraps to the t = 1 node
    CHECK(s(0.6).second == doctest::Approx(2.0));
}

TEST_CASE("potential input errors") {
    CHECK_THROWS_AS(Potential::sampled({1.0}, {1.0}), InputError);
    CHECK_THROWS_AS(Potential::sampled({1.0, 2.0}, {1.0}), InputError);
    CHECK_THROWS_AS(Potential::constant_offdiagonal(NAN), InputError);
    CHECK_THROWS_AS(Potential::fourier({{INFINITY}}, {}), InputError);
}

TEST_CASE("potential norm") {
    CHECK(potential_norm_sq(Potential::zero()).stated == 0.0);
    const auto a = potential_norm_sq(Potential::constant_offdiagonal(1.5));
    CHECK(a.stated == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(a.doubled == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(potential_norm_sq(cos_potential(1.0)).stated == doctest::Approx(0.5).epsilon(1e-12));
    // piecewise linear hat: int of (1 - |2t - 1|)^2 over the period is 1/3
    CHECK(potential_norm_sq(Potential::sampled({0.0, 1.0}, {0.0, 0.0})).stated ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("zero potential gives cos z") {
    const auto pot = Potential::zero();
    const double tol = 1e-10;
    for (double z = -20.0; z <= 20.0; z += 0.37) {
        const auto r = integrate_monodromy(pot, z, tol);
        CHECK(std::abs(r.delta - std::cos(z)) <= 10 * tol);
        CHECK(std::abs(r.delta_prime + std::sin(z)) <= 10 * tol);
        CHECK(std::abs(r.delta_double_prime + std::cos(z)) <= 10 * tol);
    }
    const auto r = integrate_monodromy(pot, std::numbers::pi / 3);
    CHECK(r.delta == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(r.delta_prime == doctest::Approx(-std::sin(std::numbers::pi / 3)).epsilon(1e-10));
}

TEST_CASE("constant off-diagonal potential") {
    const auto pot = Potential::constant_offdiagonal(1.0);
    CHECK(lyapunov(pot, 0.0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-11));
    CHECK(lyapunov(pot, std::sqrt(1.0 + std::numbers::pi * std::numbers::pi)) == doctest::Approx(-1.0).epsilon(1e-10));
    for (double a : {0.1, 0.5, 2.0}) {
        const auto p = Potential::constant_offdiagonal(a);
        for (double z : {-7.3, -2.2, -0.4, 0.0, 0.05, 1.9, 3.3, 11.0}) {
            CHECK(std::abs(lyapunov(p, z) - constant_delta(a, z)) <= 1e-9);
        }
    }
}

TEST_CASE("wronskian and tolerance self-consistency") {
    const double tol = 1e-10;
    for (const auto& pot : {cos_potential(1.0), Potential::fourier({{0.2, 0.3}, {0.0, -0.4}}, {{0.1, 0.0, 0.5}}),
                            Potential::sampled({0.0, 0.5, -0.2, 0.1}, {1.0, 0.0, 0.3, -0.6})}) {
        for (double z : {-9.1, -3.0, -0.5, 0.0, 1.2, 4.4, 10.7}) {
            const auto r = integrate_monodromy(pot, z, tol);
            CHECK(std::abs(r.det() - 1.0) <= 10 * tol);
            CHECK(r.delta == 0.5 * (r.m[0] + r.m[3]));
            CHECK(std::abs(r.delta - lyapunov(pot, z, tol / 10)) <= 10 * tol);
        }
    }
}

TEST_CASE("derivatives match finite differences") {
    const auto pot = Potential::fourier({{0.0, 0.4}}, {{0.3, 0.0, 0.2}});
    const double tol = 1e-10;
    const double step = 1e-4;
    const double mixed = std::max(1e-6, 1e3 * tol);
    for (double z : {-5.5, -1.0, 0.3, 2.7, 6.1}) {
        const auto r = integrate_monodromy(pot, z, tol);
        const auto up = integrate_monodromy(pot, z + step, tol);
        const auto dn = integrate_monodromy(pot, z - step, tol);
        CHECK(std::abs(r.delta_prime - (up.delta - dn.delta) / (2 * step)) <= mixed);
        CHECK(std::abs(r.delta_double_prime - (up.delta_prime - dn.delta_prime) / (2 * step)) <= mixed);
    }
}

TEST_CASE("integrator argument errors") {
    CHECK_THROWS_AS(integrate_monodromy(Potential::zero(), 1.0, 0.0), InputError);
    CHECK_THROWS_AS(integrate_monodromy(Potential::zero(), INFINITY), InputError);
}
