#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zsspec/errors.hpp"
#include "zsspec/quasimomentum.hpp"

using namespace zsspec;

namespace {

constexpr double kPi = std::numbers::pi;

Potential cos_potential(double c) { return Potential::fourier({{0.0}}, {{0.0, c}}); }

}  // namespace

TEST_CASE("gap_v on the constant family") {
    const double a = 0.8;
    const auto pot = Potential::constant_offdiagonal(a);
    const auto s = analyze_potential(pot, 1);
    const auto& g = s.gap(0);
    CHECK(gap_v(pot, g, 0.0) == doctest::Approx(a).epsilon(1e-10));
    for (double x : {-0.7, -0.3, 0.25, 0.6}) CHECK(gap_v(pot, g, x) == doctest::Approx(std::sqrt(a * a - x * x)).epsilon(1e-9));
    CHECK(gap_v(pot, g, g.z_minus) == doctest::Approx(0.0).epsilon(1e-4));
    CHECK(gap_v(pot, g, g.z_crit) == doctest::Approx(g.h).epsilon(1e-12));
    CHECK_THROWS_AS(gap_v(pot, g, 2.0), InputError);
    CHECK_THROWS_AS(gap_v(pot, s.gap(1), s.gap(1).z_crit), InputError);
}

TEST_CASE("actions, masses and moments of the constant family") {
    for (double a : {0.1, 0.5, 1.0, 2.0}) {
        const auto s = analyze_potential(Potential::constant_offdiagonal(a), 3);
        const auto& r = s.actions.at(3);
        CHECK(r.n == 0);
        CHECK(std::abs(r.A - a * a) <= 1e-8 * a * a);
        CHECK(std::abs(r.J - a) <= 1e-8 * a);
        CHECK(std::abs(r.mu_plus - a) <= 1e-8 * a);
        CHECK(std::abs(r.mu_minus + a) <= 1e-8 * a);
        CHECK(r.mass_reliable);
        CHECK(std::abs(r.mu_plus_fit - a) <= 1e-4 * a);
        CHECK(r.e_charge == doctest::Approx(2 * a / (4 * kPi)).epsilon(1e-8));
        CHECK(r.d_moment == doctest::Approx(a * a / 4).epsilon(1e-8));
        REQUIRE(s.moments);
        CHECK(std::abs(s.moments->Q0 - a * a / 2) <= 1e-8 * a * a);
        CHECK(std::abs(s.moments->I_D - a * a) <= 1e-8 * a * a);
        for (const auto& other : s.actions) {
            if (other.n == 0) continue;
            CHECK(other.A == 0.0);
            CHECK(other.mu_plus == 0.0);
            CHECK(other.mu_minus == 0.0);
        }
    }
}

TEST_CASE("zero potential moments vanish") {
    const auto s = analyze_potential(Potential::zero(), 3);
    CHECK(s.moments->Q0 == 0.0);
    CHECK(s.moments->I_D == 0.0);
    CHECK(s.moments->identity_match == NormConvention::both);
}

TEST_CASE("per-gap sandwiches and mass bounds") {
    for (const auto& pot : {cos_potential(0.3), cos_potential(1.0),
                            Potential::fourier({{0.0, 0.3}}, {{0.2, 0.0, 0.4}})}) {
        const auto s = analyze_potential(pot, 4);
        for (std::size_t i = 0; i < s.gaps.size(); ++i) {
            const auto& g = s.gaps[i];
            const auto& r = s.actions[i];
            if (g.is_closed) continue;
            const double len = g.length();
            const double lo = std::max(len * len / 4, len * g.h / kPi);
            const double hi = 2 * len * g.h / kPi;
            CHECK(r.A >= lo * (1 - 1e-8));
            CHECK(r.A <= hi * (1 + 1e-8));
            CHECK(2 * std::abs(r.mu_plus) >= len * (1 - 1e-8));
            CHECK(2 * std::abs(r.mu_minus) >= len * (1 - 1e-8));
            CHECK(g.h <= 2 * kPi * std::abs(r.mu_plus));
            CHECK(r.mu_plus > 0.0);
            CHECK(r.mu_minus < 0.0);
            CHECK(r.J * r.J == doctest::Approx(r.A));
        }
        const auto& m = *s.moments;
        double hinf = 0.0;
        for (const auto& g : s.gaps) hinf = std::max(hinf, g.h);
        CHECK(hinf * hinf <= 2 * m.Q0 * (1 + 1e-8));
        CHECK(std::abs(2 * m.Q0 - m.I_D) <= 1e-12 * (1 + m.I_D));
        CHECK(std::abs(m.sum_A - m.J_norm_sq) <= 1e-12 * (1 + m.sum_A));
    }
}

TEST_CASE("identity normalization is reported") {
    const auto s = analyze_potential(cos_potential(1.0), 6);
    // (1/2) of the doubled norm is int(V1^2 + V2^2) = 1/2
    CHECK(s.moments->identity_match == NormConvention::doubled);
    CHECK(s.moments->sum_A == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(s.moments->identity_residual_doubled <= 1e-8);
}

TEST_CASE("enlarging the window never decreases Q0") {
    const auto pot = cos_potential(0.3);
    double prev = 0.0;
    for (int n : {1, 2, 4, 6}) {
        const double q = analyze_potential(pot, n).moments->Q0;
        // added gaps carry actions far below the quadrature tolerance
        CHECK(q >= prev * (1 - 1e-12));
        prev = q;
    }
}

TEST_CASE("closed gaps have zero action") {
    const auto pot = Potential::constant_offdiagonal(1.0);
    const auto s = analyze_potential(pot, 2);
    const auto r = action(pot, s.gap(2));
    CHECK(r.A == 0.0);
    CHECK(r.J == 0.0);
    const auto m = effective_masses(pot, s.gap(2), 1.0, 1.0);
    CHECK(m.mu_plus == 0.0);
    CHECK(m.mu_minus == 0.0);
}
