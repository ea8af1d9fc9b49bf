#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "zsspec/comb.hpp"
#include "zsspec/errors.hpp"

using namespace zsspec;

namespace {

constexpr double kPi = std::numbers::pi;

// Characterization of the greedy subset without running the procedure: n is kept iff
// h_n > 0 and no kept slit earlier in (height desc, abscissa asc) order covers u_n.
std::vector<bool> brute_force_greedy(const Comb& c) {
    const std::size_t n = c.size();
    auto before = [&](std::size_t s, std::size_t t) {
        return c.h()[s] > c.h()[t] || (c.h()[s] == c.h()[t] && s < t);
    };
    std::vector<std::vector<bool>> found;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (std::size_t t = 0; t < n && ok; ++t) {
            bool covered = false;
            for (std::size_t s = 0; s < n; ++s)
                if ((mask >> s & 1u) && before(s, t) && !(std::abs(c.u()[t] - c.u()[s]) > c.h()[s])) covered = true;
            const bool want = c.h()[t] > 0.0 && !covered;
            ok = want == static_cast<bool>(mask >> t & 1u);
        }
        if (ok) {
            std::vector<bool> v(n);
            for (std::size_t t = 0; t < n; ++t) v[t] = mask >> t & 1u;
            found.push_back(v);
        }
    }
    REQUIRE(found.size() == 1);
    return found.front();
}

}  // namespace

TEST_CASE("single slit map") {
    const auto z = single_slit_map(0.0, 1.0, cplx(0.0, 2.0));
    CHECK(z.real() == doctest::Approx(0.0));
    CHECK(z.imag() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    // z(iv) = iv (1 + o(1))
    const auto far = single_slit_map(0.0, 2.0, cplx(0.0, 1e6));
    CHECK(std::abs(far / cplx(0.0, 1e6) - 1.0) < 1e-11);
    // z(k) = k - u0 + o(1) in every direction
    const auto side = single_slit_map(1.0, 1.0, cplx(-1e5, 3.0));
    CHECK(std::abs(side - cplx(-1e5 - 1.0, 3.0)) < 1e-4);
    // slit tips map to the gap ends, and the gap is (-h, h)
    CHECK(single_slit_map(0.0, 1.5, cplx(1e-12, 0.0)).real() == doctest::Approx(1.5));
    CHECK(single_slit_map(0.0, 1.5, cplx(-1e-12, 0.0)).real() == doctest::Approx(-1.5));
    CHECK_THROWS_AS(single_slit_map(0.0, 1.0, cplx(0.0, 0.5)), InputError);
    CHECK_THROWS_AS(single_slit_map(2.0, 1.0, cplx(2.0, -1.0)), InputError);
    CHECK_NOTHROW(single_slit_map(0.0, 1.0, cplx(0.0, 1.5)));
}

TEST_CASE("single slit map keeps the upper half plane") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(-5.0, 5.0), im(1e-3, 5.0), hh(0.1, 3.0);
    for (int i = 0; i < 500; ++i) {
        const double h = hh(rng);
        cplx k(re(rng), im(rng));
        if (k.real() == 0.0) continue;
        CHECK(single_slit_map(0.0, h, k).imag() > 0.0);
    }
}

TEST_CASE("single slit closed forms") {
    CHECK(single_slit_q0(2.0) == 2.0);
    CHECK(single_slit_nu(0.7) == doctest::Approx(0.7));
    CHECK(single_slit_nu(0.0) == 0.0);
}

TEST_CASE("comb construction") {
    const Comb c({0.0, 1.0, 3.5}, {0.2, 0.0, 1.0});
    CHECK(c.u_star() == doctest::Approx(1.0));
    CHECK(c.open_count() == 2);
    CHECK(std::isinf(Comb({0.0}, {1.0}).u_star()));
    CHECK_THROWS_AS(Comb({0.0, 0.0}, {1.0, 1.0}), InputError);
    CHECK_THROWS_AS(Comb({0.0, 1.0}, {1.0, -1.0}), InputError);
    CHECK_THROWS_AS(Comb({0.0, 1.0}, {1.0}), InputError);
}

TEST_CASE("greedy selection examples") {
    const auto r = greedy_select(Comb({0.0, 0.5, 10.0}, {1.0, 0.9, 0.3}));
    CHECK(r.order == std::vector<std::size_t>{0, 2});
    CHECK(r.comb.h() == std::vector<double>{1.0, 0.0, 0.3});

    const auto eq = greedy_select(Comb({0.0, 3.0}, {1.0, 1.0}));
    CHECK(eq.order == std::vector<std::size_t>{0, 1});

    // tie on height: the smaller abscissa wins
    const auto tie = greedy_select(Comb({0.0, 0.5}, {1.0, 1.0}));
    CHECK(tie.order == std::vector<std::size_t>{0});

    // the boundary |u_n - u_s| = h_s excludes n
    const auto edge = greedy_select(Comb({0.0, 1.0}, {1.0, 0.5}));
    CHECK(edge.order == std::vector<std::size_t>{0});

    const auto one = greedy_select(Comb({2.0}, {0.4}));
    CHECK(one.comb.h() == std::vector<double>{0.4});

    CHECK(greedy_select(Comb({0.0, 1.0}, {0.0, 0.0})).order.empty());
}

TEST_CASE("greedy agrees with the brute-force characterization and is idempotent") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> gap(0.5, 2.0), height(0.0, 1.0);
    std::uniform_int_distribution<int> size(1, 9), coin(0, 4);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = size(rng);
        std::vector<double> u, h;
        double x = 0.0;
        for (int i = 0; i < n; ++i) {
            x += gap(rng);
            u.push_back(x);
            h.push_back(coin(rng) == 0 ? 0.0 : height(rng));
        }
        if (trial % 10 == 0 && n > 1) h[1] = h[0];  // exercise ties
        const Comb c(u, h);
        const auto r = greedy_select(c);
        const auto expect = brute_force_greedy(c);
        for (int i = 0; i < n; ++i) CHECK((r.comb.h()[i] > 0.0) == expect[i]);
        for (std::size_t a = 0; a < r.order.size(); ++a)
            for (std::size_t b = a + 1; b < r.order.size(); ++b) {
                CHECK(std::abs(u[r.order[a]] - u[r.order[b]]) > h[r.order[a]]);
                CHECK(h[r.order[a]] >= h[r.order[b]]);
            }
        const auto again = greedy_select(r.comb);
        CHECK(again.comb.h() == r.comb.h());
    }
}

TEST_CASE("capacity of interval unions") {
    CHECK(SegmentCapacity({{-1.0, 1.0}}).value() == 0.5);
    CHECK(SegmentCapacity({}).value() == 0.0);
    const SegmentCapacity two({{2.0, 3.0}, {0.0, 1.0}});
    CHECK(two.value() == 0.5);
    CHECK(two.set().front().lo == 0.0);
    const auto d = two.derivative_at_infinity();
    CHECK(std::abs(d.real() - 0.5) <= 1e-8);
    CHECK(std::abs(d.imag()) <= 1e-8);
    // a single evaluation at z = 1e6 agrees to O(1/z)
    const cplx z(1e6, 0.0);
    CHECK(std::abs(z * two.ahlfors(z) - 0.5) <= 1e-5);
    CHECK_THROWS_AS(two.phi(cplx(0.5, 0.0)), InputError);
    CHECK_THROWS_AS(SegmentCapacity({{0.0, 1.0}, {0.5, 2.0}}), InputError);
    CHECK_THROWS_AS(SegmentCapacity({{1.0, 0.0}}), InputError);
    CHECK(capacity_segments({{0.0, 4.0}}).value() == 1.0);
}

TEST_CASE("ahlfors function is bounded by one off the set") {
    const SegmentCapacity e({{-2.0, -1.5}, {0.0, 0.1}, {1.0, 3.0}});
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> re(-5.0, 5.0), im(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const cplx z(re(rng), im(rng));
        if (z.imag() == 0.0) continue;
        CHECK(std::abs(e.ahlfors(z)) <= 1.0 + 1e-12);
    }
    // on the real axis between the pieces f is real and inside (-1, 1)
    CHECK(std::abs(e.ahlfors(cplx(0.5, 0.0))) < 1.0);
    CHECK(std::abs(e.ahlfors(cplx(-1.0, 0.0)).imag()) < 1e-15);
}

TEST_CASE("gap configuration validation") {
    CHECK_THROWS_AS(GapConfiguration({{0.0, 1.0}, {0.5, 2.0}}), InputError);
    CHECK_THROWS_AS(GapConfiguration({{0.0, 1.0}, {1.0, 2.0}}), InputError);
    CHECK_THROWS_AS(GapConfiguration({{1.0, 0.0}}), InputError);
    CHECK_THROWS_AS(GapConfiguration({{0.0, 1.0}}, {0, 1}), InputError);
    const GapConfiguration g({{-3.0, -1.0}, {1.0, 2.0}, {2.5, 4.0}});
    CHECK(g.min_band() == doctest::Approx(0.5));
    CHECK(g.labels() == std::vector<int>{0, 1, 2});
    CHECK(std::isinf(GapConfiguration({{0.0, 1.0}}).min_band()));
}

TEST_CASE("single gap profile is the bare square root") {
    const auto p = solve_gap_profile(GapConfiguration({{-1.0, 1.0}}));
    REQUIRE(p.gaps.size() == 1);
    const auto& g = p.gaps[0];
    CHECK(g.h == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.A == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.Q0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g.y_max == 0.0);
    CHECK(g.mu_plus == doctest::Approx(1.0));
    CHECK(g.mu_minus == doctest::Approx(-1.0));
    for (std::size_t k = 0; k < g.x.size(); ++k) CHECK(g.v[k] == doctest::Approx(std::sqrt(1 - g.x[k] * g.x[k])));
}

TEST_CASE("two-gap profile matches the finite-gap construction") {
    // Reference values from k'(z) = (z^2 + b z + c) / sqrt((z+3)(z+1)(z-1)(z-2)) with b, c fixed by
    // zero periods over both gaps, integrated independently with adaptive quadrature.
    const auto p = solve_gap_profile(GapConfiguration({{-3.0, -1.0}, {1.0, 2.0}}));
    CHECK(std::abs(p.gaps[0].h - 1.011328710737282) <= 1e-9);
    CHECK(std::abs(p.gaps[1].h - 0.522289310126617) <= 1e-9);
    CHECK(std::abs(p.gaps[0].A - 1.01157426720553) <= 1e-9);
    CHECK(std::abs(p.gaps[1].A - 0.2612060701333739) <= 1e-9);
    CHECK(p.residual < 1e-12 * (1 + 1.1));
}

TEST_CASE("profile invariants and fixed-point residual") {
    const GapConfiguration cfg({{-2.0, -1.0}, {1.0, 2.0}, {3.0, 3.2}});
    const auto p = solve_gap_profile(cfg);
    for (std::size_t i = 0; i < p.gaps.size(); ++i) {
        const auto& g = p.gaps[i];
        CHECK(p.v_at(i, g.z_minus) == 0.0);
        CHECK(p.v_at(i, g.z_plus) == 0.0);
        CHECK(g.y_minus >= 0.0);
        CHECK(g.y_plus >= 0.0);
        for (std::size_t k = 0; k < g.x.size(); ++k) {
            const double vn = std::sqrt((g.x[k] - g.z_minus) * (g.z_plus - g.x[k]));
            CHECK(g.v[k] >= vn);
            CHECK(g.y[k] >= 0.0);
            // the stored iterate solves the identity to the stopping tolerance
            CHECK(std::abs(p.v_at(i, g.x[k]) - g.v[k]) <= 1e-11);
        }
        CHECK(2 * std::abs(g.mu_plus) == doctest::Approx(g.length() * std::pow(1 + g.y_plus, 2)));
        CHECK(g.h >= g.length() / 2);
        CHECK(g.z_minus < g.x_peak);
        CHECK(g.x_peak < g.z_plus);
    }
    // the symmetric pair has symmetric heights
    CHECK(p.gaps[0].h == doctest::Approx(p.gaps[1].h).epsilon(1e-3));
}

TEST_CASE("profile node counts agree") {
    const GapConfiguration cfg({{-3.0, -1.0}, {1.0, 2.0}});
    ProfileOptions a, b;
    a.nodes = 32;
    b.nodes = 128;
    const auto pa = solve_gap_profile(cfg, a), pb = solve_gap_profile(cfg, b);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::abs(pa.gaps[i].h - pb.gaps[i].h) <= 1e-8);
        CHECK(std::abs(pa.gaps[i].A - pb.gaps[i].A) <= 1e-8);
    }
}

TEST_CASE("profile errors") {
    const GapConfiguration cfg({{-3.0, -1.0}, {1.0, 2.0}});
    ProfileOptions o;
    o.max_iter = 1;
    CHECK_THROWS_AS(solve_gap_profile(cfg, o), ConvergenceError);
    o.max_iter = 100;
    o.nodes = 50;
    CHECK_THROWS_AS(solve_gap_profile(cfg, o), InputError);
    CHECK_THROWS_AS(solve_gap_profile(GapConfiguration{}), InputError);
}

TEST_CASE("lindelof checks") {
    const Comb h({-1.0, 0.0, 2.0}, {0.0, 1.0, 0.0});
    const Comb none({-1.0, 0.0, 2.0}, {0.0, 0.0, 0.0});
    const Comb smaller({-1.0, 0.0, 2.0}, {0.0, 0.6, 0.0});
    const std::vector<cplx> probes = {{0.0, 2.0}, {0.3, 0.2}, {-2.0, 0.5}, {5.0, 1e-3}, {0.0, 0.5}};
    const auto r0 = lindelof_check(h, none, probes);
    CHECK(r0.all_passed());
    CHECK(r0.entries.size() == 5);  // four probes plus Q0; the probe on the slit is skipped
    const auto r1 = lindelof_check(h, smaller, probes);
    CHECK(r1.all_passed());
    bool saw_q = false;
    for (const auto& e : r1.entries) {
        if (e.kind == "Q0") {
            saw_q = true;
            CHECK(e.smaller_heights_value == doctest::Approx(0.18));
            CHECK(e.larger_heights_value == doctest::Approx(0.5));
        }
    }
    CHECK(saw_q);
    CHECK_THROWS_AS(lindelof_check(smaller, h, probes), InputError);
    CHECK_THROWS_AS(lindelof_check(h, Comb({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}), probes), InputError);

    const Comb multi({0.0, 3.0}, {1.0, 1.0});
    const Comb multi_small({0.0, 3.0}, {0.5, 1.0});
    const auto r2 = lindelof_check(multi, multi_small, probes);
    CHECK(r2.entries.empty());
    CHECK(!r2.not_computable.empty());
    // operator-backed: constant potential amplitudes 1 and 0.5 give Q0 = a^2 / 2
    const auto r3 = lindelof_check(multi, multi_small, probes, OperatorBacking{0.5, {3.0, 3.1}},
                                   OperatorBacking{0.125, {3.05, 3.2}});
    CHECK(r3.all_passed());
    CHECK(r3.entries.size() == 3);
}
