#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <tuple>

#include "zsspec/audit.hpp"
#include "zsspec/errors.hpp"
#include "zsspec/quasimomentum.hpp"

using namespace zsspec;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

const AuditEntry& find(const AuditReport& r, const std::string& id, std::optional<double> p = std::nullopt,
                       const std::string& weight = "1") {
    for (const auto& e : r.entries)
        if (e.id == id && e.p == p && e.weight == weight) return e;
    FAIL("missing entry " << id);
    throw std::logic_error("unreachable");
}

SequenceData constant_data(double a) {
    const auto pot = Potential::constant_offdiagonal(a);
    return sequences_from_summary(analyze_potential(pot, 3), potential_norm_sq(pot), "constant a");
}

}  // namespace

TEST_CASE("weighted norms") {
    CHECK(weighted_norm({1.0, 1.0, 1.0}, 2.0) == doctest::Approx(std::sqrt(3.0)));
    CHECK(weighted_norm({3.0, -4.0}, 2.0) == doctest::Approx(5.0));
    CHECK(weighted_norm({3.0, -4.0}, kInf, {5.0, 1.0}) == 4.0);
    CHECK(weighted_norm({}, 1.5) == 0.0);
    CHECK(weighted_norm({1.0, 2.0}, 1.0, {2.0, 3.0}) == doctest::Approx(8.0));
    // doubling every weight doubles the p-th power
    const std::vector<double> f = {0.3, 1.2, 0.01, 2.5};
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        const double base = std::pow(weighted_norm(f, p, {1, 2, 3, 4}), p);
        CHECK(std::pow(weighted_norm(f, p, {2, 4, 6, 8}), p) == doctest::Approx(2 * base));
        CHECK(weighted_norm(f, p, {1, 2, 3, 4}) >= weighted_norm(f, p));
    }
    // large p does not overflow and tends to the sup norm
    CHECK(weighted_norm({1e200, 1e200}, 3.0) == doctest::Approx(1e200 * std::cbrt(2.0)));
    CHECK(weighted_norm(f, 200.0) == doctest::Approx(2.5).epsilon(1e-2));
    CHECK_THROWS_AS(weighted_norm(f, 0.5), InputError);
    CHECK_THROWS_AS(weighted_norm(f, 2.0, {1.0}), InputError);
    CHECK_THROWS_AS(weighted_norm(f, 2.0, {1.0, 1.0, 0.5, 1.0}), InputError);
}

TEST_CASE("weight parsing") {
    CHECK(parse_weight("1") == WeightKind::unit);
    CHECK(parse_weight("linear") == WeightKind::linear);
    CHECK(std::string(to_string(parse_weight("1+|n|"))) == "1+|n|");
    CHECK_THROWS_AS(parse_weight("n^2"), InputError);
}

TEST_CASE("zero potential passes every applicable entry trivially") {
    const auto pot = Potential::zero();
    const auto d = sequences_from_summary(analyze_potential(pot, 3), potential_norm_sq(pot), "zero");
    const auto r = audit_zs(d);
    CHECK(r.passed());
    CHECK(r.count(AuditStatus::fail) == 0);
    CHECK(r.count(AuditStatus::pass) > 100);
    for (const auto& e : r.entries) {
        if (e.status == AuditStatus::not_applicable) continue;
        // every left side vanishes; T1-2 at p = inf keeps its additive constant on the right
        CHECK_MESSAGE(e.lhs == 0.0, e.id);
        CHECK_MESSAGE(e.margin >= 0.0, e.id);
        if (e.id != "T1-2") CHECK_MESSAGE(e.rhs == 0.0, e.id);
    }
    CHECK(r.provenance.c == doctest::Approx(1.0));
}

TEST_CASE("constant family equality cases") {
    const auto d = constant_data(0.5);
    const auto r = audit_zs(d);
    CHECK(r.passed());
    const auto& t13 = find(r, "T1-3.lower", 2.0);
    CHECK(t13.lhs == doctest::Approx(0.5));
    CHECK(t13.rhs == doctest::Approx(0.5));
    CHECK(t13.status == AuditStatus::pass);
    const auto& st = find(r, "T4-1.stated");
    const auto& db = find(r, "T4-1.doubled");
    CHECK(st.lhs == doctest::Approx(0.5));
    CHECK(st.rhs == doctest::Approx(0.5));
    CHECK(db.rhs == doctest::Approx(0.5 * std::sqrt(2.0)));
    CHECK(st.note.find("doubled") != std::string::npos);

    const auto r1 = audit_zs(constant_data(1.0));
    const auto& a = find(r1, "3.19.a");
    const auto& b = find(r1, "3.19.b");
    CHECK(a.lhs == doctest::Approx(kPi / 2));
    CHECK(a.rhs == doctest::Approx(2.0));
    CHECK(b.rhs == doctest::Approx(8.0 / kPi));
    CHECK(find(r1, "1.5.I_D=sumA").relation == "=");
}

TEST_CASE("out of range exponents are not applicable") {
    const auto r = audit_zs(constant_data(0.3));
    CHECK(find(r, "T1-1.upper", 3.0).status == AuditStatus::not_applicable);
    CHECK(find(r, "T1-2", 1.5).status == AuditStatus::not_applicable);
    CHECK(find(r, "T1-2", 2.0).status == AuditStatus::pass);
    CHECK(find(r, "T1-3.upper", kInf).status == AuditStatus::not_applicable);
    CHECK(find(r, "T2-3.lower", 3.0, "1+|n|").status == AuditStatus::not_applicable);
    CHECK(find(r, "T2-3.lower", 1.5, "1+|n|").status == AuditStatus::pass);
    CHECK(find(r, "3.18", kInf).status == AuditStatus::not_applicable);
    CHECK(std::isnan(find(r, "3.18", kInf).lhs));
}

TEST_CASE("entries are unique per id, exponent and weight") {
    const auto r = audit_zs(constant_data(0.7));
    std::set<std::tuple<std::string, double, std::string>> seen;
    for (const auto& e : r.entries) {
        CHECK_MESSAGE(seen.emplace(e.id, e.p.value_or(-1.0), e.weight).second, e.id);
        CHECK(e.id.rfind(e.tag, 0) == 0);
    }
    AuditOptions o;
    o.p_list = {2.0};
    o.weights = {WeightKind::unit};
    const auto small = audit_zs(constant_data(0.7), o);
    CHECK(small.entries.size() < r.entries.size());
    CHECK(small.provenance.rel_slack == 1e-8);
}

TEST_CASE("single slit comb data") {
    const auto d = sequences_from_single_slit(Comb({0.0, 2.0, 4.0}, {0.0, 0.7, 0.0}), "slit");
    CHECK(d.Q0 == doctest::Approx(0.245));
    CHECK(d.u_star == 2.0);
    CHECK(d.band_lengths.size() == 2);
    const auto r = audit_comb(d);
    CHECK(r.passed());
    const auto& e = find(r, "2.29");
    CHECK(e.lhs == doctest::Approx(e.rhs));
    CHECK(find(r, "2.28").status == AuditStatus::pass);
    CHECK(find(r, "2.16.lower").status == AuditStatus::pass);
    CHECK_THROWS_AS(sequences_from_single_slit(Comb({0.0, 2.0}, {1.0, 1.0}), "two"), InputError);
}

TEST_CASE("profile audits") {
    const auto one = solve_gap_profile(GapConfiguration({{-1.0, 1.0}}));
    const auto r = audit_comb(sequences_from_profile(one, std::nullopt, "one gap"));
    CHECK(r.passed());
    const auto& e = find(r, "3.20.b");
    CHECK(e.lhs == doctest::Approx(2.0));
    CHECK(e.rhs == doctest::Approx(2.0));
    CHECK(find(r, "3.33.a").note == "needs at least two gaps");
    CHECK(find(r, "2.2.upper", 1.0).status == AuditStatus::not_applicable);

    const GapConfiguration cfg({{-3.0, -1.0}, {1.0, 2.0}, {4.0, 4.5}});
    const auto prof = solve_gap_profile(cfg);
    const auto good = audit_comb(sequences_from_profile(prof, 3.0, "u*=3"));
    CHECK(good.passed());
    CHECK(find(good, "3.35").status == AuditStatus::pass);
    const auto bad = audit_comb(sequences_from_profile(prof, 1.0, "u*=1"));
    CHECK(!bad.passed());
    const auto& s = find(bad, "3.33.a");
    CHECK(s.status == AuditStatus::fail);
    CHECK(s.lhs == doctest::Approx(2.0));
}

TEST_CASE("misaligned data is rejected") {
    auto d = constant_data(0.4);
    d.h.pop_back();
    CHECK_THROWS_AS(audit_zs(d), InputError);
}

TEST_CASE("provenance hash depends on the source only") {
    auto d = constant_data(0.4);
    const auto h1 = audit_zs(d).provenance.source_hash;
    CHECK(h1.size() == 16);
    CHECK(audit_zs(d).provenance.source_hash == h1);
    d.source = "other";
    CHECK(audit_zs(d).provenance.source_hash != h1);
}
