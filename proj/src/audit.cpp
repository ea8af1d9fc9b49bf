#include "zsspec/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "zsspec/errors.hpp"
#include "zsspec/format.hpp"

namespace zsspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double conjugate(double p) {
    if (p == 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

class Builder {
public:
    Builder(const SequenceData& d, const AuditOptions& o, std::vector<AuditEntry>& out)
        : d_(d), o_(o), out_(out) {}

    double norm(const std::vector<double>& f, double p, WeightKind w = WeightKind::unit) const {
        std::vector<double> wt;
        if (w == WeightKind::linear) {
            wt.reserve(d_.labels.size());
            for (int n : d_.labels) wt.push_back(1.0 + std::abs(n));
        }
        return weighted_norm(f, p, wt);
    }

    void le(const std::string& tag, const std::string& link, std::optional<double> p, WeightKind w, double lhs,
            double rhs, std::string note = {}) {
        AuditEntry e = make(tag, link, p, w, std::move(note));
        e.lhs = lhs;
        e.rhs = rhs;
        e.margin = rhs - lhs;
        if (std::isnan(lhs) || std::isnan(rhs)) {
            e.status = AuditStatus::fail;
            e.note = join(e.note, "undefined value");
        } else {
            e.status = e.margin >= -slack(lhs, rhs) ? AuditStatus::pass : AuditStatus::fail;
        }
        out_.push_back(std::move(e));
    }

    void eq(const std::string& tag, const std::string& link, double lhs, double rhs) {
        AuditEntry e = make(tag, link, std::nullopt, WeightKind::unit, {});
        e.relation = "=";
        e.lhs = lhs;
        e.rhs = rhs;
        e.margin = rhs - lhs;
        e.status = std::abs(e.margin) <= slack(lhs, rhs) ? AuditStatus::pass : AuditStatus::fail;
        out_.push_back(std::move(e));
    }

    void na(const std::string& tag, const std::string& link, std::optional<double> p, WeightKind w,
            std::string note) {
        AuditEntry e = make(tag, link, p, w, std::move(note));
        e.lhs = e.rhs = e.margin = std::numeric_limits<double>::quiet_NaN();
        e.status = AuditStatus::not_applicable;
        out_.push_back(std::move(e));
    }

    // Per-n inequality f(n) <= g(n); reports the n with the smallest scaled margin.
    void worst_n(const std::string& tag, const std::string& link, const std::function<double(std::size_t)>& lhs,
                 const std::function<double(std::size_t)>& rhs, std::size_t count) {
        if (count == 0) {
            na(tag, link, std::nullopt, WeightKind::unit, "no gaps");
            return;
        }
        std::size_t worst = 0;
        double worst_score = kInf;
        for (std::size_t i = 0; i < count; ++i) {
            const double l = lhs(i), r = rhs(i);
            const double score = (r - l + slack(l, r)) / (std::max(std::abs(l), std::abs(r)) + o_.abs_slack);
            if (score < worst_score) {
                worst_score = score;
                worst = i;
            }
        }
        le(tag, link, std::nullopt, WeightKind::unit, lhs(worst), rhs(worst),
           "worst n=" + std::to_string(d_.labels[worst]));
    }

private:
    double slack(double a, double b) const {
        return o_.rel_slack * std::max(std::abs(a), std::abs(b)) + o_.abs_slack;
    }

    static std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "; " + b; }

    AuditEntry make(const std::string& tag, const std::string& link, std::optional<double> p, WeightKind w,
                    std::string note) const {
        AuditEntry e;
        e.tag = tag;
        e.id = link.empty() ? tag : tag + "." + link;
        e.p = p;
        e.weight = to_string(w);
        e.note = std::move(note);
        if (d_.truncated) e.note = join(e.note, "truncated window");
        return e;
    }

    const SequenceData& d_;
    const AuditOptions& o_;
    std::vector<AuditEntry>& out_;
};

bool in_12(double p) { return p >= 1.0 && p <= 2.0; }

// Estimates shared by both pipelines; u_* may be absent.
void audit_shared(Builder& b, const SequenceData& d, const AuditOptions& o) {
    const auto W = WeightKind::unit;
    const std::size_t n = d.g.size();
    const double hinf = max_of(d.h);
    const double g1 = b.norm(d.g, 1), h1 = b.norm(d.h, 1);
    const double g2 = b.norm(d.g, 2), h2 = b.norm(d.h, 2), j2 = b.norm(d.J, 2);

    b.worst_n("1.3", "", [&](std::size_t i) { return d.g[i]; }, [&](std::size_t i) { return 2.0 * d.h[i]; }, n);

    double hg = 0.0;
    for (std::size_t i = 0; i < n; ++i) hg += d.h[i] * d.g[i];
    b.le("1.5", "lower", std::nullopt, W, 0.25 * g2 * g2, 2.0 * d.Q0);
    b.eq("1.5", "2Q0=I_D", 2.0 * d.Q0, d.I_D);
    b.eq("1.5", "I_D=sumA", d.I_D, d.sum_A);
    b.eq("1.5", "sumA=J2", d.sum_A, j2 * j2);
    b.le("1.5", "upper", std::nullopt, W, j2 * j2, 2.0 / kPi * hg);

    b.le("2.29", "", std::nullopt, W, 0.5 * hinf * hinf, d.Q0);

    b.worst_n("2.30", "a", [&](std::size_t i) { return 0.25 * d.g[i] * d.g[i]; },
              [&](std::size_t i) { return d.A[i]; }, n);
    b.worst_n("2.30", "b", [&](std::size_t i) { return d.g[i] * d.h[i] / kPi; },
              [&](std::size_t i) { return d.A[i]; }, n);
    b.worst_n("2.30", "c", [&](std::size_t i) { return d.A[i]; },
              [&](std::size_t i) { return 2.0 * d.g[i] * d.h[i] / kPi; }, n);

    if (d.u_star && *d.u_star > 0.0) {
        const double us = *d.u_star;
        const double mid = 0.5 * kPi * kPi * std::max(1.0, hinf / us) * d.I_D;
        b.le("3.6", "lower", std::nullopt, W, 0.25 * kPi * d.I_D, h2 * h2);
        b.le("3.6", "middle", std::nullopt, W, h2 * h2, mid);
        b.le("3.6", "upper", std::nullopt, W, mid, 0.5 * kPi * kPi * std::max(1.0, std::sqrt(d.I_D) / us) * d.I_D);
        b.le("3.7", "lower", std::nullopt, W, 0.5 * g2, h2);
        b.le("3.7", "upper", std::nullopt, W, h2, kPi * g2 * (1.0 + 2.0 / (us * us) * g2 * g2));
        b.le("3.8", "lower", std::nullopt, W, 0.5 * g2, j2);
        b.le("3.8", "upper", std::nullopt, W, j2, std::sqrt(2.0) * g2 * (1.0 + std::sqrt(2.0) / us * g2));
    } else {
        for (const char* l : {"lower", "middle", "upper"}) b.na("3.6", l, std::nullopt, W, "u_* unknown");
        for (const char* t : {"3.7", "3.8"})
            for (const char* l : {"lower", "upper"}) b.na(t, l, std::nullopt, W, "u_* unknown");
    }

    for (double p : o.p_list) {
        const double q = conjugate(p);
        b.le("3.17", "", p, W, kPi * d.Q0, b.norm(d.h, p) * b.norm(d.g, q));
        if (in_12(p)) {
            b.le("3.18", "", p, W, d.I_D,
                 std::pow(2.0 / kPi, 2.0 / p) * std::pow(b.norm(d.h, p), 2.0 / q) *
                     std::pow(b.norm(d.g, p), 2.0 / p));
        } else {
            b.na("3.18", "", p, W, "requires p in [1,2]");
        }
    }

    b.le("3.19", "a", std::nullopt, W, kPi * d.Q0, hinf * g1);
    b.le("3.19", "b", std::nullopt, W, hinf * g1, 2.0 / kPi * g1 * g1);
    b.le("3.20", "a", std::nullopt, W, hinf, 2.0 / kPi * g1);
    b.le("3.20", "b", std::nullopt, W, g1, 2.0 * h1);

    if (!d.u.empty()) {
        const double t = greedy_norm2(d.u, d.h);
        b.le("2.16", "lower", std::nullopt, W, t * t / (kPi * kPi), d.Q0);
        b.le("2.16", "upper", std::nullopt, W, d.Q0, 2.0 * std::sqrt(2.0) / kPi * t * t);
    } else {
        b.na("2.16", "lower", std::nullopt, W, "abscissas unknown");
        b.na("2.16", "upper", std::nullopt, W, "abscissas unknown");
    }
    if (!d.nu.empty()) {
        b.worst_n("2.28", "", [&](std::size_t i) { return d.nu[i]; }, [&](std::size_t i) { return d.h[i]; }, n);
    } else {
        b.na("2.28", "", std::nullopt, W, "slit-tip masses need the comb map");
    }
}

// Chains shared by the weighted estimates; `cw` is c_0 or c, `tail` the third term of the
// first estimate.
void audit_weighted(Builder& b, const SequenceData& d, double p, WeightKind w, double cw, const std::string& t1,
                    const std::string& t2, const std::string& t3, const std::string& t4, const std::string& t5,
                    double tail_factor, double alpha) {
    const double hinf = max_of(d.h);
    const double q = conjugate(p);
    const double G = b.norm(d.g, p, w), H = b.norm(d.h, p, w), J = b.norm(d.J, p, w);
    const double Mp = b.norm(d.mu_plus, p, w), Mm = b.norm(d.mu_minus, p, w);
    b.le(t1, "mu+", p, w, hinf, 2.0 * kPi * max_of(d.mu_plus));
    b.le(t1, "mu-", p, w, hinf, 2.0 * kPi * max_of(d.mu_minus));
    b.le(t1, "J", p, w, hinf, J);
    b.le(t1, "g", p, w, hinf, tail_factor * G * std::pow(1.0 + alpha * std::pow(G, p), 1.0 / q));
    b.le(t2, "lower", p, w, G, 2.0 * H);
    b.le(t2, "upper", p, w, 2.0 * H, std::pow(cw, 9) * G);
    b.le(t3, "lower", p, w, G, 2.0 * J);
    b.le(t3, "upper", p, w, 2.0 * J, std::pow(cw, 5) * 2.0 * G);
    b.le(t4, "lower", p, w, 0.5 * std::sqrt(kPi) * J, H);
    b.le(t4, "upper", p, w, H, std::pow(cw, 5) * std::sqrt(0.5 * kPi) * J);
    b.le(t5, "lower+", p, w, G, 2.0 * Mp);
    b.le(t5, "upper+", p, w, 2.0 * Mp, std::pow(cw, 18) * G);
    b.le(t5, "lower-", p, w, G, 2.0 * Mm);
    b.le(t5, "upper-", p, w, 2.0 * Mm, std::pow(cw, 18) * G);
}

void weighted_na(Builder& b, double p, WeightKind w, const std::vector<std::string>& tags, const std::string& why) {
    static const std::vector<std::vector<std::string>> links = {{"mu+", "mu-", "J", "g"},
                                                               {"lower", "upper"},
                                                               {"lower", "upper"},
                                                               {"lower", "upper"},
                                                               {"lower+", "upper+", "lower-", "upper-"}};
    for (std::size_t i = 0; i < tags.size(); ++i)
        for (const auto& l : links[i]) b.na(tags[i], l, p, w, why);
}

// The four estimates sharing the constant alpha (T1-* / 2.2-2.5).
void audit_power(Builder& b, const SequenceData& d, double p, const std::array<std::string, 4>& tags,
                 const std::function<double(double)>& alpha_of, double cp_denominator) {
    const auto W = WeightKind::unit;
    const double G = b.norm(d.g, p), H = b.norm(d.h, p), J = b.norm(d.J, p);
    const bool finite = std::isfinite(p);
    const double alpha = finite ? alpha_of(p) : kInf;

    if (in_12(p)) {
        if (tags[0] == "T1-1") b.le(tags[0], "lower", p, W, std::pow(2.0, -p) * G, H);
        b.le(tags[0], "upper", p, W, H, 2.0 * G * (1.0 + alpha * std::pow(G, p)));
    } else {
        if (tags[0] == "T1-1") b.na(tags[0], "lower", p, W, "requires p in [1,2]");
        b.na(tags[0], "upper", p, W, "requires p in [1,2]");
    }

    if (p >= 2.0) {
        // C_p^2 ||g||_q (1 + K ||g||_q^{2/p-1}) expanded so that ||g||_q = 0 stays finite.
        const double q = conjugate(p);
        const double cp = finite ? std::pow(0.5 * kPi * kPi, 1.0 / p) : 1.0;
        const double gq = b.norm(d.g, q);
        const double e = finite ? 2.0 / p - 1.0 : -1.0;
        const double k = std::pow(2.0 * cp / cp_denominator, e);
        const double gpow = finite ? std::pow(gq, 2.0 / p) : 1.0;
        std::string note = p > 2.0 ? "negative exponent 2/p-1; audited as written" : "";
        b.le(tags[1], "", p, W, H, 2.0 / kPi * cp * cp * (gq + k * gpow), note);
    } else {
        b.na(tags[1], "", p, W, "requires p >= 2");
    }

    b.le(tags[2], "lower", p, W, 0.5 * G, J);
    if (finite) {
        b.le(tags[2], "upper", p, W, J, 2.0 / std::sqrt(kPi) * G * std::sqrt(1.0 + alpha * std::pow(G, p)));
    } else {
        b.na(tags[2], "upper", p, W, "power p undefined at p = inf");
    }

    b.le(tags[3], "lower", p, W, 0.5 * std::sqrt(kPi) * J, H);
    if (finite) {
        b.le(tags[3], "upper", p, W, H, 4.0 * J * (1.0 + alpha * std::pow(2.0, p) * std::pow(J, p)));
    } else {
        b.na(tags[3], "upper", p, W, "power p undefined at p = inf");
    }
}

AuditProvenance provenance(const SequenceData& d, const AuditOptions& o, double c) {
    AuditProvenance pv;
    pv.source = d.source;
    pv.source_hash = fnv1a_hex(d.source);
    pv.tol = d.tol;
    pv.window = d.window;
    pv.tail_height = d.tail_height;
    pv.truncated = d.truncated;
    pv.u_star = d.u_star;
    pv.c = c;
    pv.norm_convention = d.norm_convention;
    pv.rel_slack = o.rel_slack;
    pv.abs_slack = o.abs_slack;
    return pv;
}

void check_data(const SequenceData& d) {
    const std::size_t n = d.labels.size();
    for (const auto* v : {&d.g, &d.h, &d.A, &d.J, &d.mu_plus, &d.mu_minus}) {
        if (v->size() != n) throw InputError("audit: sequences are not window-aligned");
    }
    if (!d.u.empty() && d.u.size() != n) throw InputError("audit: abscissas are not window-aligned");
    if (!d.nu.empty() && d.nu.size() != n) throw InputError("audit: slit masses are not window-aligned");
    if (!d.y_max.empty() && d.y_max.size() != n) throw InputError("audit: Y_n maxima are not window-aligned");
}

}  // namespace

double weighted_norm(const std::vector<double>& f, double p, const std::vector<double>& w) {
    if (!(p >= 1.0)) throw InputError("weighted_norm: p must be >= 1");
    if (!w.empty() && w.size() != f.size()) throw InputError("weighted_norm: weight and sequence lengths differ");
    for (double x : w)
        if (!(x >= 1.0)) throw InputError("weighted_norm: weights must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : f) m = std::max(m, std::abs(x));
        return m;
    }
    // Scale by the max entry so large p does not overflow.
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += (w.empty() ? 1.0 : w[i]) * std::pow(std::abs(f[i]) / m, p);
    return m * std::pow(s, 1.0 / p);
}

const char* to_string(WeightKind w) { return w == WeightKind::unit ? "1" : "1+|n|"; }

WeightKind parse_weight(const std::string& s) {
    if (s == "1" || s == "unit") return WeightKind::unit;
    if (s == "1+|n|" || s == "linear") return WeightKind::linear;
    throw InputError("unknown weight '" + s + "' (expected unit or linear)");
}

const char* to_string(AuditStatus s) {
    switch (s) {
        case AuditStatus::pass: return "pass";
        case AuditStatus::fail: return "fail";
        case AuditStatus::not_applicable: return "not-applicable";
    }
    return "?";
}

bool AuditReport::passed() const { return count(AuditStatus::fail) == 0; }

std::size_t AuditReport::count(AuditStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [s](const auto& e) { return e.status == s; }));
}

double greedy_norm2(const std::vector<double>& u, const std::vector<double>& h) {
    const auto r = greedy_select(Comb(u, h));
    return weighted_norm(r.comb.h(), 2.0);
}

SequenceData sequences_from_summary(const SpectralSummary& s, const std::optional<NormSq>& norm,
                                    const std::string& source) {
    if (s.actions.size() != s.gaps.size() || !s.moments) {
        throw InputError("audit needs a complete spectral summary (actions and moments)");
    }
    SequenceData d;
    d.source = source;
    d.window = s.window;
    d.tol = s.tol;
    d.tail_height = s.tail_height;
    d.truncated = s.tail_height > 0.0;
    d.u_star = kPi;
    for (std::size_t i = 0; i < s.gaps.size(); ++i) {
        const auto& g = s.gaps[i];
        const auto& a = s.actions[i];
        d.labels.push_back(g.n);
        d.g.push_back(g.length());
        d.h.push_back(g.h);
        d.A.push_back(a.A);
        d.J.push_back(a.J);
        d.mu_plus.push_back(std::abs(a.mu_plus));
        d.mu_minus.push_back(std::abs(a.mu_minus));
        d.u.push_back(kPi * g.n);
    }
    d.band_lengths = s.band_lengths();
    d.Q0 = s.moments->Q0;
    d.I_D = s.moments->I_D;
    d.sum_A = s.moments->sum_A;
    d.norm_sq = norm;
    d.norm_convention = to_string(s.moments->identity_match);
    return d;
}

SequenceData sequences_from_profile(const GapProfile& prof, std::optional<double> u_star, const std::string& source) {
    SequenceData d;
    d.source = source;
    d.window = static_cast<int>(prof.gaps.size());
    d.tol = prof.residual;
    d.u_star = u_star;
    for (std::size_t i = 0; i < prof.gaps.size(); ++i) {
        const auto& g = prof.gaps[i];
        d.labels.push_back(g.label);
        d.g.push_back(g.length());
        d.h.push_back(g.h);
        d.A.push_back(g.A);
        d.J.push_back(std::sqrt(g.A));
        d.mu_plus.push_back(std::abs(g.mu_plus));
        d.mu_minus.push_back(std::abs(g.mu_minus));
        d.y_max.push_back(g.y_max);
        d.sum_A += g.A;
        if (i > 0) d.band_lengths.push_back(g.z_minus - prof.gaps[i - 1].z_plus);
    }
    d.Q0 = prof.Q0;
    d.I_D = d.sum_A;
    return d;
}

SequenceData sequences_from_single_slit(const Comb& comb, const std::string& source) {
    if (comb.open_count() > 1) throw InputError("closed-form comb data needs at most one open slit");
    SequenceData d;
    d.source = source;
    d.window = static_cast<int>(comb.size());
    if (comb.size() > 1) d.u_star = comb.u_star();
    double u0 = 0.0, h0 = 0.0;
    for (std::size_t i = 0; i < comb.size(); ++i)
        if (comb.h()[i] > 0.0) u0 = comb.u()[i], h0 = comb.h()[i];
    std::vector<Interval> gaps;
    for (std::size_t i = 0; i < comb.size(); ++i) {
        const double hi = comb.h()[i];
        d.labels.push_back(static_cast<int>(i));
        d.g.push_back(2.0 * hi);
        d.h.push_back(hi);
        d.A.push_back(hi * hi);
        d.J.push_back(hi);
        d.mu_plus.push_back(hi);
        d.mu_minus.push_back(hi);
        d.nu.push_back(single_slit_nu(hi));
        d.y_max.push_back(0.0);
        d.u.push_back(comb.u()[i]);
        if (hi > 0.0) {
            gaps.push_back({-hi, hi});
        } else {
            // A closed slit sits at the image of its abscissa.
            const double x = single_slit_map(u0, h0, cplx(comb.u()[i], 0.0)).real();
            gaps.push_back({x, x});
        }
    }
    for (std::size_t i = 1; i < gaps.size(); ++i) d.band_lengths.push_back(gaps[i].lo - gaps[i - 1].hi);
    d.Q0 = single_slit_q0(h0);
    d.I_D = d.sum_A = h0 * h0;
    return d;
}

AuditReport audit_zs(const SequenceData& d, const AuditOptions& o) {
    check_data(d);
    AuditReport rep;
    rep.kind = "zs";
    Builder b(d, o, rep.entries);
    const auto W = WeightKind::unit;
    const double hinf = max_of(d.h);
    const double c0 = std::exp(hinf / kPi);
    const double g1 = b.norm(d.g, 1), h1 = b.norm(d.h, 1);

    for (double p : o.p_list) {
        audit_power(b, d, p, {"T1-1", "T1-2", "T1-3", "T1-4"},
                    [](double pp) { return std::pow(2.0, (pp + 3.0) * pp) / kPi; }, kPi * kPi);
        for (WeightKind w : o.weights) {
            const std::vector<std::string> tags = {"T2-1", "T2-2", "T2-3", "T2-4", "T2-5"};
            if (in_12(p)) {
                audit_weighted(b, d, p, w, c0, tags[0], tags[1], tags[2], tags[3], tags[4], 2.0,
                               std::pow(2.0, (p + 3.0) * p) / kPi);
            } else {
                weighted_na(b, p, w, tags, "requires p in [1,2]");
            }
        }
        const double q = conjugate(p);
        if (d.norm_sq) {
            const double v2 = d.norm_sq->stated;
            b.le("T4-2", "", p, W, v2, 2.0 / kPi * b.norm(d.h, p) * b.norm(d.g, q), "norm: stated");
            if (in_12(p)) {
                b.le("T4-3", "", p, W, v2,
                     std::pow(2.0 / kPi, 2.0 / p) * std::pow(b.norm(d.h, p), 2.0 / q) *
                         std::pow(b.norm(d.g, p), 2.0 / p),
                     "norm: stated");
            } else {
                b.na("T4-3", "", p, W, "requires p in [1,2]");
            }
        } else {
            b.na("T4-2", "", p, W, "potential norm unavailable");
            b.na("T4-3", "", p, W, "potential norm unavailable");
        }
    }

    if (d.norm_sq) {
        const std::string match = "identity holds under: " + d.norm_convention;
        b.le("T4-1", "stated", std::nullopt, W, hinf, std::sqrt(d.norm_sq->stated), match);
        b.le("T4-1", "doubled", std::nullopt, W, hinf, std::sqrt(d.norm_sq->doubled), match);
        b.le("T4-4", "a", std::nullopt, W, d.norm_sq->stated, 2.0 / kPi * hinf * g1, "norm: stated");
    } else {
        b.na("T4-1", "stated", std::nullopt, W, "potential norm unavailable");
        b.na("T4-1", "doubled", std::nullopt, W, "potential norm unavailable");
        b.na("T4-4", "a", std::nullopt, W, "potential norm unavailable");
    }
    b.le("T4-4", "b", std::nullopt, W, 2.0 / kPi * hinf * g1, 4.0 / (kPi * kPi) * g1 * g1);
    b.le("T4-5", "a", std::nullopt, W, hinf, 2.0 / kPi * g1);
    b.le("T4-5", "b", std::nullopt, W, g1, 2.0 * h1);

    audit_shared(b, d, o);
    rep.provenance = provenance(d, o, c0);
    return rep;
}

AuditReport audit_comb(const SequenceData& d, const AuditOptions& o) {
    check_data(d);
    AuditReport rep;
    rep.kind = "comb";
    Builder b(d, o, rep.entries);
    const auto W = WeightKind::unit;
    const double hinf = max_of(d.h);
    const bool have_u = d.u_star && *d.u_star > 0.0 && std::isfinite(*d.u_star);
    const double us = have_u ? *d.u_star : 0.0;
    const double c = have_u ? std::exp(hinf / us) : 0.0;

    for (double p : o.p_list) {
        if (have_u) {
            audit_power(b, d, p, {"2.2", "2.3", "2.4", "2.5"},
                        [us](double pp) {
                            return std::pow(2.0 + kPi, pp) * std::pow(2.0, pp * (pp + 2.0)) / (kPi * std::pow(us, pp));
                        },
                        kPi * us);
        } else {
            for (const char* t : {"2.2.upper", "2.3", "2.4.lower", "2.4.upper", "2.5.lower", "2.5.upper"}) {
                std::string s(t);
                const auto dot = s.find('.', 2);
                b.na(s.substr(0, dot), dot == std::string::npos ? "" : s.substr(dot + 1), p, W,
                     "u_* unknown or not positive");
            }
        }
        for (WeightKind w : o.weights) {
            const std::vector<std::string> tags = {"2.6", "2.7", "2.8", "2.9", "2.10"};
            if (!in_12(p)) {
                weighted_na(b, p, w, tags, "requires p in [1,2]");
            } else if (!have_u) {
                weighted_na(b, p, w, tags, "u_* unknown or not positive");
            } else {
                const double alpha = std::pow(2.0 + kPi, p) * std::pow(2.0, p * (p + 2.0)) / (kPi * std::pow(us, p));
                audit_weighted(b, d, p, w, c, tags[0], tags[1], tags[2], tags[3], tags[4],
                               2.0 * std::pow(kPi, -1.0 / p), alpha);
            }
        }
    }

    const bool have_s = !d.band_lengths.empty();
    const double s = have_s ? *std::min_element(d.band_lengths.begin(), d.band_lengths.end()) : 0.0;
    const std::size_t n = d.g.size();
    if (have_s && have_u) {
        b.le("3.33", "a", std::nullopt, W, s, us);
        b.le("3.33", "b", std::nullopt, W, us, 0.5 * kPi * s * std::max(std::exp(2.0), std::pow(c, 2.5 * kPi)));
        b.le("3.34", "", std::nullopt, W, 1.0 + 2.0 * hinf / (s * kPi), std::pow(c, 9));
    } else {
        const std::string why = have_s ? "u_* unknown or not positive" : "needs at least two gaps";
        b.na("3.33", "a", std::nullopt, W, why);
        b.na("3.33", "b", std::nullopt, W, why);
        b.na("3.34", "", std::nullopt, W, why);
    }
    if (have_s && !d.y_max.empty()) {
        const double ybound = 2.0 * hinf / (kPi * s);
        b.worst_n("3.35", "", [&](std::size_t i) { return d.y_max[i]; }, [&](std::size_t) { return ybound; }, n);
        b.worst_n("3.36", "a", [&](std::size_t i) { return 2.0 * d.h[i]; },
                  [&](std::size_t i) { return d.g[i] * (1.0 + d.y_max[i]); }, n);
        b.worst_n("3.36", "b", [&](std::size_t i) { return d.g[i] * (1.0 + d.y_max[i]); },
                  [&](std::size_t i) { return d.g[i] * (1.0 + ybound); }, n);
        if (have_u) {
            b.worst_n("3.36", "c", [&](std::size_t i) { return d.g[i] * (1.0 + ybound); },
                      [&](std::size_t i) { return d.g[i] * std::pow(c, 9); }, n);
        } else {
            b.na("3.36", "c", std::nullopt, W, "u_* unknown or not positive");
        }
    } else {
        const std::string why = have_s ? "Y_n unavailable" : "needs at least two gaps";
        b.na("3.35", "", std::nullopt, W, why);
        for (const char* l : {"a", "b", "c"}) b.na("3.36", l, std::nullopt, W, why);
    }

    audit_shared(b, d, o);
    rep.provenance = provenance(d, o, c);
    return rep;
}

}  // namespace zsspec
