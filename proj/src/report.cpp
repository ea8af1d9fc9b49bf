#include "zsspec/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zsspec/errors.hpp"
#include "zsspec/format.hpp"

namespace zsspec {

namespace {

using ojson = nlohmann::ordered_json;

// Non-finite doubles have no JSON literal; they become the strings used in CSV.
ojson num(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

const std::vector<std::string>& summary_columns() {
    static const std::vector<std::string> cols = {"n", "z_minus", "z_plus", "z_crit", "h", "g",
                                                  "A", "J", "mu_plus", "mu_minus", "e_n", "d_n"};
    return cols;
}

void write_summary_csv(std::ostream& os, const SpectralSummary& s) {
    const auto& cols = summary_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (std::size_t i = 0; i < s.gaps.size(); ++i) {
        const auto& g = s.gaps[i];
        const ActionRecord a = i < s.actions.size() ? s.actions[i] : ActionRecord{};
        os << g.n << ',' << format_double(g.z_minus) << ',' << format_double(g.z_plus) << ','
           << format_double(g.z_crit) << ',' << format_double(g.h) << ',' << format_double(g.length()) << ','
           << format_double(a.A) << ',' << format_double(a.J) << ',' << format_double(a.mu_plus) << ','
           << format_double(a.mu_minus) << ',' << format_double(a.e_charge) << ',' << format_double(a.d_moment)
           << '\n';
    }
}

std::string summary_json(const SpectralSummary& s, const std::string& source) {
    ojson j;
    j["schema_version"] = 1;
    j["source"] = source;
    j["window"] = s.window;
    j["tol"] = num(s.tol);
    j["tail_height"] = num(s.tail_height);
    j["asymptotic_from"] = s.asymptotic_from;
    if (s.moments) {
        const auto& m = *s.moments;
        j["moments"] = ojson{{"Q0", num(m.Q0)},
                             {"I_D", num(m.I_D)},
                             {"sum_A", num(m.sum_A)},
                             {"J_norm_sq", num(m.J_norm_sq)},
                             {"norm_sq_stated", num(m.norm_sq_stated)},
                             {"norm_sq_doubled", num(m.norm_sq_doubled)},
                             {"identity_match", to_string(m.identity_match)},
                             {"identity_residual_stated", num(m.identity_residual_stated)},
                             {"identity_residual_doubled", num(m.identity_residual_doubled)}};
    }
    ojson gaps = ojson::array();
    for (std::size_t i = 0; i < s.gaps.size(); ++i) {
        const auto& g = s.gaps[i];
        ojson e{{"n", g.n},
                {"z_minus", num(g.z_minus)},
                {"z_plus", num(g.z_plus)},
                {"z_crit", num(g.z_crit)},
                {"h", num(g.h)},
                {"g", num(g.length())},
                {"closed", g.is_closed}};
        if (i < s.actions.size()) {
            const auto& a = s.actions[i];
            e["A"] = num(a.A);
            e["J"] = num(a.J);
            e["mu_plus"] = num(a.mu_plus);
            e["mu_minus"] = num(a.mu_minus);
            e["mu_plus_fit"] = num(a.mu_plus_fit);
            e["mu_minus_fit"] = num(a.mu_minus_fit);
            e["mass_reliable"] = a.mass_reliable;
            e["e_n"] = num(a.e_charge);
            e["d_n"] = num(a.d_moment);
        }
        if (g.error) e["error"] = *g.error;
        gaps.push_back(std::move(e));
    }
    j["gaps"] = std::move(gaps);
    j["warnings"] = s.warnings;
    return j.dump(2) + "\n";
}

void write_sequences_csv(std::ostream& os, const SequenceData& d) {
    os << "n,g,h,A,J,mu_plus,mu_minus,nu,y_max\n";
    for (std::size_t i = 0; i < d.labels.size(); ++i) {
        os << d.labels[i] << ',' << format_double(d.g[i]) << ',' << format_double(d.h[i]) << ','
           << format_double(d.A[i]) << ',' << format_double(d.J[i]) << ',' << format_double(d.mu_plus[i]) << ','
           << format_double(-d.mu_minus[i]) << ',' << (d.nu.empty() ? "" : format_double(d.nu[i])) << ','
           << (d.y_max.empty() ? "" : format_double(d.y_max[i])) << '\n';
    }
}

void write_audit_csv(std::ostream& os, const AuditReport& r) {
    os << "id,p,weight,lhs,rhs,margin,pass,status,relation,window,tail_height,truncated,note\n";
    for (const auto& e : r.entries) {
        const bool na = e.status == AuditStatus::not_applicable;
        os << csv_field(e.id) << ',' << (e.p ? format_double(*e.p) : "") << ',' << csv_field(e.weight) << ','
           << (na ? "" : format_double(e.lhs)) << ',' << (na ? "" : format_double(e.rhs)) << ','
           << (na ? "" : format_double(e.margin)) << ','
           << (na ? "" : (e.status == AuditStatus::pass ? "true" : "false")) << ',' << to_string(e.status) << ','
           << csv_field(e.relation) << ',' << r.provenance.window << ',' << format_double(r.provenance.tail_height)
           << ',' << (r.provenance.truncated ? "true" : "false") << ',' << csv_field(e.note) << '\n';
    }
}

std::string audit_json(const AuditReport& r) {
    const auto& pv = r.provenance;
    ojson j;
    j["schema_version"] = 1;
    j["kind"] = r.kind;
    j["provenance"] = ojson{{"source", pv.source},
                            {"source_hash", pv.source_hash},
                            {"tol", num(pv.tol)},
                            {"window", pv.window},
                            {"tail_height", num(pv.tail_height)},
                            {"truncated", pv.truncated},
                            {"u_star", pv.u_star ? num(*pv.u_star) : ojson()},
                            {"c", num(pv.c)},
                            {"norm_convention", pv.norm_convention},
                            {"rel_slack", num(pv.rel_slack)},
                            {"abs_slack", num(pv.abs_slack)}};
    j["totals"] = ojson{{"entries", r.entries.size()},
                        {"pass", r.count(AuditStatus::pass)},
                        {"fail", r.count(AuditStatus::fail)},
                        {"not_applicable", r.count(AuditStatus::not_applicable)}};
    j["passed"] = r.passed();
    ojson entries = ojson::array();
    for (const auto& e : r.entries) {
        const bool na = e.status == AuditStatus::not_applicable;
        entries.push_back(ojson{{"id", e.id},
                                {"tag", e.tag},
                                {"p", e.p ? num(*e.p) : ojson()},
                                {"weight", e.weight},
                                {"relation", e.relation},
                                {"lhs", na ? ojson() : num(e.lhs)},
                                {"rhs", na ? ojson() : num(e.rhs)},
                                {"margin", na ? ojson() : num(e.margin)},
                                {"status", to_string(e.status)},
                                {"note", e.note}});
    }
    j["entries"] = std::move(entries);
    return j.dump(2) + "\n";
}

void write_profile_csv(std::ostream& os, const std::vector<double>& x, const std::vector<double>& v) {
    os << "x,v\n";
    for (std::size_t i = 0; i < x.size() && i < v.size(); ++i) os << format_double(x[i]) << ',' << format_double(v[i]) << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw Error("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace zsspec
