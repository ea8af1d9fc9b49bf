#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "zsspec/band_structure.hpp"
#include "zsspec/comb.hpp"
#include "zsspec/potential.hpp"

namespace zsspec {

/// (sum w_n |f_n|^p)^{1/p}; p = +inf gives max |f_n| (weights ignored).
/// Throws InputError on p < 1, a weight below 1 or a length mismatch.
double weighted_norm(const std::vector<double>& f, double p, const std::vector<double>& w = {});

enum class WeightKind { unit, linear };  ///< omega_n = 1 or 1 + |n|
const char* to_string(WeightKind w);
WeightKind parse_weight(const std::string& s);

/// Window-aligned sequences shared by both pipelines. All sequences are
/// non-negative; mu_plus / mu_minus hold |mu_n^±|.
struct SequenceData {
    std::string source;  ///< canonical description of the input (hashed for provenance)
    std::vector<int> labels;
    std::vector<double> g, h, A, J, mu_plus, mu_minus;
    std::vector<double> u;       ///< slit abscissas when known
    std::vector<double> nu;      ///< slit-tip masses when known (single slit only)
    std::vector<double> y_max;   ///< max Y_n over the closed gap (comb profiles)
    std::vector<double> band_lengths;
    double Q0 = 0.0, I_D = 0.0, sum_A = 0.0;
    std::optional<NormSq> norm_sq;
    std::string norm_convention = "none";  ///< which norm satisfies sum A_n = norm / 2
    std::optional<double> u_star;
    int window = 0;
    double tol = 0.0;
    double tail_height = 0.0;
    bool truncated = false;
};

/// From a complete operator summary; u_* = pi and u_n = pi n.
SequenceData sequences_from_summary(const SpectralSummary& s, const std::optional<NormSq>& norm,
                                    const std::string& source);
/// From a fixed-point gap profile; u_* only if the caller knows it.
SequenceData sequences_from_profile(const GapProfile& prof, std::optional<double> u_star,
                                    const std::string& source);
/// Closed-form data of a comb with at most one open slit. Throws InputError otherwise.
SequenceData sequences_from_single_slit(const Comb& comb, const std::string& source);

enum class AuditStatus { pass, fail, not_applicable };
const char* to_string(AuditStatus s);

struct AuditEntry {
    std::string id;   ///< tag plus link, e.g. "T1-1.upper"
    std::string tag;  ///< e.g. "T1-1"
    std::optional<double> p;
    std::string weight = "1";
    std::string relation = "<=";  ///< "<=" or "="
    double lhs = 0.0, rhs = 0.0, margin = 0.0;
    AuditStatus status = AuditStatus::not_applicable;
    std::string note;
};

struct AuditProvenance {
    std::string source;
    std::string source_hash;  ///< FNV-1a 64 of `source`, hex
    double tol = 0.0;
    int window = 0;
    double tail_height = 0.0;
    bool truncated = false;
    std::optional<double> u_star;
    double c = 0.0;  ///< exp(||h||_inf / u_*) (c_0 for the operator audit)
    std::string norm_convention;
    double rel_slack = 0.0;
    double abs_slack = 0.0;
};

struct AuditReport {
    std::string kind;  ///< "zs" or "comb"
    std::vector<AuditEntry> entries;
    AuditProvenance provenance;

    bool passed() const;  ///< no entry failed
    std::size_t count(AuditStatus s) const;
};

struct AuditOptions {
    std::vector<double> p_list = {1.0, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()};
    std::vector<WeightKind> weights = {WeightKind::unit, WeightKind::linear};
    double rel_slack = 1e-8;
    double abs_slack = 1e-14;
};

/// Operator-side estimates (T1-*, T2-*, T4-*) plus the shared comb estimates, with u_* = pi.
AuditReport audit_zs(const SequenceData& d, const AuditOptions& opts = {});
/// Comb estimates for general slit spacing u_*, the profile bounds on Y_n and the shared ones.
AuditReport audit_comb(const SequenceData& d, const AuditOptions& opts = {});

/// ||h~||_2 of the greedy-reduced comb for abscissas u_n and heights h_n.
double greedy_norm2(const std::vector<double>& u, const std::vector<double>& h);

}  // namespace zsspec
