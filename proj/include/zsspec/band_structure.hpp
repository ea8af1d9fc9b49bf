#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "zsspec/monodromy.hpp"
#include "zsspec/potential.hpp"

namespace zsspec {

/// One gap g_n = (z_minus, z_plus) with its critical point and slit height.
struct GapRecord {
    int n = 0;
    double z_minus = 0.0;
    double z_plus = 0.0;
    double z_crit = 0.0;  ///< the unique zero of Delta' in [z_minus, z_plus]
    double h = 0.0;       ///< cosh h = (-1)^n Delta(z_crit)
    bool is_closed = true;
    std::optional<std::string> error;  ///< set when edge refinement did not converge

    double length() const { return is_closed ? 0.0 : z_plus - z_minus; }
    int parity() const { return (n % 2 == 0) ? 1 : -1; }
};

/// Per-gap action data; filled by analyze_potential (see quasimomentum.hpp).
struct ActionRecord {
    int n = 0;
    double A = 0.0;
    double J = 0.0;
    double mu_plus = 0.0;   ///< signed, >= 0
    double mu_minus = 0.0;  ///< signed, <= 0
    double mu_plus_fit = 0.0;
    double mu_minus_fit = 0.0;
    bool mass_reliable = true;
    double e_charge = 0.0;  ///< |g_n| / (4 pi)
    double d_moment = 0.0;  ///< A_n / 4
    double quad_error = 0.0;
};

enum class NormConvention { none, stated, doubled, both };
const char* to_string(NormConvention c);

struct MomentSummary {
    double Q0 = 0.0;
    double I_D = 0.0;
    double sum_A = 0.0;
    double J_norm_sq = 0.0;
    double norm_sq_stated = 0.0;   ///< int (V1^2 + V2^2)
    double norm_sq_doubled = 0.0;  ///< 2 int (V1^2 + V2^2)
    /// Which candidate of ||V||^2 makes sum A_n = ||V||^2 / 2 hold (to 1e-8 relative).
    NormConvention identity_match = NormConvention::none;
    double identity_residual_stated = 0.0;
    double identity_residual_doubled = 0.0;
};

struct SpectralSummary {
    int window = 0;  ///< gaps carry indices -window..window
    double tol = kDefaultTol;
    std::vector<GapRecord> gaps;
    std::vector<ActionRecord> actions;  ///< empty until actions are computed
    std::optional<MomentSummary> moments;

    /// Critical points of the gaps -(window+1) and window+1 (scale for outermost bands).
    double outer_crit_left = 0.0;
    double outer_crit_right = 0.0;
    /// Largest height at the window boundary, max(h_{-N}, h_N): a truncation indicator.
    double tail_height = 0.0;
    /// Smallest n0 with |z_n^± - pi n| <= pi/2 for all n0 <= |n| <= window.
    int asymptotic_from = 0;
    std::vector<std::string> warnings;

    const GapRecord& gap(int n) const { return gaps.at(static_cast<std::size_t>(n + window)); }
    GapRecord& gap(int n) { return gaps.at(static_cast<std::size_t>(n + window)); }
    /// Lengths of the bands sigma_n = [z_{n-1}^+, z_n^-], n = -window+1..window.
    std::vector<double> band_lengths() const;
};

struct BandScanOptions {
    double tol = kDefaultTol;
    double scan_step = std::numbers::pi / 8.0;
};

/// Scans Delta', locates every gap critical point, labels gaps by quasimomentum
/// (Re k = pi n on g_n, anchored by k(z) = z + o(1)), and refines band edges.
/// Closed gaps are emitted with z_minus == z_plus == z_crit.
SpectralSummary find_band_edges(const Potential& pot, int window, const BandScanOptions& opts = {});

/// Fills GapRecord::h for every gap. Throws InconsistencyError if some open gap has
/// max (-1)^n Delta < 1 beyond tolerance (mislabelled edge).
void compute_heights(SpectralSummary& summary, const Potential& pot, double tol = kDefaultTol);

namespace detail {

/// Safeguarded Newton/bisection on a bracket [a, b] where f(a), f(b) differ in sign.
/// `fdf` returns {f, f'}. Returns nullopt if the iteration budget runs out.
template <class F>
std::optional<double> bracketed_root(F&& fdf, double a, double b, double xtol, int max_iter = 200);

}  // namespace detail

}  // namespace zsspec

#include "zsspec/detail/root.ipp"
