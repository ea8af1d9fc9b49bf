#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace zsspec {

using cplx = std::complex<double>;

/// Vertical slits [u_n - i h_n, u_n + i h_n] with strictly increasing abscissas.
class Comb {
public:
    Comb() = default;
    /// Throws InputError on unsorted abscissas, negative or non-finite heights.
    Comb(std::vector<double> u, std::vector<double> h);

    std::size_t size() const { return u_.size(); }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& h() const { return h_; }
    /// min (u_{n+1} - u_n); +inf for fewer than two slits.
    double u_star() const;
    /// Number of slits with h > 0.
    std::size_t open_count() const;

private:
    std::vector<double> u_;
    std::vector<double> h_;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

/// Disjoint ordered open gaps (z_n^-, z_n^+) with integer labels.
class GapConfiguration {
public:
    GapConfiguration() = default;
    /// Throws InputError unless the gaps are non-empty, ordered and disjoint.
    GapConfiguration(std::vector<Interval> gaps, std::vector<int> labels = {});

    const std::vector<Interval>& gaps() const { return gaps_; }
    const std::vector<int>& labels() const { return labels_; }
    std::size_t size() const { return gaps_.size(); }
    /// s = min length of the bands between consecutive gaps; +inf for one gap.
    double min_band() const;

private:
    std::vector<Interval> gaps_;
    std::vector<int> labels_;
};

// --- single slit ------------------------------------------------------------

/// z(k) = sqrt((k - u0)^2 + h0^2) on C minus the slit [u0 - i h0, u0 + i h0],
/// normalized by z(k) = k - u0 + o(1). Throws InputError if k lies on the slit.
cplx single_slit_map(double u0, double h0, cplx k);

/// Q_0 of a comb with one slit of height h0.
inline double single_slit_q0(double h0) { return 0.5 * h0 * h0; }

/// Comb-side mass nu = 1 / |k''(z_tip)| for the single slit (closed form).
double single_slit_nu(double h0);

// --- gap profile (v = v_n (1 + Y_n)) -----------------------------------------

struct ProfileOptions {
    double tol = 1e-12;
    int max_iter = 500;
    int nodes = 64;  ///< Gauss-Legendre nodes in theta per gap: 16, 32, 64 or 128
};

struct GapSolution {
    int label = 0;
    double z_minus = 0.0, z_plus = 0.0;
    std::vector<double> x;  ///< nodes m + r sin(theta_k)
    std::vector<double> v;  ///< v at the nodes
    std::vector<double> y;  ///< Y_n at the nodes
    double h = 0.0;         ///< max v on the gap
    double x_peak = 0.0;
    double A = 0.0;         ///< (2/pi) int v
    double y_minus = 0.0, y_plus = 0.0;  ///< Y_n(z_n^-), Y_n(z_n^+)
    double y_max = 0.0;                  ///< max Y_n on the closed gap
    double mu_plus = 0.0, mu_minus = 0.0;  ///< from 2|mu| = |g| (1 + Y(z^±))^2, signed

    double length() const { return z_plus - z_minus; }
};

struct GapProfile {
    std::vector<GapSolution> gaps;
    int iterations = 0;
    double residual = 0.0;  ///< last sup-norm update of v
    double Q0 = 0.0;        ///< (1/pi) int v = sum A / 2
    double min_band = 0.0;

    /// v(x) on gap `index` from the identity, at any x in the closed gap.
    double v_at(std::size_t index, double x) const;
    /// Y_n(x) for x in gap `index` (or its endpoints).
    double y_at(std::size_t index, double x) const;

    // Quadrature data shared by all gaps (theta nodes and weights on [-pi/2, pi/2]).
    std::vector<double> theta, weight;
};

/// Jacobi fixed-point iteration v^{m+1} = v_n (1 + Y_n[v^m]) from v^0 = v_n.
/// Iterates are checked to be pointwise nondecreasing. Throws ConvergenceError
/// (with the last residual) when max_iter is reached.
GapProfile solve_gap_profile(const GapConfiguration& cfg, const ProfileOptions& opts = {});

// --- greedy selection ---------------------------------------------------------

struct GreedyResult {
    Comb comb;                        ///< same abscissas, non-selected heights zeroed
    std::vector<std::size_t> order;   ///< indices in selection order
};

/// Repeatedly picks the tallest remaining slit whose abscissa is farther than
/// h_s from every selected u_s (strict). Ties go to the smallest abscissa.
GreedyResult greedy_select(const Comb& comb);

// --- analytic capacity --------------------------------------------------------

class SegmentCapacity {
public:
    /// Throws InputError on inverted or overlapping intervals; an empty set has capacity 0.
    explicit SegmentCapacity(std::vector<Interval> set);

    /// |E| / 4.
    double value() const { return value_; }
    const std::vector<Interval>& set() const { return set_; }

    /// phi_E(z) = int_E dt / (z - t) = sum log((z - a_i) / (z - b_i)).
    cplx phi(cplx z) const;
    /// Ahlfors function (exp(phi/2) - 1) / (exp(phi/2) + 1) = tanh(phi / 4).
    cplx ahlfors(cplx z) const;
    /// z f_E(z) averaged over `samples` points of |z| = radius; the mean kills
    /// the 1/z correction so this approximates f_E'(infinity) to O(radius^-samples).
    cplx derivative_at_infinity(double radius = 1e6, int samples = 16) const;

private:
    std::vector<Interval> set_;
    double value_ = 0.0;
};

/// C(E) = |E| / 4 with the Ahlfors function for E.
SegmentCapacity capacity_segments(std::vector<Interval> set);

// --- Lindelof monotonicity ---------------------------------------------------

/// Operator-side data for a comb whose map is not available in closed form.
struct OperatorBacking {
    double Q0 = 0.0;
    std::vector<double> band_lengths;
};

struct LindelofEntry {
    std::string kind;  ///< "y", "Q0" or "band"
    std::string where;
    double smaller_heights_value = 0.0;  ///< quantity for h~
    double larger_heights_value = 0.0;   ///< quantity for h
    bool pass = false;
};

struct LindelofReport {
    std::vector<LindelofEntry> entries;
    std::vector<std::string> not_computable;
    bool all_passed() const;
};

/// Checks y(k, h~) >= y(k, h) at probes, Q_0(h~) <= Q_0(h) and |sigma_n(h~)| >= |sigma_n(h)|
/// wherever both sides are computable: combs with at most one slit use closed
/// forms, others need OperatorBacking. Throws InputError unless the abscissas
/// match and h~_n <= h_n.
LindelofReport lindelof_check(const Comb& h, const Comb& h_tilde, const std::vector<cplx>& probes,
                              const std::optional<OperatorBacking>& backing_h = std::nullopt,
                              const std::optional<OperatorBacking>& backing_h_tilde = std::nullopt);

}  // namespace zsspec
