#include "zsspec/band_structure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zsspec/errors.hpp"

namespace zsspec {

namespace {

constexpr double kPi = std::numbers::pi;

struct CritPoint {
    double z;
    double delta;
};

// Tolerance for Delta evaluations near the edges of a gap whose height is about
// `h_est`: the edge slope |Delta'| is of order h, so Delta must be that much sharper.
double edge_eval_tol(double tol, double h_est) {
    return std::max(tol * std::clamp(h_est, 1e-3, 1.0), 1e-13);
}

std::vector<CritPoint> locate_critical_points(const Potential& pot, double lo, double hi,
                                              const BandScanOptions& opts) {
    const auto cells = static_cast<int>(std::ceil((hi - lo) / opts.scan_step));
    const double step = (hi - lo) / cells;
    std::vector<double> zs(cells + 1), dprime(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        zs[i] = lo + step * i;
        dprime[i] = integrate_monodromy(pot, zs[i], opts.tol, Derivatives::first).delta_prime;
    }

    auto fdf = [&](double z) {
        const auto r = integrate_monodromy(pot, z, opts.tol, Derivatives::second);
        return std::pair{r.delta_prime, r.delta_double_prime};
    };

    std::vector<CritPoint> crit;
    for (int i = 0; i < cells; ++i) {
        // A zero sitting exactly on a node belongs to the cell to its left.
        if (dprime[i + 1] == 0.0 || (dprime[i] != 0.0 && (dprime[i] > 0.0) != (dprime[i + 1] > 0.0))) {
            auto root = detail::bracketed_root(fdf, zs[i], zs[i + 1], opts.tol * 1e-2);
            if (!root) {
                std::ostringstream os;
                os << "critical point refinement did not converge in [" << zs[i] << ", " << zs[i + 1] << "]";
                throw LabelingError(os.str());
            }
            crit.push_back({*root, 0.0});
        }
    }
    for (auto& c : crit) c.delta = lyapunov(pot, c.z, opts.tol * 1e-2);
    return crit;
}

}  // namespace

const char* to_string(NormConvention c) {
    switch (c) {
        case NormConvention::none: return "none";
        case NormConvention::stated: return "stated";
        case NormConvention::doubled: return "doubled";
        case NormConvention::both: return "both";
    }
    return "none";
}

std::vector<double> SpectralSummary::band_lengths() const {
    std::vector<double> out;
    for (int n = -window + 1; n <= window; ++n) out.push_back(gap(n).z_minus - gap(n - 1).z_plus);
    return out;
}

SpectralSummary find_band_edges(const Potential& pot, int window, const BandScanOptions& opts) {
    if (window < 1) throw InputError("window N must be >= 1");
    if (!(opts.tol > 0.0)) throw InputError("tolerance must be positive");
    if (!(opts.scan_step > 0.0)) throw InputError("scan step must be positive");

    const double reach = (window + 1) * kPi + 2.0;
    const auto crit = locate_critical_points(pot, -reach, reach, opts);

    if (crit.size() < 3) throw LabelingError("too few gap critical points found; refine the scan step");
    // Every critical point of Delta sits in a (possibly closed) gap, where |Delta| >= 1,
    // and consecutive gaps alternate in parity.
    for (std::size_t i = 0; i < crit.size(); ++i) {
        if (std::abs(crit[i].delta) < 1.0 - 100.0 * opts.tol) {
            std::ostringstream os;
            os << "critical point z=" << crit[i].z << " has |Delta|=" << std::abs(crit[i].delta)
               << " < 1: a pair of critical points was missed; refine the scan step";
            throw LabelingError(os.str());
        }
        if (i > 0 && (crit[i].delta > 0.0) == (crit[i - 1].delta > 0.0)) {
            throw LabelingError("consecutive gaps do not alternate in parity; refine the scan step");
        }
    }

    // k(z) = z + o(1): the outermost critical points sit near pi n. Both ends must
    // agree on the offset or the labeling is ambiguous.
    const long first_label = std::lround(crit.front().z / kPi);
    const long last_label = std::lround(crit.back().z / kPi) - static_cast<long>(crit.size() - 1);
    if (first_label != last_label) {
        std::ostringstream os;
        os << "gap labeling is ambiguous: left anchor gives offset " << first_label
           << ", right anchor gives " << last_label << "; refine the scan step or reduce coupling";
        throw LabelingError(os.str());
    }
    auto label_of = [&](std::size_t i) { return static_cast<int>(first_label + static_cast<long>(i)); };
    auto index_of = [&](int n) { return static_cast<long>(n) - first_label; };
    for (std::size_t i = 0; i < crit.size(); ++i) {
        const bool even = label_of(i) % 2 == 0;
        if (even != (crit[i].delta > 0.0)) throw LabelingError("gap parity contradicts sign of Delta at its center");
    }
    if (index_of(-window - 1) < 0 || index_of(window + 1) >= static_cast<long>(crit.size())) {
        throw LabelingError("scan range does not cover the requested window");
    }

    SpectralSummary summary;
    summary.window = window;
    summary.tol = opts.tol;
    summary.outer_crit_left = crit[index_of(-window - 1)].z;
    summary.outer_crit_right = crit[index_of(window + 1)].z;

    for (int n = -window; n <= window; ++n) {
        const auto i = static_cast<std::size_t>(index_of(n));
        GapRecord g;
        g.n = n;
        g.z_crit = crit[i].z;
        const double sign = g.parity();
        const double excess = sign * crit[i].delta - 1.0;
        if (excess <= opts.tol) {
            g.z_minus = g.z_plus = g.z_crit;
            g.is_closed = true;
            summary.gaps.push_back(g);
            continue;
        }
        const double eval_tol = edge_eval_tol(opts.tol, std::acosh(1.0 + excess));
        auto fdf = [&](double z) {
            const auto r = integrate_monodromy(pot, z, eval_tol, Derivatives::first);
            return std::pair{sign * r.delta - 1.0, sign * r.delta_prime};
        };
        auto left = detail::bracketed_root(fdf, crit[i - 1].z, g.z_crit, opts.tol);
        auto right = detail::bracketed_root(fdf, g.z_crit, crit[i + 1].z, opts.tol);
        if (!left || !right) {
            g.error = "band edge refinement did not converge";
            g.z_minus = g.z_plus = g.z_crit;
            g.is_closed = true;
            summary.warnings.push_back("gap " + std::to_string(n) + ": " + *g.error);
        } else {
            g.z_minus = *left;
            g.z_plus = *right;
            g.is_closed = (g.z_plus - g.z_minus) < 100.0 * opts.tol;
            if (g.is_closed) g.z_minus = g.z_plus = g.z_crit;
        }
        summary.gaps.push_back(g);
    }

    // Interlacing: ... z_n^- <= z_n^+ < z_{n+1}^- ...
    for (int n = -window; n < window; ++n) {
        if (!(summary.gap(n).z_plus < summary.gap(n + 1).z_minus)) {
            throw LabelingError("band edges do not interlace; refine the scan step");
        }
    }

    summary.asymptotic_from = window + 1;
    for (int m = window; m >= 0; --m) {
        const auto& a = summary.gap(m);
        const auto& b = summary.gap(-m);
        const bool ok = std::abs(a.z_minus - kPi * m) <= kPi / 2 && std::abs(a.z_plus - kPi * m) <= kPi / 2 &&
                        std::abs(b.z_minus + kPi * m) <= kPi / 2 && std::abs(b.z_plus + kPi * m) <= kPi / 2;
        if (!ok) break;
        summary.asymptotic_from = m;
    }
    return summary;
}

void compute_heights(SpectralSummary& summary, const Potential& pot, double tol) {
    for (auto& g : summary.gaps) {
        if (g.is_closed) {
            g.h = 0.0;
            continue;
        }
        const double sign = g.parity();
        // Delta' has exactly one zero in the gap; refine it inside [z_minus, z_plus].
        auto fdf = [&](double z) {
            const auto r = integrate_monodromy(pot, z, tol, Derivatives::second);
            return std::pair{r.delta_prime, r.delta_double_prime};
        };
        if (auto zc = detail::bracketed_root(fdf, g.z_minus, g.z_plus, tol * 1e-2)) g.z_crit = *zc;
        const double peak = sign * lyapunov(pot, g.z_crit, tol * 1e-2);
        if (peak < 1.0 - 100.0 * tol) {
            std::ostringstream os;
            os << "gap " << g.n << ": max (-1)^n Delta = " << peak << " < 1 (edge mislabelled)";
            throw InconsistencyError(os.str());
        }
        g.h = std::acosh(std::max(peak, 1.0));
    }
    summary.tail_height = std::max(summary.gaps.front().h, summary.gaps.back().h);
}

}  // namespace zsspec
