#include "zsspec/quasimomentum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "zsspec/errors.hpp"

namespace zsspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMassAgreement = 1e-4;

double height_scaled_tol(double tol, double h) { return std::max(tol * std::clamp(h, 1e-3, 1.0), 1e-13); }

// Least-squares fit y = c0 + c1 d + c2 d^2; returns c0.
double quadratic_intercept(const std::array<double, 5>& d, const std::array<double, 5>& y) {
    // Normal equations on the 3x3 Gram matrix; the offsets are rescaled to O(1)
    // first so the system is well conditioned.
    const double scale = d[0];
    double s[5] = {0, 0, 0, 0, 0}, t[3] = {0, 0, 0};
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double u = d[i] / scale;
        double p = 1.0;
        for (int k = 0; k < 5; ++k) {
            s[k] += p;
            if (k < 3) t[k] += p * y[i];
            p *= u;
        }
    }
    double a[3][4] = {{s[0], s[1], s[2], t[0]}, {s[1], s[2], s[3], t[1]}, {s[2], s[3], s[4], t[2]}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        for (int c = 0; c < 4; ++c) std::swap(a[col][c], a[piv][c]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return a[0][3] / a[0][0];
}

}  // namespace

double gap_v(const Potential& pot, const GapRecord& gap, double x, double tol) {
    if (gap.is_closed) throw InputError("gap_v requires an open gap");
    const double slack = 1e-12 * (1.0 + std::abs(x));
    if (x < gap.z_minus - slack || x > gap.z_plus + slack) {
        std::ostringstream os;
        os << "gap_v: x=" << x << " outside gap " << gap.n << " = (" << gap.z_minus << ", " << gap.z_plus << ")";
        throw InputError(os.str());
    }
    const double arg = gap.parity() * lyapunov(pot, x, height_scaled_tol(tol, gap.h > 0 ? gap.h : 1.0));
    if (arg < 1.0 - 100.0 * tol) {
        std::ostringstream os;
        os << "gap_v: (-1)^n Delta(" << x << ") = " << arg << " < 1 inside gap " << gap.n;
        throw InconsistencyError(os.str());
    }
    return arg <= 1.0 ? 0.0 : std::acosh(arg);
}

ActionRecord action(const Potential& pot, const GapRecord& gap, double tol) {
    ActionRecord rec;
    rec.n = gap.n;
    if (gap.is_closed) return rec;
    const double mid = 0.5 * (gap.z_minus + gap.z_plus);
    const double half = 0.5 * (gap.z_plus - gap.z_minus);
    auto integrand = [&](double theta) {
        const double x = std::clamp(mid + half * std::sin(theta), gap.z_minus, gap.z_plus);
        return gap_v(pot, gap, x, tol) * half * std::cos(theta);
    };
    // Target is absolute, 1e-10 max(1, A); A is roughly |g| h / pi, so convert to the
    // relative tolerance the Gauss-Kronrod driver expects.
    const double a_est = std::max(gap.length() * gap.h / kPi, 1e-300);
    const double rel_tol = std::clamp(0.5e-10 * std::max(1.0, a_est) / a_est, 1e-13, 1e-2);
    double err = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, -kPi / 2, kPi / 2, 10, rel_tol, &err);
    rec.A = 2.0 / kPi * integral;
    rec.quad_error = 2.0 / kPi * err;
    if (rec.quad_error > 1e-10 * std::max(1.0, rec.A)) {
        std::ostringstream os;
        os << "action quadrature for gap " << gap.n << " did not converge (error estimate " << rec.quad_error << ")";
        throw ConvergenceError(os.str(), rec.quad_error);
    }
    rec.J = std::sqrt(rec.A);
    rec.e_charge = gap.length() / (4.0 * kPi);
    rec.d_moment = rec.A / 4.0;
    return rec;
}

EffectiveMasses effective_masses(const Potential& pot, const GapRecord& gap, double left_scale,
                                 double right_scale, double tol) {
    EffectiveMasses m;
    if (gap.is_closed) return m;
    const double sign = gap.parity();
    const double eval_tol = height_scaled_tol(tol, gap.h);

    m.mu_plus = -sign * integrate_monodromy(pot, gap.z_plus, eval_tol, Derivatives::first).delta_prime;
    m.mu_minus = -sign * integrate_monodromy(pot, gap.z_minus, eval_tol, Derivatives::first).delta_prime;

    // Band side: (k - pi n)^2 = 2 mu (x - z^±) + O((x - z^±)^2).
    auto fit = [&](double edge, double direction, double scale) {
        std::array<double, 5> d{}, y{};
        for (std::size_t j = 0; j < d.size(); ++j) {
            d[j] = scale * std::pow(10.0, -3.0 - 0.5 * static_cast<double>(j));
            const double c = sign * lyapunov(pot, edge + direction * d[j], eval_tol);
            // arccos near 1 without cancellation: 2 asin(sqrt((1 - c) / 2)).
            const double k = 2.0 * std::asin(std::sqrt(std::clamp((1.0 - c) / 2.0, 0.0, 1.0)));
            y[j] = k * k / (2.0 * d[j]);
        }
        return direction * quadratic_intercept(d, y);
    };
    m.fit_plus = fit(gap.z_plus, +1.0, right_scale);
    m.fit_minus = fit(gap.z_minus, -1.0, left_scale);

    auto agree = [](double a, double b) { return std::abs(a - b) <= kMassAgreement * std::max(std::abs(a), std::abs(b)); };
    m.reliable = agree(m.mu_plus, m.fit_plus) && agree(m.mu_minus, m.fit_minus);
    return m;
}

MomentSummary moments(const SpectralSummary& summary, const NormSq& norm) {
    MomentSummary ms;
    for (const auto& a : summary.actions) {
        ms.sum_A += a.A;
        ms.J_norm_sq += a.J * a.J;
    }
    ms.Q0 = 0.5 * ms.sum_A;
    ms.I_D = ms.sum_A;
    ms.norm_sq_stated = norm.stated;
    ms.norm_sq_doubled = norm.doubled;

    auto residual = [&](double norm_sq) {
        const double target = 0.5 * norm_sq;
        const double scale = std::max({std::abs(ms.sum_A), std::abs(target), 1e-300});
        return (ms.sum_A == target) ? 0.0 : std::abs(ms.sum_A - target) / scale;
    };
    ms.identity_residual_stated = residual(norm.stated);
    ms.identity_residual_doubled = residual(norm.doubled);
    const bool stated_ok = ms.identity_residual_stated <= 1e-8;
    const bool doubled_ok = ms.identity_residual_doubled <= 1e-8;
    ms.identity_match = stated_ok && doubled_ok ? NormConvention::both
                        : stated_ok             ? NormConvention::stated
                        : doubled_ok            ? NormConvention::doubled
                                                : NormConvention::none;
    return ms;
}

SpectralSummary analyze_potential(const Potential& pot, int window, double tol) {
    BandScanOptions opts;
    opts.tol = tol;
    auto summary = find_band_edges(pot, window, opts);
    compute_heights(summary, pot, tol);

    summary.actions.reserve(summary.gaps.size());
    for (int n = -window; n <= window; ++n) {
        const auto& g = summary.gap(n);
        auto rec = action(pot, g, tol);
        if (!g.is_closed) {
            const double left_neighbor = (n > -window) ? summary.gap(n - 1).z_crit : summary.outer_crit_left;
            const double right_neighbor = (n < window) ? summary.gap(n + 1).z_crit : summary.outer_crit_right;
            // Delta is monotone between an edge and the neighbouring critical point.
            const auto m = effective_masses(pot, g, g.z_minus - left_neighbor, right_neighbor - g.z_plus, tol);
            rec.mu_plus = m.mu_plus;
            rec.mu_minus = m.mu_minus;
            rec.mu_plus_fit = m.fit_plus;
            rec.mu_minus_fit = m.fit_minus;
            rec.mass_reliable = m.reliable;
            if (!m.reliable) {
                std::ostringstream os;
                os << "gap " << n << ": effective-mass fit disagrees with -(-1)^n Delta'(z^±) (fit "
                   << m.fit_minus << ", " << m.fit_plus << " vs " << m.mu_minus << ", " << m.mu_plus << ")";
                summary.warnings.push_back(os.str());
            }
        }
        summary.actions.push_back(rec);
    }
    summary.moments = moments(summary, potential_norm_sq(pot));
    return summary;
}

}  // namespace zsspec
