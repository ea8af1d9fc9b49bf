#pragma once

#include "zsspec/band_structure.hpp"
#include "zsspec/potential.hpp"

namespace zsspec {

/// v(x) = Im k(x) = arccosh((-1)^n Delta(x)) for x in an open gap.
/// Arguments within [1 - 100 tol, 1] clamp to 0; below that InconsistencyError.
double gap_v(const Potential& pot, const GapRecord& gap, double x, double tol = kDefaultTol);

/// A_n = (2/pi) int_{g_n} v(x) dx via x = m + (|g|/2) sin(theta); J_n = sqrt(A_n).
/// Closed gaps give A = J = 0. Only the A/J/e/d fields and quad_error are filled.
ActionRecord action(const Potential& pot, const GapRecord& gap, double tol = kDefaultTol);

struct EffectiveMasses {
    double mu_plus = 0.0;   ///< -(-1)^n Delta'(z_n^+), > 0 on open gaps
    double mu_minus = 0.0;  ///< -(-1)^n Delta'(z_n^-), < 0 on open gaps
    double fit_plus = 0.0;  ///< band-side quadratic fit of (k - pi n)^2 against 2 (x - z_n^+)
    double fit_minus = 0.0;
    bool reliable = true;   ///< closed form and fit agree within 1e-4 relative
};

/// Effective masses at both edges. `left_scale` and `right_scale` are the lengths
/// available on the band side of z_n^- and z_n^+; samples are taken at offsets
/// {1e-3, ..., 1e-5} times those lengths. Closed gaps give zeros by convention.
EffectiveMasses effective_masses(const Potential& pot, const GapRecord& gap, double left_scale,
                                 double right_scale, double tol = kDefaultTol);

/// Q_0 = sum A_n / 2, I_D = sum A_n, and the audit of sum A_n = ||V||^2 / 2 under
/// both normalizations of ||V||^2.
MomentSummary moments(const SpectralSummary& summary, const NormSq& norm);

/// Full operator pipeline: edges, heights, actions, masses and moments on -N..N.
SpectralSummary analyze_potential(const Potential& pot, int window, double tol = kDefaultTol);

}  // namespace zsspec
