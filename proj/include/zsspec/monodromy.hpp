#pragma once

#include <array>

#include "zsspec/potential.hpp"

namespace zsspec {

inline constexpr double kDefaultTol = 1e-10;

/// Row-major 2x2 real matrix.
using Mat2 = std::array<double, 4>;

/// Monodromy matrix psi(1, z) and the Lyapunov function with its z-derivatives.
struct MonodromyResult {
    double z = 0.0;
    Mat2 m{};
    double delta = 0.0;
    double delta_prime = 0.0;
    double delta_double_prime = 0.0;

    double det() const { return m[0] * m[3] - m[1] * m[2]; }
};

/// How many z-derivatives of psi to carry along the integration.
enum class Derivatives { none = 0, first = 1, second = 2 };

/// Integrates J psi' + V psi = z psi, psi(0) = I over one period with adaptive
/// Runge-Kutta-Fehlberg 7(8) steps. Derivatives in z come from the variational
/// systems integrated on the same step sequence, never from differencing.
/// Throws IntegrationError when the step size underflows.
MonodromyResult integrate_monodromy(const Potential& pot, double z, double tol = kDefaultTol,
                                    Derivatives derivs = Derivatives::second);

/// Convenience: Delta(z) only.
double lyapunov(const Potential& pot, double z, double tol = kDefaultTol);

}  // namespace zsspec
