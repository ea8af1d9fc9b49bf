#include "zsspec/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "zsspec/errors.hpp"

namespace zsspec {

namespace {

namespace odeint = boost::numeric::odeint;

// Each block is a row-major 2x2 matrix: block 0 = psi, 1 = d_z psi, 2 = d_z^2 psi.
template <std::size_t Blocks>
using State = std::array<double, 4 * Blocks>;

// out = A * in for A = [[a00, a01], [a10, a11]].
inline void mat_mul(double a00, double a01, double a10, double a11, const double* in, double* out) {
    out[0] = a00 * in[0] + a01 * in[2];
    out[1] = a00 * in[1] + a01 * in[3];
    out[2] = a10 * in[0] + a11 * in[2];
    out[3] = a10 * in[1] + a11 * in[3];
}

template <std::size_t Blocks>
struct ZsSystem {
    const Potential& pot;
    double z;

    // psi' = A psi with A = J (V - z) = [[V2, -V1 - z], [z - V1, -V2]];
    // dA/dz = [[0, -1], [1, 0]] feeds the variational blocks.
    void operator()(const State<Blocks>& x, State<Blocks>& dxdt, double t) const {
        const auto [v1, v2] = pot(t);
        const double a00 = v2, a01 = -v1 - z, a10 = z - v1, a11 = -v2;
        mat_mul(a00, a01, a10, a11, x.data(), dxdt.data());
        if constexpr (Blocks >= 2) {
            mat_mul(a00, a01, a10, a11, x.data() + 4, dxdt.data() + 4);
            dxdt[4] -= x[2];
            dxdt[5] -= x[3];
            dxdt[6] += x[0];
            dxdt[7] += x[1];
        }
        if constexpr (Blocks >= 3) {
            mat_mul(a00, a01, a10, a11, x.data() + 8, dxdt.data() + 8);
            dxdt[8] -= 2.0 * x[6];
            dxdt[9] -= 2.0 * x[7];
            dxdt[10] += 2.0 * x[4];
            dxdt[11] += 2.0 * x[5];
        }
    }
};

template <std::size_t Blocks>
State<Blocks> integrate_period(const Potential& pot, double z, double tol) {
    using Stepper = odeint::runge_kutta_fehlberg78<State<Blocks>>;
    auto stepper = odeint::make_controlled<Stepper>(tol, tol);
    const ZsSystem<Blocks> sys{pot, z};

    State<Blocks> x{};
    x[0] = 1.0;
    x[3] = 1.0;

    const auto breakpoints = pot.breakpoints();
    // Roughly resolve the oscillation frequency |z| + |V| on the first attempt.
    double dt = 0.5 / (1.0 + std::abs(z));
    constexpr double kMinStep = 1e-14;
    constexpr long kMaxSteps = 2'000'000;
    long steps = 0;

    for (std::size_t seg = 0; seg + 1 < breakpoints.size(); ++seg) {
        double t = breakpoints[seg];
        const double t_end = breakpoints[seg + 1];
        while (t < t_end) {
            if (t + dt > t_end) dt = t_end - t;
            const double t_before = t;
            auto result = stepper.try_step(sys, x, t, dt);
            if (result == odeint::fail) {
                if (dt < kMinStep) {
                    std::ostringstream os;
                    os << "step size underflow integrating the Zakharov-Shabat system at z=" << z;
                    throw IntegrationError(os.str(), t);
                }
                continue;
            }
            if (++steps > kMaxSteps) {
                throw IntegrationError("step budget exhausted integrating the Zakharov-Shabat system", t);
            }
            // Landing within rounding of the segment end counts as reaching it.
            if (t_end - t < 1e-15 * (1.0 + t_end) || t <= t_before) t = t_end;
        }
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw IntegrationError("non-finite monodromy entry", 1.0);
    }
    return x;
}

}  // namespace

MonodromyResult integrate_monodromy(const Potential& pot, double z, double tol, Derivatives derivs) {
    if (!(tol > 0.0)) throw InputError("integration tolerance must be positive");
    if (!std::isfinite(z)) throw InputError("spectral parameter must be finite");
    // Local error target below the requested global tolerance; the 7(8) pair is
    // cheap enough that this costs little and keeps Delta accurate near |Delta| = 1.
    const double local_tol = std::max(tol * 1e-2, 1e-14);

    MonodromyResult r;
    r.z = z;
    switch (derivs) {
        case Derivatives::none: {
            const auto x = integrate_period<1>(pot, z, local_tol);
            std::copy(x.begin(), x.begin() + 4, r.m.begin());
            break;
        }
        case Derivatives::first: {
            const auto x = integrate_period<2>(pot, z, local_tol);
            std::copy(x.begin(), x.begin() + 4, r.m.begin());
            r.delta_prime = 0.5 * (x[4] + x[7]);
            break;
        }
        case Derivatives::second: {
            const auto x = integrate_period<3>(pot, z, local_tol);
            std::copy(x.begin(), x.begin() + 4, r.m.begin());
            r.delta_prime = 0.5 * (x[4] + x[7]);
            r.delta_double_prime = 0.5 * (x[8] + x[11]);
            break;
        }
    }
    r.delta = 0.5 * (r.m[0] + r.m[3]);
    return r;
}

double lyapunov(const Potential& pot, double z, double tol) {
    return integrate_monodromy(pot, z, tol, Derivatives::none).delta;
}

}  // namespace zsspec
