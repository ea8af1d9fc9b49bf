#include "zsspec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "zsspec/errors.hpp"
#include "zsspec/format.hpp"

namespace zsspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(const std::vector<double>& values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InputError(std::string(what) + " contains a non-finite value");
        }
    }
}

void append_list(std::ostringstream& os, const std::vector<double>& values) {
    os << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << format_double(values[i]);
    }
    os << ']';
}

double lerp_periodic(const std::vector<double>& samples, double t) {
    const auto n = samples.size();
    const double s = t * static_cast<double>(n);
    auto j = static_cast<std::size_t>(std::floor(s));
    double frac = s - std::floor(s);
    if (j >= n) {
        j = n - 1;
        frac = 1.0;
    }
    const double a = samples[j];
    const double b = samples[(j + 1) % n];
    return a + frac * (b - a);
}

}  // namespace

double FourierSeries::operator()(double t) const {
    double value = cos_coeffs.empty() ? 0.0 : cos_coeffs[0];
    const std::size_t modes = std::max(cos_coeffs.size(), sin_coeffs.size());
    for (std::size_t k = 1; k < modes; ++k) {
        const double phase = kTwoPi * static_cast<double>(k) * t;
        if (k < cos_coeffs.size()) value += cos_coeffs[k] * std::cos(phase);
        if (k < sin_coeffs.size()) value += sin_coeffs[k] * std::sin(phase);
    }
    return value;
}

const char* to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::zero: return "zero";
        case PotentialKind::constant_offdiagonal: return "constant_offdiagonal";
        case PotentialKind::fourier: return "fourier";
        case PotentialKind::sampled: return "sampled";
    }
    return "unknown";
}

Potential Potential::zero() { return Potential{}; }

Potential Potential::constant_offdiagonal(double a) {
    if (!std::isfinite(a)) throw InputError("constant potential amplitude must be finite");
    Potential p;
    p.kind_ = PotentialKind::constant_offdiagonal;
    p.amplitude_ = a;
    return p;
}

Potential Potential::fourier(FourierSeries v1, FourierSeries v2) {
    require_finite(v1.cos_coeffs, "v1 cos coefficients");
    require_finite(v1.sin_coeffs, "v1 sin coefficients");
    require_finite(v2.cos_coeffs, "v2 cos coefficients");
    require_finite(v2.sin_coeffs, "v2 sin coefficients");
    Potential p;
    p.kind_ = PotentialKind::fourier;
    p.v1_series_ = std::move(v1);
    p.v2_series_ = std::move(v2);
    return p;
}

Potential Potential::sampled(std::vector<double> v1, std::vector<double> v2) {
    if (v1.size() != v2.size()) throw InputError("sampled potential: v1 and v2 node counts differ");
    if (v1.size() < 2) throw InputError("sampled potential needs at least 2 nodes");
    require_finite(v1, "sampled v1");
    require_finite(v2, "sampled v2");
    Potential p;
    p.kind_ = PotentialKind::sampled;
    p.v1_samples_ = std::move(v1);
    p.v2_samples_ = std::move(v2);
    return p;
}

std::pair<double, double> Potential::operator()(double t) const {
    switch (kind_) {
        case PotentialKind::zero:
            return {0.0, 0.0};
        case PotentialKind::constant_offdiagonal:
            return {0.0, amplitude_};
        case PotentialKind::fourier:
            return {v1_series_(t), v2_series_(t)};
        case PotentialKind::sampled: {
            double r = t - std::floor(t);
            if (t == 1.0) r = 1.0;
            return {lerp_periodic(v1_samples_, r), lerp_periodic(v2_samples_, r)};
        }
    }
    return {0.0, 0.0};
}

std::vector<double> Potential::breakpoints() const {
    if (kind_ != PotentialKind::sampled) return {0.0, 1.0};
    const auto n = v1_samples_.size();
    std::vector<double> pts(n + 1);
    for (std::size_t j = 0; j <= n; ++j) pts[j] = static_cast<double>(j) / static_cast<double>(n);
    return pts;
}

std::string Potential::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    switch (kind_) {
        case PotentialKind::zero:
            break;
        case PotentialKind::constant_offdiagonal:
            os << "(a=" << format_double(amplitude_) << ')';
            break;
        case PotentialKind::fourier:
            os << "(v1.cos=";
            append_list(os, v1_series_.cos_coeffs);
            os << ";v1.sin=";
            append_list(os, v1_series_.sin_coeffs);
            os << ";v2.cos=";
            append_list(os, v2_series_.cos_coeffs);
            os << ";v2.sin=";
            append_list(os, v2_series_.sin_coeffs);
            os << ')';
            break;
        case PotentialKind::sampled:
            os << "(v1=";
            append_list(os, v1_samples_);
            os << ";v2=";
            append_list(os, v2_samples_);
            os << ')';
            break;
    }
    return os.str();
}

NormSq potential_norm_sq(const Potential& pot) {
    double stated = 0.0;
    switch (pot.kind()) {
        case PotentialKind::zero:
            break;
        case PotentialKind::constant_offdiagonal:
            stated = pot.amplitude() * pot.amplitude();
            break;
        case PotentialKind::fourier:
        case PotentialKind::sampled: {
            // Piecewise-linear samples give a quadratic integrand per segment, so a
            // 20-point Gauss rule is exact there; Fourier integrands are trigonometric
            // polynomials and 64 panels resolve them well past 1e-12.
            auto bp = pot.breakpoints();
            if (pot.kind() == PotentialKind::fourier) {
                const std::size_t modes = std::max({pot.v1_series().cos_coeffs.size(),
                                                    pot.v1_series().sin_coeffs.size(),
                                                    pot.v2_series().cos_coeffs.size(),
                                                    pot.v2_series().sin_coeffs.size(), std::size_t{1}});
                const std::size_t panels = 16 * modes;
                bp.resize(panels + 1);
                for (std::size_t j = 0; j <= panels; ++j) bp[j] = static_cast<double>(j) / static_cast<double>(panels);
            }
            auto integrand = [&pot](double t) {
                auto [v1, v2] = pot(t);
                return v1 * v1 + v2 * v2;
            };
            for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
                stated += boost::math::quadrature::gauss<double, 20>::integrate(integrand, bp[j], bp[j + 1]);
            }
            break;
        }
    }
    return {stated, 2.0 * stated};
}

}  // namespace zsspec
