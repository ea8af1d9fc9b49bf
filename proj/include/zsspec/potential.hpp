#pragma once

#include <string>
#include <utility>
#include <vector>

namespace zsspec {

/// Truncated real Fourier series on the unit period:
/// f(t) = c_0 + sum_{k>=1} (c_k cos 2 pi k t + s_k sin 2 pi k t).
/// `sin_coeffs[0]` is ignored.
struct FourierSeries {
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    double operator()(double t) const;
    bool empty() const { return cos_coeffs.empty() && sin_coeffs.empty(); }
};

enum class PotentialKind { zero, constant_offdiagonal, fourier, sampled };

const char* to_string(PotentialKind kind);

/// Real 1-periodic symmetric trace-free potential V = [[V1, V2], [V2, -V1]].
class Potential {
public:
    static Potential zero();
    /// V1 = 0, V2 = a.
    static Potential constant_offdiagonal(double a);
    static Potential fourier(FourierSeries v1, FourierSeries v2);
    /// Values at t_j = j / n, j = 0..n-1, linearly interpolated and wrapped at t = 1.
    static Potential sampled(std::vector<double> v1, std::vector<double> v2);

    PotentialKind kind() const { return kind_; }
    double amplitude() const { return amplitude_; }

    /// (V1(t), V2(t)); t is reduced modulo 1.
    std::pair<double, double> operator()(double t) const;

    /// Points in [0, 1] where V may fail to be smooth (always includes 0 and 1).
    std::vector<double> breakpoints() const;

    /// Canonical one-line description, stable across runs (used for provenance).
    std::string describe() const;

    const FourierSeries& v1_series() const { return v1_series_; }
    const FourierSeries& v2_series() const { return v2_series_; }
    const std::vector<double>& v1_samples() const { return v1_samples_; }
    const std::vector<double>& v2_samples() const { return v2_samples_; }

private:
    Potential() = default;

    PotentialKind kind_ = PotentialKind::zero;
    double amplitude_ = 0.0;
    FourierSeries v1_series_, v2_series_;
    std::vector<double> v1_samples_, v2_samples_;
};

/// Both candidate normalizations of ||V||^2.
struct NormSq {
    double stated = 0.0;   ///< int_0^1 (V1^2 + V2^2) dt
    double doubled = 0.0;  ///< 2 int_0^1 (V1^2 + V2^2) dt
};

NormSq potential_norm_sq(const Potential& pot);

}  // namespace zsspec
