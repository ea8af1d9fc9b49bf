#pragma once

#include <cmath>
#include <utility>

namespace zsspec::detail {

template <class F>
std::optional<double> bracketed_root(F&& fdf, double a, double b, double xtol, int max_iter) {
    auto [fa, dfa] = fdf(a);
    auto [fb, dfb] = fdf(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) return std::nullopt;
    // Keep f(lo) < 0 < f(hi).
    double lo = a, hi = b;
    if (fa > 0.0) std::swap(lo, hi);
    double x = 0.5 * (a + b);
    double last_step = std::abs(b - a);
    for (int it = 0; it < max_iter; ++it) {
        auto [fx, dfx] = fdf(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) lo = x; else hi = x;
        double next = (dfx != 0.0) ? x - fx / dfx : lo + 0.5 * (hi - lo);
        const double bmin = std::min(lo, hi), bmax = std::max(lo, hi);
        // Fall back to bisection when Newton leaves the bracket or stalls.
        if (!(next > bmin && next < bmax) || std::abs(next - x) > 0.5 * last_step) {
            next = 0.5 * (lo + hi);
        }
        last_step = std::abs(next - x);
        x = next;
        if (last_step < xtol || bmax - bmin < xtol) return x;
    }
    return std::nullopt;
}

}  // namespace zsspec::detail
