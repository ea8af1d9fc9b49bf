#include "zsspec/comb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include "zsspec/errors.hpp"

namespace zsspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Full Gauss-Legendre rule on [-1, 1]; boost stores only the non-negative half.
template <unsigned N>
void legendre_rule(std::vector<double>& x, std::vector<double>& w) {
    using Rule = boost::math::quadrature::gauss<double, N>;
    const auto& a = Rule::abscissa();
    const auto& b = Rule::weights();
    x.clear();
    w.clear();
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] == 0.0) continue;
        x.push_back(-a[i]);
        w.push_back(b[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        x.push_back(a[i]);
        w.push_back(b[i]);
    }
}

void legendre_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    switch (n) {
        case 16: legendre_rule<16>(x, w); break;
        case 32: legendre_rule<32>(x, w); break;
        case 64: legendre_rule<64>(x, w); break;
        case 128: legendre_rule<128>(x, w); break;
        default: throw InputError("gap profile node count must be one of 16, 32, 64, 128");
    }
}

// sqrt|(t - a)(t - b)|, the square-root factor of gap (a, b) evaluated anywhere.
inline double root_factor(double t, double a, double b) { return std::sqrt(std::abs((t - a) * (t - b))); }

// log(1 + w) accurate for small |w|.
cplx log1p_complex(cplx w) {
    const double re = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
    const double im = std::atan2(w.imag(), 1.0 + w.real());
    return {re, im};
}

}  // namespace

// --- Comb / GapConfiguration -------------------------------------------------

Comb::Comb(std::vector<double> u, std::vector<double> h) : u_(std::move(u)), h_(std::move(h)) {
    if (u_.size() != h_.size()) throw InputError("comb: abscissa and height lists differ in length");
    for (std::size_t i = 0; i < u_.size(); ++i) {
        if (!std::isfinite(u_[i]) || !std::isfinite(h_[i])) throw InputError("comb: non-finite entry");
        if (h_[i] < 0.0) throw InputError("comb: heights must be non-negative");
        if (i > 0 && !(u_[i] > u_[i - 1])) throw InputError("comb: abscissas must be strictly increasing");
    }
}

double Comb::u_star() const {
    double s = kInf;
    for (std::size_t i = 1; i < u_.size(); ++i) s = std::min(s, u_[i] - u_[i - 1]);
    return s;
}

std::size_t Comb::open_count() const {
    return static_cast<std::size_t>(std::count_if(h_.begin(), h_.end(), [](double x) { return x > 0.0; }));
}

GapConfiguration::GapConfiguration(std::vector<Interval> gaps, std::vector<int> labels)
    : gaps_(std::move(gaps)), labels_(std::move(labels)) {
    if (labels_.empty()) {
        labels_.resize(gaps_.size());
        for (std::size_t i = 0; i < gaps_.size(); ++i) labels_[i] = static_cast<int>(i);
    }
    if (labels_.size() != gaps_.size()) throw InputError("gap configuration: label count differs from gap count");
    for (std::size_t i = 0; i < gaps_.size(); ++i) {
        const auto& g = gaps_[i];
        if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || !(g.hi > g.lo)) {
            throw InputError("gap configuration: each gap needs finite lo < hi");
        }
        if (i > 0 && !(g.lo > gaps_[i - 1].hi)) {
            throw InputError("gap configuration: gaps must be ordered and separated by a band of positive length");
        }
    }
}

double GapConfiguration::min_band() const {
    double s = kInf;
    for (std::size_t i = 1; i < gaps_.size(); ++i) s = std::min(s, gaps_[i].lo - gaps_[i - 1].hi);
    return s;
}

// --- single slit ----------------------------------------------------------------

cplx single_slit_map(double u0, double h0, cplx k) {
    const cplx w = k - u0;
    if (w.real() == 0.0 && std::abs(w.imag()) <= h0) {
        std::ostringstream os;
        os << "single_slit_map: k=" << k << " lies on the slit";
        throw InputError(os.str());
    }
    if (h0 == 0.0) return w;
    // 1 + h^2/w^2 is real and <= 0 exactly on the slit, so the principal root
    // of it is analytic elsewhere and z ~ w at infinity.
    return w * std::sqrt(1.0 + h0 * h0 / (w * w));
}

double single_slit_nu(double h0) {
    if (h0 <= 0.0) return 0.0;
    // Inverse map on the gap: k(x) = u0 + i sqrt(h0^2 - x^2), so
    // k''(x) = -i h0^2 / (h0^2 - x^2)^{3/2} and the tip is x = 0.
    const double k2 = h0 * h0 / std::pow(h0 * h0, 1.5);
    return 1.0 / k2;
}

// --- gap profile ------------------------------------------------------------------

double GapProfile::y_at(std::size_t index, double x) const {
    const auto& own = gaps.at(index);
    double sum = 0.0;
    for (std::size_t j = 0; j < gaps.size(); ++j) {
        if (j == index) continue;
        const auto& other = gaps[j];
        const double r = 0.5 * other.length();
        for (std::size_t k = 0; k < theta.size(); ++k) {
            const double t = other.x[k];
            const double c = std::cos(theta[k]);
            // v(t) dt = r cos(theta) (1 + Y) * r cos(theta) d theta
            sum += weight[k] * r * r * c * c * (1.0 + other.y[k]) /
                   (std::abs(t - x) * root_factor(t, own.z_minus, own.z_plus));
        }
    }
    return sum / kPi;
}

double GapProfile::v_at(std::size_t index, double x) const {
    const auto& own = gaps.at(index);
    if (x <= own.z_minus || x >= own.z_plus) return 0.0;
    return root_factor(x, own.z_minus, own.z_plus) * (1.0 + y_at(index, x));
}

GapProfile solve_gap_profile(const GapConfiguration& cfg, const ProfileOptions& opts) {
    if (cfg.size() == 0) throw InputError("solve_gap_profile: empty gap configuration");
    if (!(opts.tol > 0.0) || opts.max_iter < 1) throw InputError("solve_gap_profile: bad tolerance or iteration cap");

    GapProfile prof;
    std::vector<double> xi, wi;
    legendre_rule(opts.nodes, xi, wi);
    prof.theta.resize(xi.size());
    prof.weight.resize(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) {
        prof.theta[k] = 0.5 * kPi * xi[k];
        prof.weight[k] = 0.5 * kPi * wi[k];
    }
    prof.min_band = cfg.min_band();

    for (std::size_t i = 0; i < cfg.size(); ++i) {
        GapSolution g;
        g.label = cfg.labels()[i];
        g.z_minus = cfg.gaps()[i].lo;
        g.z_plus = cfg.gaps()[i].hi;
        const double m = 0.5 * (g.z_minus + g.z_plus), r = 0.5 * g.length();
        for (double th : prof.theta) g.x.push_back(m + r * std::sin(th));
        g.y.assign(g.x.size(), 0.0);
        g.v.resize(g.x.size());
        for (std::size_t k = 0; k < g.x.size(); ++k) g.v[k] = r * std::cos(prof.theta[k]);
        prof.gaps.push_back(std::move(g));
    }

    // Jacobi sweeps: every gap is updated from the previous iterate.
    bool converged = cfg.size() == 1;
    for (int it = 1; it <= opts.max_iter && !converged; ++it) {
        std::vector<std::vector<double>> next_y(prof.gaps.size());
        for (std::size_t i = 0; i < prof.gaps.size(); ++i) {
            next_y[i].resize(prof.gaps[i].x.size());
            for (std::size_t k = 0; k < next_y[i].size(); ++k) next_y[i][k] = prof.y_at(i, prof.gaps[i].x[k]);
        }
        double update = 0.0, vmax = 0.0;
        for (std::size_t i = 0; i < prof.gaps.size(); ++i) {
            auto& g = prof.gaps[i];
            const double r = 0.5 * g.length();
            for (std::size_t k = 0; k < g.y.size(); ++k) {
                if (next_y[i][k] < g.y[k] - 1e-13 * (1.0 + g.y[k])) {
                    throw InconsistencyError("gap profile iterate decreased; the fixed-point map must be monotone");
                }
                const double v_new = r * std::cos(prof.theta[k]) * (1.0 + next_y[i][k]);
                update = std::max(update, std::abs(v_new - g.v[k]));
                vmax = std::max(vmax, v_new);
                g.y[k] = next_y[i][k];
                g.v[k] = v_new;
            }
        }
        prof.iterations = it;
        prof.residual = update;
        if (!std::isfinite(update)) throw ConvergenceError("gap profile iteration diverged", update);
        converged = update < opts.tol * (1.0 + vmax);
    }
    if (!converged) {
        std::ostringstream os;
        os << "gap profile did not converge in " << opts.max_iter << " iterations (last update " << prof.residual
           << ")";
        throw ConvergenceError(os.str(), prof.residual);
    }

    for (std::size_t i = 0; i < prof.gaps.size(); ++i) {
        auto& g = prof.gaps[i];
        const double r = 0.5 * g.length();
        double a_sum = 0.0;
        for (std::size_t k = 0; k < g.y.size(); ++k) {
            const double c = std::cos(prof.theta[k]);
            a_sum += prof.weight[k] * r * r * c * c * (1.0 + g.y[k]);
        }
        g.A = 2.0 / kPi * a_sum;
        g.y_minus = prof.y_at(i, g.z_minus);
        g.y_plus = prof.y_at(i, g.z_plus);
        g.y_max = std::max({g.y_minus, g.y_plus, *std::max_element(g.y.begin(), g.y.end())});
        g.mu_plus = 0.5 * g.length() * (1.0 + g.y_plus) * (1.0 + g.y_plus);
        g.mu_minus = -0.5 * g.length() * (1.0 + g.y_minus) * (1.0 + g.y_minus);

        // v is strictly concave on the gap; Brent on -v finds its peak.
        auto neg_v = [&](double x) { return -prof.v_at(i, x); };
        const auto [xp, fp] = boost::math::tools::brent_find_minima(neg_v, g.z_minus, g.z_plus, 52);
        g.x_peak = xp;
        g.h = -fp;
        prof.Q0 += 0.5 * g.A;
    }
    return prof;
}

// --- greedy -------------------------------------------------------------------------

GreedyResult greedy_select(const Comb& comb) {
    const auto& u = comb.u();
    const auto& h = comb.h();
    std::vector<double> kept(h.size(), 0.0);
    std::vector<std::size_t> order;
    std::vector<bool> eligible(h.size(), true);
    while (true) {
        std::optional<std::size_t> best;
        for (std::size_t n = 0; n < h.size(); ++n) {
            if (!eligible[n] || h[n] <= 0.0) continue;
            // Strict '>' keeps the smallest abscissa on ties since u is increasing.
            if (!best || h[n] > h[*best]) best = n;
        }
        if (!best) break;
        const std::size_t s = *best;
        order.push_back(s);
        kept[s] = h[s];
        for (std::size_t n = 0; n < h.size(); ++n) {
            if (!(std::abs(u[n] - u[s]) > h[s])) eligible[n] = false;
        }
    }
    return {Comb(u, kept), order};
}

// --- capacity --------------------------------------------------------------------------

SegmentCapacity::SegmentCapacity(std::vector<Interval> set) : set_(std::move(set)) {
    std::sort(set_.begin(), set_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < set_.size(); ++i) {
        const auto& s = set_[i];
        if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !(s.hi > s.lo)) {
            throw InputError("capacity: each interval needs finite lo < hi");
        }
        if (i > 0 && !(s.lo > set_[i - 1].hi)) throw InputError("capacity: intervals overlap");
        value_ += s.length();
    }
    value_ /= 4.0;
}

cplx SegmentCapacity::phi(cplx z) const {
    cplx sum = 0.0;
    for (const auto& s : set_) {
        if (z.imag() == 0.0 && z.real() >= s.lo && z.real() <= s.hi) {
            throw InputError("phi_E is undefined on E");
        }
        // (z - a)/(z - b) = 1 + (b - a)/(z - b); log1p keeps precision at large |z|.
        sum += log1p_complex(cplx(s.length(), 0.0) / (z - s.hi));
    }
    return sum;
}

cplx SegmentCapacity::ahlfors(cplx z) const { return std::tanh(0.25 * phi(z)); }

cplx SegmentCapacity::derivative_at_infinity(double radius, int samples) const {
    if (samples < 1) throw InputError("derivative_at_infinity needs at least one sample");
    cplx acc = 0.0;
    for (int j = 0; j < samples; ++j) {
        // Offset by half a step so no sample lands on the real axis.
        const double angle = 2.0 * kPi * (j + 0.5) / samples;
        const cplx z = std::polar(radius, angle);
        acc += z * ahlfors(z);
    }
    return acc / static_cast<double>(samples);
}

SegmentCapacity capacity_segments(std::vector<Interval> set) { return SegmentCapacity(std::move(set)); }

// --- Lindelof -------------------------------------------------------------------------

bool LindelofReport::all_passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
}

LindelofReport lindelof_check(const Comb& h, const Comb& h_tilde, const std::vector<cplx>& probes,
                              const std::optional<OperatorBacking>& backing_h,
                              const std::optional<OperatorBacking>& backing_h_tilde) {
    if (h.u() != h_tilde.u()) throw InputError("lindelof_check: combs must share abscissas");
    for (std::size_t n = 0; n < h.size(); ++n) {
        if (h_tilde.h()[n] > h.h()[n]) throw InputError("lindelof_check: h~_n must not exceed h_n");
    }
    constexpr double kSlack = 1e-12;
    LindelofReport rep;

    // Closed form for a comb with at most one slit: y(k) = Im z(k).
    auto single = [](const Comb& c) -> std::optional<std::pair<double, double>> {
        if (c.open_count() > 1) return std::nullopt;
        for (std::size_t n = 0; n < c.size(); ++n)
            if (c.h()[n] > 0.0) return std::pair{c.u()[n], c.h()[n]};
        return std::pair{0.0, 0.0};
    };
    const auto sh = single(h);
    const auto st = single(h_tilde);

    if (sh && st) {
        for (const auto& k : probes) {
            if (k.imag() <= 0.0) continue;
            std::ostringstream where;
            where << "k=" << k.real() << (k.imag() >= 0 ? "+" : "") << k.imag() << "i";
            const bool on_slit = sh->second > 0.0 && k.real() == sh->first && k.imag() <= sh->second;
            if (on_slit) {
                rep.not_computable.push_back("y at " + where.str() + " (on a slit of h)");
                continue;
            }
            // With h~ = 0 the map is z = k itself.
            const double yt = st->second > 0.0 ? single_slit_map(st->first, st->second, k).imag() : k.imag();
            const double yh = single_slit_map(sh->first, sh->second, k).imag();
            rep.entries.push_back({"y", where.str(), yt, yh, yt >= yh - kSlack * (1.0 + std::abs(yh))});
        }
    } else {
        rep.not_computable.push_back("y(k): multi-slit comb map is not available");
    }

    const std::optional<double> q_h = sh ? std::optional(single_slit_q0(sh->second))
                                         : (backing_h ? std::optional(backing_h->Q0) : std::nullopt);
    const std::optional<double> q_t = st ? std::optional(single_slit_q0(st->second))
                                         : (backing_h_tilde ? std::optional(backing_h_tilde->Q0) : std::nullopt);
    if (q_h && q_t) {
        rep.entries.push_back({"Q0", "global", *q_t, *q_h, *q_t <= *q_h + kSlack * (1.0 + *q_h)});
    } else {
        rep.not_computable.push_back("Q0: needs closed form or operator backing for both combs");
    }

    if (backing_h && backing_h_tilde && !backing_h->band_lengths.empty() &&
        backing_h->band_lengths.size() == backing_h_tilde->band_lengths.size()) {
        for (std::size_t i = 0; i < backing_h->band_lengths.size(); ++i) {
            const double bt = backing_h_tilde->band_lengths[i], bh = backing_h->band_lengths[i];
            rep.entries.push_back({"band", "band " + std::to_string(i), bt, bh, bt >= bh - kSlack * (1.0 + bh)});
        }
    } else {
        rep.not_computable.push_back("band lengths: only audited on operator-backed pairs");
    }
    return rep;
}

}  // namespace zsspec
