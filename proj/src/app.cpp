#include "zsspec/app.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "zsspec/audit.hpp"
#include "zsspec/errors.hpp"
#include "zsspec/format.hpp"
#include "zsspec/quasimomentum.hpp"
#include "zsspec/report.hpp"

namespace zsspec {

namespace {

class StageError : public Error {
public:
    StageError(const std::string& stage, const std::string& what) : Error(stage + ": " + what) {}
};

template <class F>
auto stage(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(name, e.what());
    }
}

struct Writer {
    std::filesystem::path dir;
    RunOutcome& out;

    void text(const std::string& rel, const std::string& content) {
        const auto p = (dir / rel).string();
        write_text_file(p, content);
        out.artifacts.push_back(p);
    }
    template <class F>
    void stream(const std::string& rel, F&& f) {
        std::ostringstream os;
        f(os);
        text(rel, os.str());
    }
};

std::string label_file(int n) { return "profiles/gap_" + std::to_string(n) + ".csv"; }

AuditOptions audit_options(const RunConfig& cfg) {
    AuditOptions o;
    o.p_list = cfg.p_list;
    o.weights = cfg.weights;
    return o;
}

std::string potential_source(const Potential& pot, const RunConfig& cfg) {
    return pot.describe() + " window=" + std::to_string(cfg.window) + " tol=" + format_double(cfg.tol);
}

SpectralSummary potential_stage(const Potential& pot, const RunConfig& cfg, Writer& w) {
    auto s = stage("band-structure/quasimomentum", [&] { return analyze_potential(pot, cfg.window, cfg.tol); });
    w.stream("summary.csv", [&](std::ostream& os) { write_summary_csv(os, s); });
    w.text("summary.json", summary_json(s, potential_source(pot, cfg)));
    if (cfg.write_profiles) {
        stage("quasimomentum", [&] {
            for (const auto& g : s.gaps) {
                if (g.is_closed) continue;
                std::vector<double> xs, vs;
                const double m = 0.5 * (g.z_minus + g.z_plus), r = 0.5 * (g.z_plus - g.z_minus);
                for (int k = 0; k < cfg.profile_points; ++k) {
                    const double th = -0.5 * std::numbers::pi + std::numbers::pi * k / (cfg.profile_points - 1);
                    const double x = k == 0 ? g.z_minus : (k == cfg.profile_points - 1 ? g.z_plus : m + r * std::sin(th));
                    xs.push_back(x);
                    vs.push_back(gap_v(pot, g, x, cfg.tol));
                }
                w.stream(label_file(g.n), [&](std::ostream& os) { write_profile_csv(os, xs, vs); });
            }
            return 0;
        });
    }
    return s;
}

std::string comb_source(const CombSpec& c) {
    std::ostringstream os;
    if (c.has_gaps()) {
        os << "gaps(";
        for (std::size_t i = 0; i < c.gaps.size(); ++i) {
            os << (i ? ";" : "") << (c.labels.empty() ? static_cast<int>(i) : c.labels[i]) << ':'
               << format_double(c.gaps[i].lo) << ',' << format_double(c.gaps[i].hi);
        }
        os << ") nodes=" << c.profile.nodes << " tol=" << format_double(c.profile.tol);
    } else {
        os << "slits(";
        for (std::size_t i = 0; i < c.u.size(); ++i)
            os << (i ? ";" : "") << format_double(c.u[i]) << ',' << format_double(c.h[i]);
        os << ')';
    }
    if (c.u_star) os << " u_star=" << format_double(*c.u_star);
    return os.str();
}

// Returns the comb's sequence data when it is computable.
std::optional<SequenceData> comb_stage(const CombSpec& c, const RunConfig& cfg, Writer& w) {
    const auto src = comb_source(c);
    if (c.has_gaps()) {
        auto prof = stage("comb-geometry", [&] { return solve_gap_profile(GapConfiguration(c.gaps, c.labels), c.profile); });
        auto d = sequences_from_profile(prof, c.u_star, src);
        w.stream("comb_summary.csv", [&](std::ostream& os) { write_sequences_csv(os, d); });
        if (cfg.write_profiles) {
            for (std::size_t i = 0; i < prof.gaps.size(); ++i) {
                const auto& g = prof.gaps[i];
                std::vector<double> xs{g.z_minus}, vs{0.0};
                xs.insert(xs.end(), g.x.begin(), g.x.end());
                vs.insert(vs.end(), g.v.begin(), g.v.end());
                xs.push_back(g.z_plus);
                vs.push_back(0.0);
                w.stream(label_file(g.label), [&](std::ostream& os) { write_profile_csv(os, xs, vs); });
            }
        }
        return d;
    }
    const Comb comb(c.u, c.h);
    const auto greedy = greedy_select(comb);
    w.stream("greedy.csv", [&](std::ostream& os) {
        os << "index,u,h,selected\n";
        for (std::size_t i = 0; i < comb.size(); ++i)
            os << i << ',' << format_double(comb.u()[i]) << ',' << format_double(comb.h()[i]) << ','
               << (greedy.comb.h()[i] > 0.0 ? "true" : "false") << '\n';
    });
    if (comb.open_count() > 1) return std::nullopt;
    auto d = sequences_from_single_slit(comb, src);
    if (c.u_star) d.u_star = c.u_star;
    w.stream("comb_summary.csv", [&](std::ostream& os) { write_sequences_csv(os, d); });
    return d;
}

bool write_audit(const AuditReport& r, Writer& w, std::ostream& log) {
    w.stream("audit.csv", [&](std::ostream& os) { write_audit_csv(os, r); });
    w.text("audit.json", audit_json(r));
    log << "audit: " << r.count(AuditStatus::pass) << " pass, " << r.count(AuditStatus::fail) << " fail, "
        << r.count(AuditStatus::not_applicable) << " not-applicable\n";
    for (const auto& e : r.entries) {
        if (e.status == AuditStatus::fail) {
            log << "  FAIL " << e.id << (e.p ? " p=" + format_double(*e.p) : std::string()) << " w=" << e.weight
                << ": lhs=" << format_double(e.lhs) << " rhs=" << format_double(e.rhs) << '\n';
        }
    }
    return r.passed();
}

int run_potential_audit(const Potential& pot, const RunConfig& cfg, Writer& w, std::ostream& log) {
    const auto s = potential_stage(pot, cfg, w);
    const auto report = stage("audit-engine", [&] {
        auto d = sequences_from_summary(s, potential_norm_sq(pot), potential_source(pot, cfg));
        return audit_zs(d, audit_options(cfg));
    });
    return write_audit(report, w, log) ? exit_ok : exit_audit_failed;
}

}  // namespace

RunOutcome run(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
    RunOutcome out;
    Writer w{out_dir, out};
    try {
        if (const auto diag = check_config(cfg); !diag.empty()) throw InputError("config: " + diag.front());
        if (cfg.mode == "analyze-potential") {
            potential_stage(cfg.potential->build(), cfg, w);
        } else if (cfg.mode == "analyze-comb") {
            comb_stage(*cfg.comb, cfg, w);
        } else if (cfg.mode == "audit") {
            if (cfg.potential) {
                out.exit_code = run_potential_audit(cfg.potential->build(), cfg, w, log);
            } else {
                const auto d = comb_stage(*cfg.comb, cfg, w);
                if (!d) throw StageError("audit-engine", "comb with several open slits has no computable gap data");
                const auto report = stage("audit-engine", [&] { return audit_comb(*d, audit_options(cfg)); });
                out.exit_code = write_audit(report, w, log) ? exit_ok : exit_audit_failed;
            }
        } else if (cfg.mode == "sweep") {
            std::ostringstream table;
            table << "index,parameter,value,entries,pass,fail,not_applicable,passed\n";
            bool all = true;
            for (std::size_t i = 0; i < cfg.sweep->values.size(); ++i) {
                const double v = cfg.sweep->values[i];
                PotentialSpec spec = *cfg.potential;
                double scale = 1.0;
                if (cfg.sweep->parameter == "a") {
                    spec.a = v;
                } else {
                    scale = v;
                }
                char sub[32];
                std::snprintf(sub, sizeof sub, "entry_%03zu", i);
                Writer ew{w.dir / sub, out};
                log << "sweep " << cfg.sweep->parameter << "=" << format_double(v) << ": ";
                const auto pot = spec.build(scale);
                const auto s = potential_stage(pot, cfg, ew);
                const auto report = stage("audit-engine", [&] {
                    return audit_zs(sequences_from_summary(s, potential_norm_sq(pot), potential_source(pot, cfg)),
                                    audit_options(cfg));
                });
                const bool ok = write_audit(report, ew, log);
                all = all && ok;
                table << i << ',' << cfg.sweep->parameter << ',' << format_double(v) << ',' << report.entries.size()
                      << ',' << report.count(AuditStatus::pass) << ',' << report.count(AuditStatus::fail) << ','
                      << report.count(AuditStatus::not_applicable) << ',' << (ok ? "true" : "false") << '\n';
            }
            w.text("sweep.csv", table.str());
            out.exit_code = all ? exit_ok : exit_audit_failed;
        } else {
            throw InputError("mode '" + cfg.mode + "' does not run a pipeline");
        }
    } catch (const Error& e) {
        out.exit_code = exit_error;
        out.error = e.what();
        log << "error: " << e.what() << '\n';
    }
    return out;
}

}  // namespace zsspec
