#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zsspec/app.hpp"
#include "zsspec/audit.hpp"
#include "zsspec/comb.hpp"
#include "zsspec/config.hpp"
#include "zsspec/errors.hpp"
#include "zsspec/monodromy.hpp"
#include "zsspec/quasimomentum.hpp"
#include "zsspec/report.hpp"

namespace py = pybind11;
using namespace zsspec;

namespace {

std::vector<Interval> to_intervals(const std::vector<std::pair<double, double>>& v) {
    std::vector<Interval> out;
    for (const auto& [lo, hi] : v) out.push_back({lo, hi});
    return out;
}

AuditOptions audit_options(const std::optional<std::vector<double>>& p_list,
                           const std::optional<std::vector<std::string>>& weights) {
    AuditOptions o;
    if (p_list) o.p_list = *p_list;
    if (weights) {
        o.weights.clear();
        for (const auto& w : *weights) o.weights.push_back(parse_weight(w));
    }
    return o;
}

py::list entries_to_list(const AuditReport& r) {
    py::list out;
    for (const auto& e : r.entries) {
        py::dict d;
        d["id"] = e.id;
        d["tag"] = e.tag;
        d["p"] = e.p ? py::cast(*e.p) : py::none();
        d["weight"] = e.weight;
        d["relation"] = e.relation;
        d["lhs"] = e.lhs;
        d["rhs"] = e.rhs;
        d["margin"] = e.margin;
        d["status"] = to_string(e.status);
        d["note"] = e.note;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_zsspec, m) {
    m.doc() = "Spectral analysis of periodic Zakharov-Shabat operators and comb domains";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());
    py::register_exception<LabelingError>(m, "LabelingError", base.ptr());
    py::register_exception<InconsistencyError>(m, "InconsistencyError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

    m.attr("DEFAULT_TOL") = kDefaultTol;

    py::class_<Potential>(m, "Potential")
        .def_static("zero", &Potential::zero)
        .def_static("constant_offdiagonal", &Potential::constant_offdiagonal, py::arg("a"))
        .def_static(
            "fourier",
            [](std::vector<double> v1_cos, std::vector<double> v1_sin, std::vector<double> v2_cos,
               std::vector<double> v2_sin) {
                return Potential::fourier({std::move(v1_cos), std::move(v1_sin)},
                                          {std::move(v2_cos), std::move(v2_sin)});
            },
            py::arg("v1_cos") = std::vector<double>{}, py::arg("v1_sin") = std::vector<double>{},
            py::arg("v2_cos") = std::vector<double>{}, py::arg("v2_sin") = std::vector<double>{})
        .def_static("sampled", &Potential::sampled, py::arg("v1"), py::arg("v2"))
        .def_property_readonly("kind", [](const Potential& p) { return std::string(to_string(p.kind())); })
        .def("norm_sq", [](const Potential& p) {
            const auto n = potential_norm_sq(p);
            return py::dict(py::arg("stated") = n.stated, py::arg("doubled") = n.doubled);
        });

    m.def(
        "monodromy",
        [](const Potential& pot, double z, double tol) {
            const auto r = integrate_monodromy(pot, z, tol);
            return py::dict(py::arg("matrix") = r.m, py::arg("delta") = r.delta,
                            py::arg("delta_prime") = r.delta_prime,
                            py::arg("delta_double_prime") = r.delta_double_prime);
        },
        py::arg("potential"), py::arg("z"), py::arg("tol") = kDefaultTol);
    m.def("lyapunov", &lyapunov, py::arg("potential"), py::arg("z"), py::arg("tol") = kDefaultTol);

    py::class_<GapRecord>(m, "GapRecord")
        .def_readonly("n", &GapRecord::n)
        .def_readonly("z_minus", &GapRecord::z_minus)
        .def_readonly("z_plus", &GapRecord::z_plus)
        .def_readonly("z_crit", &GapRecord::z_crit)
        .def_readonly("h", &GapRecord::h)
        .def_readonly("is_closed", &GapRecord::is_closed)
        .def_property_readonly("length", &GapRecord::length);

    py::class_<ActionRecord>(m, "ActionRecord")
        .def_readonly("n", &ActionRecord::n)
        .def_readonly("A", &ActionRecord::A)
        .def_readonly("J", &ActionRecord::J)
        .def_readonly("mu_plus", &ActionRecord::mu_plus)
        .def_readonly("mu_minus", &ActionRecord::mu_minus)
        .def_readonly("e_charge", &ActionRecord::e_charge)
        .def_readonly("d_moment", &ActionRecord::d_moment);

    py::class_<SpectralSummary>(m, "SpectralSummary")
        .def_readonly("window", &SpectralSummary::window)
        .def_readonly("tol", &SpectralSummary::tol)
        .def_readonly("gaps", &SpectralSummary::gaps)
        .def_readonly("actions", &SpectralSummary::actions)
        .def_readonly("tail_height", &SpectralSummary::tail_height)
        .def_readonly("warnings", &SpectralSummary::warnings)
        .def("gap", py::overload_cast<int>(&SpectralSummary::gap, py::const_), py::arg("n"))
        .def("band_lengths", &SpectralSummary::band_lengths)
        .def_property_readonly("moments",
                               [](const SpectralSummary& s) -> py::object {
                                   if (!s.moments) return py::none();
                                   const auto& mm = *s.moments;
                                   return py::dict(py::arg("Q0") = mm.Q0, py::arg("I_D") = mm.I_D,
                                                   py::arg("sum_A") = mm.sum_A,
                                                   py::arg("J_norm_sq") = mm.J_norm_sq,
                                                   py::arg("identity_match") = to_string(mm.identity_match));
                               })
        .def("summary_csv", [](const SpectralSummary& s) {
            std::ostringstream os;
            write_summary_csv(os, s);
            return os.str();
        });

    m.def("analyze_potential", &analyze_potential, py::arg("potential"), py::arg("window"),
          py::arg("tol") = kDefaultTol, py::call_guard<py::gil_scoped_release>());
    m.def(
        "gap_v", [](const Potential& pot, const GapRecord& g, double x, double tol) { return gap_v(pot, g, x, tol); },
        py::arg("potential"), py::arg("gap"), py::arg("x"), py::arg("tol") = kDefaultTol);

    py::class_<GapSolution>(m, "GapSolution")
        .def_readonly("label", &GapSolution::label)
        .def_readonly("z_minus", &GapSolution::z_minus)
        .def_readonly("z_plus", &GapSolution::z_plus)
        .def_readonly("x", &GapSolution::x)
        .def_readonly("v", &GapSolution::v)
        .def_readonly("y", &GapSolution::y)
        .def_readonly("h", &GapSolution::h)
        .def_readonly("A", &GapSolution::A)
        .def_readonly("y_max", &GapSolution::y_max)
        .def_readonly("mu_plus", &GapSolution::mu_plus)
        .def_readonly("mu_minus", &GapSolution::mu_minus);

    py::class_<GapProfile>(m, "GapProfile")
        .def_readonly("gaps", &GapProfile::gaps)
        .def_readonly("iterations", &GapProfile::iterations)
        .def_readonly("residual", &GapProfile::residual)
        .def_readonly("Q0", &GapProfile::Q0)
        .def("v_at", &GapProfile::v_at, py::arg("index"), py::arg("x"))
        .def("y_at", &GapProfile::y_at, py::arg("index"), py::arg("x"));

    m.def(
        "solve_gap_profile",
        [](const std::vector<std::pair<double, double>>& gaps, std::vector<int> labels, int nodes, double tol,
           int max_iter) {
            ProfileOptions o;
            o.nodes = nodes;
            o.tol = tol;
            o.max_iter = max_iter;
            return solve_gap_profile(GapConfiguration(to_intervals(gaps), std::move(labels)), o);
        },
        py::arg("gaps"), py::arg("labels") = std::vector<int>{}, py::arg("nodes") = 64, py::arg("tol") = 1e-12,
        py::arg("max_iter") = 500);

    m.def("single_slit_map", &single_slit_map, py::arg("u0"), py::arg("h0"), py::arg("k"));
    m.def(
        "greedy_select",
        [](std::vector<double> u, std::vector<double> h) {
            const auto r = greedy_select(Comb(std::move(u), std::move(h)));
            return py::make_tuple(r.comb.h(), r.order);
        },
        py::arg("u"), py::arg("h"));

    py::class_<SegmentCapacity>(m, "SegmentCapacity")
        .def(py::init([](const std::vector<std::pair<double, double>>& set) {
                 return SegmentCapacity(to_intervals(set));
             }),
             py::arg("intervals"))
        .def_property_readonly("value", &SegmentCapacity::value)
        .def("phi", &SegmentCapacity::phi, py::arg("z"))
        .def("ahlfors", &SegmentCapacity::ahlfors, py::arg("z"))
        .def("derivative_at_infinity", &SegmentCapacity::derivative_at_infinity, py::arg("radius") = 1e6,
             py::arg("samples") = 16);

    m.def("weighted_norm", &weighted_norm, py::arg("f"), py::arg("p"), py::arg("w") = std::vector<double>{});

    m.def(
        "audit_potential",
        [](const Potential& pot, int window, double tol, std::optional<std::vector<double>> p_list,
           std::optional<std::vector<std::string>> weights) {
            const auto s = analyze_potential(pot, window, tol);
            return entries_to_list(
                audit_zs(sequences_from_summary(s, potential_norm_sq(pot), "python"), audit_options(p_list, weights)));
        },
        py::arg("potential"), py::arg("window"), py::arg("tol") = kDefaultTol, py::arg("p_list") = py::none(),
        py::arg("weights") = py::none());
    m.def(
        "audit_gaps",
        [](const std::vector<std::pair<double, double>>& gaps, std::optional<double> u_star,
           std::optional<std::vector<double>> p_list, std::optional<std::vector<std::string>> weights) {
            const auto prof = solve_gap_profile(GapConfiguration(to_intervals(gaps)));
            return entries_to_list(audit_comb(sequences_from_profile(prof, u_star, "python"),
                                              audit_options(p_list, weights)));
        },
        py::arg("gaps"), py::arg("u_star") = py::none(), py::arg("p_list") = py::none(),
        py::arg("weights") = py::none());

    m.def(
        "validate_config",
        [](const std::string& path) { return load_config_file(path).diagnostics; }, py::arg("path"));
    m.def(
        "run_config",
        [](const std::string& path, const std::string& out_dir) {
            const auto parsed = load_config_file(path);
            if (!parsed.diagnostics.empty()) {
                std::string msg = "invalid configuration:";
                for (const auto& d : parsed.diagnostics) msg += "\n  " + d;
                throw InputError(msg);
            }
            std::ostringstream log;
            const auto r = run(parsed.config, out_dir, log);
            return py::dict(py::arg("exit_code") = r.exit_code, py::arg("artifacts") = r.artifacts,
                            py::arg("error") = r.error, py::arg("log") = log.str());
        },
        py::arg("path"), py::arg("out_dir"));
}
