#include "zsspec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "zsspec/errors.hpp"

namespace zsspec {

namespace {

class Reader {
public:
    std::vector<std::string> diag;

    void fail(const std::string& key, const std::string& msg) { diag.push_back(key + ": " + msg); }

    void check_keys(const YAML::Node& node, const std::string& prefix, const std::set<std::string>& allowed) {
        if (!node.IsMap()) return;
        for (const auto& kv : node) {
            const auto k = kv.first.as<std::string>();
            if (!allowed.count(k)) fail(prefix + k, "unknown key");
        }
    }

    std::optional<double> number(const YAML::Node& n, const std::string& key) {
        if (!n.IsScalar()) {
            fail(key, "expected a number");
            return std::nullopt;
        }
        const auto s = n.Scalar();
        if (s == "inf" || s == ".inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            fail(key, "expected a number, got '" + s + "'");
            return std::nullopt;
        }
    }

    std::optional<int> integer(const YAML::Node& n, const std::string& key) {
        const auto v = number(n, key);
        if (!v) return std::nullopt;
        if (std::floor(*v) != *v || std::abs(*v) > 1e9) {
            fail(key, "expected an integer");
            return std::nullopt;
        }
        return static_cast<int>(*v);
    }

    std::vector<double> numbers(const YAML::Node& n, const std::string& key) {
        std::vector<double> out;
        if (!n.IsSequence()) {
            fail(key, "expected a list of numbers");
            return out;
        }
        for (std::size_t i = 0; i < n.size(); ++i) {
            if (auto v = number(n[i], key + "[" + std::to_string(i) + "]")) out.push_back(*v);
        }
        return out;
    }

    std::optional<std::string> string(const YAML::Node& n, const std::string& key) {
        if (!n.IsScalar()) {
            fail(key, "expected a string");
            return std::nullopt;
        }
        return n.Scalar();
    }

    std::optional<bool> boolean(const YAML::Node& n, const std::string& key) {
        if (n.IsScalar()) {
            const auto s = n.Scalar();
            if (s == "true" || s == "yes") return true;
            if (s == "false" || s == "no") return false;
        }
        fail(key, "expected true or false");
        return std::nullopt;
    }

    FourierSeries series(const YAML::Node& n, const std::string& key) {
        FourierSeries s;
        if (!n) return s;
        if (!n.IsMap()) {
            fail(key, "expected a map with 'cos' and/or 'sin'");
            return s;
        }
        check_keys(n, key + ".", {"cos", "sin"});
        if (n["cos"]) s.cos_coeffs = numbers(n["cos"], key + ".cos");
        if (n["sin"]) s.sin_coeffs = numbers(n["sin"], key + ".sin");
        return s;
    }
};

void parse_potential(Reader& r, const YAML::Node& n, RunConfig& cfg) {
    if (!n.IsMap()) {
        r.fail("potential", "expected a map");
        return;
    }
    r.check_keys(n, "potential.", {"kind", "a", "v1", "v2"});
    PotentialSpec p;
    if (!n["kind"]) {
        r.fail("potential.kind", "missing (zero, constant_offdiagonal, fourier or sampled)");
        return;
    }
    p.kind = r.string(n["kind"], "potential.kind").value_or("");
    if (p.kind == "zero") {
    } else if (p.kind == "constant_offdiagonal") {
        if (!n["a"]) {
            r.fail("potential.a", "missing for kind constant_offdiagonal");
        } else if (auto a = r.number(n["a"], "potential.a")) {
            if (!std::isfinite(*a)) r.fail("potential.a", "must be finite");
            p.a = *a;
        }
    } else if (p.kind == "fourier") {
        p.v1 = r.series(n["v1"], "potential.v1");
        p.v2 = r.series(n["v2"], "potential.v2");
        for (const auto* s : {&p.v1, &p.v2})
            for (const auto* c : {&s->cos_coeffs, &s->sin_coeffs})
                for (double x : *c)
                    if (!std::isfinite(x)) r.fail("potential", "Fourier coefficients must be finite");
    } else if (p.kind == "sampled") {
        if (!n["v1"] || !n["v2"]) {
            r.fail("potential.v1", "sampled potentials need both v1 and v2 lists");
        } else {
            p.samples_v1 = r.numbers(n["v1"], "potential.v1");
            p.samples_v2 = r.numbers(n["v2"], "potential.v2");
            if (p.samples_v1.size() != p.samples_v2.size()) r.fail("potential.v2", "length differs from v1");
            if (p.samples_v1.size() < 2) r.fail("potential.v1", "need at least 2 samples");
        }
    } else {
        r.fail("potential.kind", "unknown kind '" + p.kind + "'");
    }
    cfg.potential = p;
}

void parse_comb(Reader& r, const YAML::Node& n, RunConfig& cfg) {
    if (!n.IsMap()) {
        r.fail("comb", "expected a map");
        return;
    }
    r.check_keys(n, "comb.", {"gaps", "labels", "u", "h", "u_star", "profile"});
    CombSpec c;
    const bool gaps = static_cast<bool>(n["gaps"]);
    const bool slits = n["u"] || n["h"];
    if (gaps == slits) {
        r.fail("comb", "give exactly one of 'gaps' or 'u'/'h'");
        return;
    }
    if (gaps) {
        if (!n["gaps"].IsSequence()) {
            r.fail("comb.gaps", "expected a list of [lo, hi] pairs");
        } else {
            for (std::size_t i = 0; i < n["gaps"].size(); ++i) {
                const auto key = "comb.gaps[" + std::to_string(i) + "]";
                const auto v = r.numbers(n["gaps"][i], key);
                if (v.size() != 2) {
                    r.fail(key, "expected [lo, hi]");
                    continue;
                }
                c.gaps.push_back({v[0], v[1]});
            }
            if (c.gaps.empty()) r.fail("comb.gaps", "must not be empty");
        }
        if (n["labels"]) {
            for (double x : r.numbers(n["labels"], "comb.labels")) c.labels.push_back(static_cast<int>(x));
            if (c.labels.size() != c.gaps.size()) r.fail("comb.labels", "length differs from comb.gaps");
        }
        try {
            GapConfiguration(c.gaps, c.labels);
        } catch (const InputError& e) {
            r.fail("comb.gaps", e.what());
        }
    } else {
        if (!n["u"] || !n["h"]) {
            r.fail("comb.u", "slit combs need both u and h");
        } else {
            c.u = r.numbers(n["u"], "comb.u");
            c.h = r.numbers(n["h"], "comb.h");
            try {
                Comb(c.u, c.h);
            } catch (const InputError& e) {
                r.fail("comb.h", e.what());
            }
        }
    }
    if (n["u_star"]) {
        if (auto v = r.number(n["u_star"], "comb.u_star")) {
            if (!(*v > 0.0)) r.fail("comb.u_star", "must be positive");
            c.u_star = *v;
        }
    }
    if (const auto p = n["profile"]) {
        r.check_keys(p, "comb.profile.", {"nodes", "max_iter", "tol"});
        if (p["nodes"]) {
            if (auto v = r.integer(p["nodes"], "comb.profile.nodes")) {
                if (*v != 16 && *v != 32 && *v != 64 && *v != 128) r.fail("comb.profile.nodes", "must be 16, 32, 64 or 128");
                c.profile.nodes = *v;
            }
        }
        if (p["max_iter"]) {
            if (auto v = r.integer(p["max_iter"], "comb.profile.max_iter")) {
                if (*v < 1) r.fail("comb.profile.max_iter", "must be >= 1");
                c.profile.max_iter = *v;
            }
        }
        if (p["tol"]) {
            if (auto v = r.number(p["tol"], "comb.profile.tol")) {
                if (!(*v > 0.0)) r.fail("comb.profile.tol", "must be positive");
                c.profile.tol = *v;
            }
        }
    }
    cfg.comb = c;
}

}  // namespace

Potential PotentialSpec::build(double scale) const {
    auto scaled = [scale](FourierSeries s) {
        for (auto& x : s.cos_coeffs) x *= scale;
        for (auto& x : s.sin_coeffs) x *= scale;
        return s;
    };
    auto scaled_vec = [scale](std::vector<double> v) {
        for (auto& x : v) x *= scale;
        return v;
    };
    if (kind == "zero") return Potential::zero();
    if (kind == "constant_offdiagonal") return Potential::constant_offdiagonal(scale * a);
    if (kind == "fourier") return Potential::fourier(scaled(v1), scaled(v2));
    if (kind == "sampled") return Potential::sampled(scaled_vec(samples_v1), scaled_vec(samples_v2));
    throw InputError("potential.kind: unknown kind '" + kind + "'");
}

const std::vector<std::string>& known_modes() {
    static const std::vector<std::string> modes = {"analyze-potential", "analyze-comb", "audit", "sweep",
                                                   "validate"};
    return modes;
}

std::vector<double> parse_p_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (item == "inf" || item == "infinity") {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != item.size()) throw InputError("p-list: cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InputError("p-list: empty");
    return out;
}

std::vector<WeightKind> parse_weights(const std::string& text) {
    std::vector<WeightKind> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_weight(item));
    if (out.empty()) throw InputError("weights: empty");
    return out;
}

std::vector<std::string> check_config(const RunConfig& cfg) {
    std::vector<std::string> d;
    if (std::find(known_modes().begin(), known_modes().end(), cfg.mode) == known_modes().end()) {
        d.push_back("mode: unknown mode '" + cfg.mode + "'");
    }
    if (cfg.window < 1) d.push_back("window: must be >= 1 (got " + std::to_string(cfg.window) + ")");
    if (!(cfg.tol > 0.0) || !(cfg.tol < 1e-2)) d.push_back("tol: must lie in (0, 1e-2)");
    if (cfg.p_list.empty()) d.push_back("p_list: must not be empty");
    for (double p : cfg.p_list)
        if (!(p >= 1.0)) d.push_back("p_list: every p must be >= 1");
    if (cfg.weights.empty()) d.push_back("weights: must not be empty");
    if (cfg.profile_points < 2) d.push_back("output.profile_points: must be >= 2");
    if (cfg.potential.has_value() == cfg.comb.has_value()) {
        d.push_back("potential: give exactly one of 'potential' or 'comb'");
    }
    if (cfg.mode == "analyze-potential" && !cfg.potential) d.push_back("potential: required by mode analyze-potential");
    if (cfg.mode == "analyze-comb" && !cfg.comb) d.push_back("comb: required by mode analyze-comb");
    if (cfg.mode == "sweep") {
        if (!cfg.sweep) {
            d.push_back("sweep: required by mode sweep");
        } else if (cfg.potential) {
            if (cfg.sweep->parameter == "a" && cfg.potential->kind != "constant_offdiagonal") {
                d.push_back("sweep.parameter: 'a' needs potential.kind constant_offdiagonal");
            }
        } else if (cfg.comb) {
            d.push_back("sweep: sweeps run over potentials only");
        }
    }
    return d;
}

ConfigParse parse_config(const std::string& text) {
    ConfigParse out;
    Reader r;
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        out.diagnostics.push_back(std::string("<file>: YAML syntax error: ") + e.what());
        return out;
    }
    if (!root.IsMap()) {
        out.diagnostics.push_back("<file>: top level must be a map");
        return out;
    }
    auto& cfg = out.config;
    r.check_keys(root, "", {"schema_version", "mode", "window", "tol", "p_list", "weights", "output", "potential",
                            "comb", "sweep"});
    if (!root["schema_version"]) {
        r.fail("schema_version", "missing (expected " + std::to_string(kSchemaVersion) + ")");
    } else if (auto v = r.integer(root["schema_version"], "schema_version")) {
        if (*v != kSchemaVersion) {
            r.fail("schema_version", "unsupported version " + std::to_string(*v) + " (expected " +
                                         std::to_string(kSchemaVersion) + ")");
        }
        cfg.schema_version = *v;
    }
    if (root["mode"]) cfg.mode = r.string(root["mode"], "mode").value_or(cfg.mode);
    if (root["window"]) cfg.window = r.integer(root["window"], "window").value_or(cfg.window);
    if (root["tol"]) cfg.tol = r.number(root["tol"], "tol").value_or(cfg.tol);
    if (root["p_list"]) cfg.p_list = r.numbers(root["p_list"], "p_list");
    if (root["weights"]) {
        cfg.weights.clear();
        if (!root["weights"].IsSequence()) {
            r.fail("weights", "expected a list (unit, linear)");
        } else {
            for (std::size_t i = 0; i < root["weights"].size(); ++i) {
                const auto key = "weights[" + std::to_string(i) + "]";
                if (auto s = r.string(root["weights"][i], key)) {
                    try {
                        cfg.weights.push_back(parse_weight(*s));
                    } catch (const InputError& e) {
                        r.fail(key, e.what());
                    }
                }
            }
        }
    }
    if (const auto o = root["output"]) {
        r.check_keys(o, "output.", {"dir", "profiles", "profile_points"});
        if (o["dir"]) cfg.out_dir = r.string(o["dir"], "output.dir").value_or("");
        if (o["profiles"]) cfg.write_profiles = r.boolean(o["profiles"], "output.profiles").value_or(true);
        if (o["profile_points"])
            cfg.profile_points = r.integer(o["profile_points"], "output.profile_points").value_or(cfg.profile_points);
    }
    if (root["potential"]) parse_potential(r, root["potential"], cfg);
    if (root["comb"]) parse_comb(r, root["comb"], cfg);
    if (const auto s = root["sweep"]) {
        r.check_keys(s, "sweep.", {"parameter", "values"});
        SweepSpec sw;
        if (!s["parameter"]) {
            r.fail("sweep.parameter", "missing (a or scale)");
        } else {
            sw.parameter = r.string(s["parameter"], "sweep.parameter").value_or("");
            if (sw.parameter != "a" && sw.parameter != "scale") r.fail("sweep.parameter", "must be 'a' or 'scale'");
        }
        if (!s["values"]) {
            r.fail("sweep.values", "missing");
        } else {
            sw.values = r.numbers(s["values"], "sweep.values");
            if (sw.values.empty()) r.fail("sweep.values", "must not be empty");
        }
        cfg.sweep = sw;
    }
    out.diagnostics = std::move(r.diag);
    if (out.diagnostics.empty()) out.diagnostics = check_config(cfg);
    return out;
}

ConfigParse load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigParse out;
        out.diagnostics.push_back("<file>: cannot read '" + path + "'");
        return out;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace zsspec
