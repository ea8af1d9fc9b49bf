#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zsspec/audit.hpp"
#include "zsspec/comb.hpp"
#include "zsspec/potential.hpp"

namespace zsspec {

inline constexpr int kSchemaVersion = 1;

struct PotentialSpec {
    std::string kind;  ///< zero | constant_offdiagonal | fourier | sampled
    double a = 0.0;
    FourierSeries v1, v2;
    std::vector<double> samples_v1, samples_v2;

    /// `scale` multiplies the potential (sweeps over amplitude).
    Potential build(double scale = 1.0) const;
};

struct CombSpec {
    std::vector<Interval> gaps;
    std::vector<int> labels;
    std::vector<double> u, h;
    std::optional<double> u_star;
    ProfileOptions profile;

    bool has_gaps() const { return !gaps.empty(); }
};

struct SweepSpec {
    std::string parameter;  ///< "a" (constant_offdiagonal) or "scale"
    std::vector<double> values;
};

struct RunConfig {
    int schema_version = kSchemaVersion;
    std::string mode = "analyze-potential";
    int window = 3;
    double tol = 1e-10;
    std::vector<double> p_list = AuditOptions{}.p_list;
    std::vector<WeightKind> weights = AuditOptions{}.weights;
    std::string out_dir;
    bool write_profiles = true;
    int profile_points = 65;
    std::optional<PotentialSpec> potential;
    std::optional<CombSpec> comb;
    std::optional<SweepSpec> sweep;
};

struct ConfigParse {
    RunConfig config;
    std::vector<std::string> diagnostics;  ///< "key: message"; empty when valid
};

/// Parses YAML text and checks the schema without computing anything.
ConfigParse parse_config(const std::string& text);
ConfigParse load_config_file(const std::string& path);

/// Range checks that also apply after command-line overrides.
std::vector<std::string> check_config(const RunConfig& cfg);

const std::vector<std::string>& known_modes();
std::vector<double> parse_p_list(const std::string& text);
std::vector<WeightKind> parse_weights(const std::string& text);

}  // namespace zsspec
