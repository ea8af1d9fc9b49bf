#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zsspec/app.hpp"
#include "zsspec/config.hpp"
#include "zsspec/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral analysis and estimate audits for periodic Zakharov-Shabat operators and comb maps"};
    std::string config_path, out_dir, mode, p_list, weights;
    int window = 0;
    double tol = 0.0;
    app.add_option("--config", config_path, "YAML run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (default: $ZSSPEC_OUT_DIR, then ./zsspec_out)");
    app.add_option("--mode", mode, "analyze-potential | analyze-comb | audit | sweep | validate");
    app.add_option("--n-window", window, "gap index window N (gaps -N..N)");
    app.add_option("--tol", tol, "numerical tolerance");
    app.add_option("--p-list", p_list, "comma-separated exponents, e.g. 1,1.5,2,3,inf");
    app.add_option("--weights", weights, "comma-separated weights: unit, linear");
    CLI11_PARSE(app, argc, argv);

    auto parsed = zsspec::load_config_file(config_path);
    auto& cfg = parsed.config;
    auto& diag = parsed.diagnostics;
    const std::string file_mode = cfg.mode;
    try {
        if (!mode.empty()) cfg.mode = mode;
        if (app.count("--n-window")) cfg.window = window;
        if (app.count("--tol")) cfg.tol = tol;
        if (!p_list.empty()) cfg.p_list = zsspec::parse_p_list(p_list);
        if (!weights.empty()) cfg.weights = zsspec::parse_weights(weights);
    } catch (const zsspec::InputError& e) {
        diag.push_back(std::string("command line: ") + e.what());
    }
    const bool validate_only = cfg.mode == "validate";
    if (diag.empty()) {
        // Validation checks the file against the mode it would run in.
        if (validate_only) {
            cfg.mode = file_mode != "validate" ? file_mode : (cfg.comb ? "analyze-comb" : "analyze-potential");
        }
        diag = zsspec::check_config(cfg);
    }
    if (!diag.empty()) {
        for (const auto& d : diag) std::cerr << config_path << ": " << d << '\n';
        return zsspec::exit_error;
    }
    if (validate_only) {
        std::cout << config_path << ": valid\n";
        return zsspec::exit_ok;
    }

    if (out_dir.empty()) out_dir = cfg.out_dir;
    if (out_dir.empty()) {
        const char* env = std::getenv("ZSSPEC_OUT_DIR");
        out_dir = env && *env ? env : "zsspec_out";
    }
    const auto outcome = zsspec::run(cfg, out_dir, std::cerr);
    for (const auto& p : outcome.artifacts) std::cout << p << '\n';
    return outcome.exit_code;
}
