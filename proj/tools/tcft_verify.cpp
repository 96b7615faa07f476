// Batch verification front end: configures the model and regions, runs the
// selected suites in dependency order, writes report.json and summary.txt.
// Exit codes: 0 all pass, 1 a check failed or was vacuous, 2 config/resource.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "tcft/report.hpp"

using namespace tcft;

#ifndef TCFT_DATA_DIR
#define TCFT_DATA_DIR "data"
#endif

int main(int argc, char** argv) {
    CLI::App app{"verification suites for the homotopy Leibniz structure of a 2d TCFT"};
    std::string config_path, suite_sel, out_dir, data_dir = TCFT_DATA_DIR;
    std::uint64_t seed = 0;
    bool list = false, repro_check = false;
    int verbosity = -1;
    app.add_option("-c,--config", config_path, "config file (key = value lines)");
    app.add_option("-s,--suite", suite_sel, "comma-separated suite list (or 'all')");
    app.add_option("--seed", seed, "override the config seed");
    app.add_option("-o,--out", out_dir, "output directory for report.json / summary.txt");
    app.add_option("--data", data_dir, "directory holding the structure-constant tables");
    app.add_option("-v,--verbosity", verbosity, "0 quiet, 1 progress");
    app.add_flag("--list", list, "list available suites and exit");
    app.add_flag("--repro-check", repro_check,
                 "run the selected suites twice and require byte-identical reports");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    if (list) {
        for (const auto& id : suite::suite_order()) std::cout << id << "\n";
        return 0;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (!suite_sel.empty()) cfg.suites = suite_sel;
        if (seed != 0) cfg.seed = seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (verbosity >= 0) cfg.verbosity = verbosity;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::ostream* log = cfg.verbosity > 0 ? &std::cerr : nullptr;
        auto results = suite::run_suites(cfg, data_dir, log);
        auto j = report_json(cfg, results);
        std::string bytes = j.dump(2) + "\n";
        if (repro_check) {
            auto again = suite::run_suites(cfg, data_dir, nullptr);
            std::string bytes2 = report_json(cfg, again).dump(2) + "\n";
            if (bytes != bytes2) {
                std::cerr << "reproducibility check FAILED: reports differ\n";
                return 1;
            }
            std::cerr << "reproducibility check passed: identical report bytes\n";
        }
        std::filesystem::create_directories(cfg.out_dir);
        {
            std::ofstream f(cfg.out_dir + "/report.json", std::ios::binary);
            f << bytes;
        }
        std::string summary = report_summary(results);
        {
            std::ofstream f(cfg.out_dir + "/summary.txt", std::ios::binary);
            f << summary;
        }
        std::cout << summary;
        for (const auto& r : results)
            if (r.failed()) return 1;
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
