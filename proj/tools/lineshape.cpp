// lineshape.cpp: Command-line front end: spectrum, field-sweep, compare and validate

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lineshape/config.hpp"
#include "lineshape/runner.hpp"
#include "lineshape/validate.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kNumericalFailure = 2, kValidationFailure = 3 };

using namespace lineshape;

int run_tables(const std::string& command, const std::string& config_path, const std::string& out, int threads,
               bool threads_given) {
    cli::RunConfig cfg = cli::parse_config(config_path);
    if (!out.empty()) cfg.prefix = out;
    if (threads_given) cfg.threads = threads;
    cli::validate(cfg);

    std::vector<cli::ResultTable> tables;
    try {
        if (command == "spectrum") tables = cli::run_spectrum(cfg);
        else if (command == "field-sweep") tables = cli::run_field_sweep(cfg);
        else tables = cli::run_compare(cfg);
    } catch (const cli::ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        std::cerr << "lineshape " << command << ": numerical failure: " << e.what() << "\n";
        std::cerr << "configuration:\n" << cfg.echo();
        return kNumericalFailure;
    }
    for (const auto& path : cli::write_tables(tables, cfg.prefix)) std::cout << path << "\n";
    if (cfg.plot) std::cout << cli::emit_plots(tables, cfg.prefix) << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin resonance line shapes from a time-convolution master equation"};
    app.set_version_flag("--version", std::string(LINESHAPE_VERSION));
    app.require_subcommand(1);

    std::string config_path, out, level = "quick", report_path;
    int threads = 0;

    auto add_table_command = [&](const std::string& name, const std::string& help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output path prefix (overrides [output] prefix)");
        sub->add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
        return sub;
    };
    auto* spectrum = add_table_command("spectrum", "chi(omega) over the [sweep] grid");
    auto* field = add_table_command("field-sweep", "chi at fixed drive frequency over a static-field grid");
    auto* compare = add_table_command("compare", "the four initial-correlation / frequency-shift combinations");
    auto* validate = app.add_subcommand("validate", "oracle and invariant checks");
    validate->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    validate->add_option("--config", config_path, "accepted for symmetry; unused");
    validate->add_option("--out", report_path, "write the JSON report here instead of stdout");
    validate->add_option("--threads", threads, "unused");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        for (auto* sub : {spectrum, field, compare}) {
            if (sub->parsed())
                return run_tables(sub->get_name(), config_path, out, threads, sub->count("--threads") > 0);
        }
        if (validate->parsed()) {
            const auto report = validation::run_validate(level == "full" ? validation::Level::Full
                                                                         : validation::Level::Quick);
            if (report_path.empty()) {
                std::cout << report.to_json() << "\n";
            } else {
                std::ofstream f(report_path);
                if (!f) {
                    std::cerr << "cannot write " << report_path << "\n";
                    return kConfigError;
                }
                f << report.to_json() << "\n";
            }
            for (const auto& c : report.checks)
                std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured " << c.measured << " "
                          << c.comparison << " " << c.tolerance << "\n";
            return report.passed() ? kOk : kValidationFailure;
        }
    } catch (const cli::ConfigError& e) {
        std::cerr << "lineshape: configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "lineshape: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return kConfigError;
}
