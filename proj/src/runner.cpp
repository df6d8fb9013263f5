// runner.cpp: Run orchestration for spectrum, field-sweep and toggle-comparison modes; CSV and gnuplot output

#include "lineshape/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lineshape::cli {

namespace {

namespace fs = std::filesystem;

std::string base_name(const std::string& prefix) { return fs::path(prefix).filename().string(); }

std::string curve_suffix(const RunConfig& cfg, std::size_t k) {
    if (cfg.series.key == "none") return "";
    return "_" + cfg.series.key + "-" + std::to_string(k);
}

std::string curve_label(const RunConfig& cfg, std::size_t k) {
    if (cfg.series.key == "none") return base_name(cfg.prefix);
    const std::string text = k < cfg.series.texts.size() ? cfg.series.texts[k] : std::to_string(cfg.series.values[k]);
    return cfg.series.key + " = " + text;
}

ResultTable make_table(const RunConfig& curve_cfg, const chi::SusceptibilitySweep& sweep, const std::string& file,
                       const std::string& label, const std::string& command) {
    ResultTable t;
    t.file = file;
    t.curve = label;
    t.x_name = curve_cfg.kind == SweepKind::Field ? "H0" : "omega";
    t.command = command;
    t.config_echo = curve_cfg.echo();
    t.config_hash = curve_cfg.hash();
    t.x = sweep.grid;
    t.chi = sweep.chi;
    return t;
}

chi::SusceptibilitySweep compute(const RunConfig& c) {
    const auto pair = chi::make_response_pair(c.response, c.spins);
    if (c.kind == SweepKind::Field)
        return chi::field_sweep(c.drive, c.grid(), c.system(), c.coupling, c.bath, pair, c.toggles, c.threads);
    return chi::chi_sweep(c.grid(), c.system(), c.coupling, c.bath, pair, c.toggles, c.threads);
}

std::vector<ResultTable> run_family(const RunConfig& cfg, SweepKind required, const std::string& command) {
    if (cfg.kind != required)
        throw ConfigError(cfg.origin, 0, "[sweep] kind: '" + command + "' needs kind = " + to_string(required));
    std::vector<ResultTable> out;
    for (std::size_t k = 0; k < cfg.curve_count(); ++k) {
        const RunConfig c = cfg.with_series(k);
        out.push_back(make_table(c, compute(c), base_name(cfg.prefix) + curve_suffix(cfg, k) + ".csv",
                                 curve_label(cfg, k), command));
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::vector<ResultTable> run_spectrum(const RunConfig& cfg) { return run_family(cfg, SweepKind::Omega, "spectrum"); }

std::vector<ResultTable> run_field_sweep(const RunConfig& cfg) {
    return run_family(cfg, SweepKind::Field, "field-sweep");
}

std::vector<ResultTable> run_compare(const RunConfig& cfg) {
    if (cfg.toggles.mode != kernel::Mode::Full)
        throw ConfigError(cfg.origin, 0, "[sweep] mode: compare runs need mode = full");
    std::vector<ResultTable> out;
    for (std::size_t k = 0; k < cfg.curve_count(); ++k) {
        for (int combo = 0; combo < 4; ++combo) {
            RunConfig c = cfg.with_series(k);
            c.toggles.include_initial_correlation = (combo & 1) == 0;
            c.toggles.include_frequency_shift = (combo & 2) == 0;
            const std::string ic = c.toggles.include_initial_correlation ? "on" : "off";
            const std::string fsh = c.toggles.include_frequency_shift ? "on" : "off";
            std::string label = "i.c. " + ic + ", f.s. " + fsh;
            if (cfg.series.key != "none") label = curve_label(cfg, k) + ", " + label;
            const std::string file = base_name(cfg.prefix) + curve_suffix(cfg, k) + "_ic-" + ic + "_fs-" + fsh + ".csv";
            out.push_back(make_table(c, compute(c), file, label, "compare"));
        }
    }
    return out;
}

std::string format_table(const ResultTable& t) {
    std::ostringstream o;
    o << "# lineshape " << LINESHAPE_VERSION << "\n";
    o << "# command: " << t.command << "\n";
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(t.config_hash));
    o << "# config-hash: " << hash << "\n";
    o << "# curve: " << t.curve << "\n";
    o << "# chi = chi' - i chi''; chi_pp = -im_chi\n";
    std::istringstream echo(t.config_echo);
    std::string line;
    while (std::getline(echo, line)) o << "# " << line << "\n";
    o << t.x_name << ",re_chi,im_chi,chi_pp\n";
    for (std::size_t i = 0; i < t.x.size(); ++i)
        o << fmt(t.x[i]) << ',' << fmt(t.chi[i].real()) << ',' << fmt(t.chi[i].imag()) << ',' << fmt(-t.chi[i].imag())
          << '\n';
    return o.str();
}

std::vector<std::string> write_tables(const std::vector<ResultTable>& tables, const std::string& prefix) {
    const fs::path dir = fs::path(prefix).parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    std::vector<std::string> paths;
    for (const auto& t : tables) {
        const fs::path p = dir / t.file;
        std::ofstream f(p);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        f << format_table(t);
        paths.push_back(p.string());
    }
    return paths;
}

std::string plot_script(const std::vector<ResultTable>& tables, const std::string& title) {
    if (tables.empty()) throw std::invalid_argument("plot_script: no tables");
    const bool field = tables.front().x_name == "H0";
    std::ostringstream o;
    o << "# gnuplot script written by lineshape " << LINESHAPE_VERSION << "\n";
    o << "set encoding utf8\n";
    o << "set datafile separator ','\n";
    o << "set title \"" << title << "\"\n";
    o << "set xlabel \"" << (field ? "H̃₀" : "ω̃") << "\"\n";
    o << "set ylabel \"χ″\"\n";
    o << "set key top right\n";
    o << "plot \\\n";
    for (std::size_t i = 0; i < tables.size(); ++i) {
        o << "  '" << tables[i].file << "' using 1:4 with lines title \"" << tables[i].curve << "\"";
        o << (i + 1 < tables.size() ? ", \\\n" : "\n");
    }
    return o.str();
}

std::string emit_plots(const std::vector<ResultTable>& tables, const std::string& prefix) {
    const fs::path dir = fs::path(prefix).parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    const fs::path p = dir / (base_name(prefix) + ".gp");
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << plot_script(tables, base_name(prefix));
    return p.string();
}

} // namespace lineshape::cli
