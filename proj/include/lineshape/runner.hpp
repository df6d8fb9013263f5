// runner.hpp: Run orchestration for spectrum, field-sweep and toggle-comparison modes; CSV and gnuplot output

#pragma once

#include <string>
#include <vector>

#include "lineshape/config.hpp"
#include "lineshape/susceptibility.hpp"

namespace lineshape::cli {

struct ResultTable {
    std::string file;        // relative file name, e.g. "fig2_ic-on_fs-off.csv"
    std::string curve;       // legend text
    std::string x_name;      // "omega" or "H0"
    std::string command;     // spectrum | field-sweep | compare
    std::string config_echo; // canonical configuration of this curve
    std::uint64_t config_hash{0};
    std::vector<double> x;
    std::vector<cplx> chi;
};

std::vector<ResultTable> run_spectrum(const RunConfig& cfg);
std::vector<ResultTable> run_field_sweep(const RunConfig& cfg);
// The four {initial correlation, frequency shift} x {on, off} combinations for every curve of the series.
std::vector<ResultTable> run_compare(const RunConfig& cfg);

// Headered CSV text: '#' comment lines with version, hash and configuration, then
// x, re_chi, im_chi, chi_pp (chi_pp = -im_chi is the absorptive part).
std::string format_table(const ResultTable& t);

// Writes every table to <directory of prefix>/<file>; returns the written paths.
std::vector<std::string> write_tables(const std::vector<ResultTable>& tables, const std::string& prefix);

// gnuplot script overlaying chi'' of all tables; references the CSV files by relative name only.
std::string plot_script(const std::vector<ResultTable>& tables, const std::string& title);
// Writes plot_script next to the tables as <prefix>.gp and returns its path.
std::string emit_plots(const std::vector<ResultTable>& tables, const std::string& prefix);

} // namespace lineshape::cli
