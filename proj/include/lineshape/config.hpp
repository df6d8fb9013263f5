// config.hpp: Run configuration: plain-text [section] key = value files, validation, canonical echo

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lineshape/bath.hpp"
#include "lineshape/hamiltonian.hpp"
#include "lineshape/kernel.hpp"

namespace lineshape::cli {

// Bad input. line > 0 points at the offending line of the file.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& origin, int line, const std::string& msg);
    int line;
};

enum class SweepKind { Omega, Field };
enum class Geometry { None, Pair, Triangle };

// One curve per entry of `values`; with key "none" a single curve is produced.
struct SeriesSpec {
    std::string key{"none"}; // none | lambda1 | lambda2 | theta12 | kT | s
    std::vector<std::string> texts;
    std::vector<double> values;
};

struct RunConfig {
    // [system]
    int spins{1};
    double omega0{1.0};
    double J{0.0};
    double A{1.0};
    double D0{0.0};
    Geometry geometry{Geometry::None};
    double theta12{0.0};
    double phi12{0.0};
    // [bath]
    bath::BathSpec bath;
    // [coupling]
    ham::CouplingSpec coupling;
    // [sweep]
    SweepKind kind{SweepKind::Omega};
    double start{0.5};
    double stop{1.5};
    double step{0.002};
    double drive{2.0}; // fixed drive frequency of a field sweep
    std::string response{"+-"};
    kernel::KernelToggles toggles;
    SeriesSpec series;
    int threads{0}; // 0: all available cores
    // [output]
    std::string prefix{"lineshape"};
    bool plot{true};

    std::string origin; // file the configuration came from

    // Canonical [section] key = value text; parsing it yields the same configuration. The worker
// count does not change any result and is left out.
    std::string echo() const;
    // FNV-1a of echo().
    std::uint64_t hash() const;

    ham::SpinSystemSpec system() const;
    std::vector<double> grid() const;
    // Copy with series entry k applied.
    RunConfig with_series(std::size_t k) const;
    std::size_t curve_count() const { return series.key == "none" ? 1 : series.values.size(); }
};

// Evaluates +, -, *, /, parentheses, decimal numbers and the constants pi and magic (= acos(1/sqrt 3)).
double evaluate_expression(const std::string& text);

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<input>");

// Throws ConfigError naming the key on semantic violations.
void validate(const RunConfig& cfg);

std::string to_string(SweepKind k);
std::string to_string(Geometry g);
std::string to_string(kernel::Mode m);

} // namespace lineshape::cli
