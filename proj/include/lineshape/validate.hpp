// validate.hpp: Oracle comparisons and structural invariants, collected into a machine-readable report

#pragma once

#include <string>
#include <vector>

#include "lineshape/bath.hpp"
#include "lineshape/kernel.hpp"
#include "lineshape/susceptibility.hpp"

namespace lineshape::validation {

struct CheckResult {
    std::string name;
    bool passed{false};
    double measured{0.0};
    double tolerance{0.0};
    std::string comparison{"<="}; // how measured relates to tolerance when the check passes
    double seconds{0.0};
    std::string detail;
};

struct Report {
    std::string level;
    std::string version;
    std::vector<CheckResult> checks;

    bool passed() const;
    std::string to_json() const;
    static Report from_json(const std::string& text);
};

enum class Level { Quick, Full };

Report run_validate(Level level);

// Max-abs difference over max-abs reference.
double relative_error(const Matrix& value, const Matrix& reference);

// General eigen-element kernel and source against the single-spin closed forms, compared in the
// (|+>, |->) basis with A = S-. Returns {kernel error, source error}.
std::pair<double, double> single_spin_oracle(double omega, double Lambda, const bath::BathSpec& b,
                                             const kernel::KernelToggles& toggles = {});

// Largest |J(-w) - exp(-beta w) J(w)| / J(-w) on `points` frequencies in (0, w_max].
double kms_error(const bath::BathSpec& b, int points = 100, double w_max = 0.0);

// Max relative difference between the closed-form and quadrature correlation functions on
// `points` times in [0, t_max].
double phi_route_error(const bath::BathSpec& b, int points, double t_max);

// Max relative difference of F+/-, Fs+/- between the frequency-domain and damped time-integral routes.
double half_fourier_route_error(const bath::BathSpec& b, const std::vector<double>& omegas, double omega0);

// Largest relative difference between chi from the frequency-domain solve and chi from a propagated
// trajectory (horizon = damping_times slowest Born-Markov decay times, Laplace damping epsilon).
double dual_route_error(const chi::Solver& solver, const std::vector<double>& omegas, double damping_times = 50.0,
                        double dt = 0.02, double epsilon = 0.01);

// Observed convergence order of the propagator from runs at dt, dt/2, dt/4 up to t_max.
double step_halving_order(const chi::Solver& solver, double dt, double t_max);

} // namespace lineshape::validation
