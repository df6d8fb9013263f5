// susceptibility.hpp: Linear-response solve for chi(omega), frequency and field sweeps, peak analysis

#pragma once

#include <string>
#include <vector>

#include "lineshape/bath.hpp"
#include "lineshape/hamiltonian.hpp"
#include "lineshape/kernel.hpp"

namespace lineshape::chi {

struct ResponsePair {
    Matrix A; // perturbation operator
    Matrix B; // observed operator
    std::string label;
};

// "+-": (B, A) = (S+_total, S-_total); "xx": (Sx_total, Sx_total); also "yy", "zz".
ResponsePair make_response_pair(const std::string& label, int num_spins);

struct SolveOptions {
    // Explicit regulator added to the drive frequency (omega -> omega - i epsilon). Only used
    // when the bath is decoupled (s = 0); a value <= 0 then selects 1e-6 * omega0.
    double epsilon{0.0};
};

struct SolveDiagnostics {
    double residual{0.0};     // ||L x - rhs|| / ||rhs||
    double rhs_norm{0.0};
    double rcond_estimate{0.0};
};

// vec([A, rho_A]) for a Hermitian H_S at inverse temperature beta (product basis).
Vector initial_vector(const Matrix& A_nu, const Matrix& rho_A);

// Precomputed eigensystem, coupling, response operators and equilibrium state for one system.
class Solver {
public:
    Solver(const ham::SpinSystemSpec& system, const ham::CouplingSpec& coupling, const bath::BathSpec& bath,
           const ResponsePair& pair, const kernel::KernelToggles& toggles, const SolveOptions& opts = {});
    Solver(const Matrix& H, const Matrix& X, const bath::BathSpec& bath, const ResponsePair& pair,
           const kernel::KernelToggles& toggles, const SolveOptions& opts = {});

    cplx chi_at(double omega, SolveDiagnostics* diag = nullptr) const;

    // Solution vector x (eigenbasis) of the frequency-domain linear system.
    Vector solve(double omega, SolveDiagnostics* diag = nullptr) const;

    const kernel::KernelContext& context() const { return ctx_; }
    const Matrix& A_eig() const { return A_eig_; }
    const Matrix& B_eig() const { return B_eig_; }
    const kernel::KernelToggles& toggles() const { return toggles_; }

private:
    void init(const Matrix& H, const Matrix& X, const bath::BathSpec& bath, const ResponsePair& pair, double omega0);

    kernel::KernelContext ctx_;
    Matrix A_eig_, B_eig_;
    kernel::KernelToggles toggles_;
    Matrix markov_;
    double epsilon_{0.0};
};

// Convenience wrapper for a single point.
cplx chi_at(double omega, const ham::SpinSystemSpec& system, const ham::CouplingSpec& coupling,
            const bath::BathSpec& bath, const ResponsePair& pair, const kernel::KernelToggles& toggles);

struct SusceptibilitySweep {
    std::vector<double> grid;
    std::vector<cplx> chi;           // chi = chi' - i chi''
    kernel::KernelToggles toggles;
    std::string metadata;

    std::vector<double> chi_pp() const; // chi'' = -Im chi
};

// Evaluates every grid point, optionally on `threads` workers; results are gathered by index.
// threads <= 0 uses the hardware concurrency.
SusceptibilitySweep chi_sweep(const std::vector<double>& grid, const Solver& solver, int threads = 1);
SusceptibilitySweep chi_sweep(const std::vector<double>& grid, const ham::SpinSystemSpec& system,
                              const ham::CouplingSpec& coupling, const bath::BathSpec& bath,
                              const ResponsePair& pair, const kernel::KernelToggles& toggles, int threads = 1);

// Fixed drive frequency, Zeeman frequency swept over H0_grid (all in units of |J|).
SusceptibilitySweep field_sweep(double omega_fixed, const std::vector<double>& H0_grid,
                                const ham::SpinSystemSpec& system, const ham::CouplingSpec& coupling,
                                const bath::BathSpec& bath, const ResponsePair& pair,
                                const kernel::KernelToggles& toggles, int threads = 1);

struct Peak {
    double position{0.0};
    double height{0.0};
    double fwhm{0.0};       // NaN when a half-maximum crossing lies outside the grid
    double prominence{0.0};
    std::size_t index{0};
};

// Local maxima whose prominence is at least `min_prominence` times the global maximum.
// Positions use 3-point parabolic refinement; widths use linear interpolation at half height.
std::vector<Peak> peak_analysis(const std::vector<double>& grid, const std::vector<double>& values,
                                double min_prominence = 0.02);
std::vector<Peak> peak_analysis(const SusceptibilitySweep& sweep, double min_prominence = 0.02);

std::vector<double> linspace_step(double start, double stop, double step);

} // namespace lineshape::chi
