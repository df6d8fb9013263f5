// kernel.hpp: Frequency-domain memory kernel, inhomogeneous source and Born-Markov kernel in H-S space

#pragma once

#include <vector>

#include "lineshape/bath.hpp"
#include "lineshape/hamiltonian.hpp"
#include "lineshape/hs_algebra.hpp"

namespace lineshape::kernel {

enum class Mode { Full, BornMarkov };

struct KernelToggles {
    bool include_frequency_shift{true};
    bool include_initial_correlation{true};
    Mode mode{Mode::Full};

    // Born-Markov mode never carries the initial-correlation source.
    KernelToggles normalized() const {
        KernelToggles t = *this;
        if (t.mode == Mode::BornMarkov) t.include_initial_correlation = false;
        return t;
    }
};

// Everything the per-frequency assembly reads; immutable once built.
struct KernelContext {
    ham::EigenSystem eig;
    Matrix X_eig;
    bath::BathSpec bath;
    double omega_max{0.0};
    RealVector populations;
    Eigen::MatrixXd bohr; // Bohr table with near-equal values snapped to one representative
};

// Bohr frequencies closer than this are treated as one.
inline constexpr double kBohrGroupTol = 1e-9;

KernelContext make_context(const Matrix& H, const Matrix& X, const bath::BathSpec& bath);
KernelContext make_context(const ham::EigenSystem& eig, const Matrix& X_eig, const bath::BathSpec& bath);

struct KernelAtFrequency {
    double omega{0.0};
    Matrix M_S;
    Matrix M_Xi2;
    Vector Psi2;
    Vector rho0;
};

// H_S (x) 1 - 1 (x) H_S^*; the solver multiplies by i.
Matrix liouvillian_superop(const Matrix& H_S);

// Memory kernel at drive frequency omega, indexed (n m),(n' m') in the eigenbasis of ctx.
Matrix memory_kernel_general(double omega, const KernelContext& ctx, const KernelToggles& toggles = {});

// Closed-form 4x4 kernel of one spin with X = sin(L) S_x + cos(L) S_z, in the (|+>, |->) basis.
Matrix memory_kernel_single_spin(double omega, double omega0, double Lambda, const bath::BathSpec& bath,
                                 const KernelToggles& toggles = {});

// Initial-correlation source vector for perturbation A (given in the eigenbasis of ctx).
Vector inhomogeneous_general(double omega, const KernelContext& ctx, const Matrix& A_eig,
                             const KernelToggles& toggles = {});

// Closed-form single-spin source; A_nu is given in the (|+>, |->) basis and so is the result.
Vector inhomogeneous_single_spin(double omega, double omega0, double Lambda, const Matrix& A_nu,
                                 const bath::BathSpec& bath, const KernelToggles& toggles = {});

// Frequency-independent Redfield-type kernel.
Matrix born_markov_kernel(const KernelContext& ctx, const KernelToggles& toggles = {});

// Single-spin building blocks, each a HalfFourierValue combination.
struct SingleSpinPhi {
    cplx phi1, phi2;       // F+ + Fs-,  Fs+ + F-
    cplx phi3_zero;        // F[w,0] - Fs[w,0]
    cplx phi4_plus, phi4_minus, phi4_zero; // F+ + Fs+,  F- + Fs-,  F[w,0] + Fs[w,0]
    cplx F_plus, F_minus, Fs_plus, Fs_minus;
};
SingleSpinPhi single_spin_phi(double omega, double omega0, const bath::BathSpec& bath, bool include_shift);

// Single-spin source functions H(nu, W) at the six (nu, W) pairs the closed form needs.
struct SingleSpinEta {
    cplx eta1_plus, eta1_minus; // H(w +/- w0, 0)
    cplx eta2_plus, eta2_minus; // H(w +/- w0, +/- w0)
    cplx eta3_plus, eta3_minus; // H(w, +/- w0)
    cplx eta4_plus, eta4_minus; // H(w +/- w0, -/+ w0); not used by the susceptibility path
};
SingleSpinEta single_spin_eta(double omega, double omega0, const bath::BathSpec& bath, bool include_shift);

KernelAtFrequency assemble(double omega, const KernelContext& ctx, const Matrix& A_eig, const KernelToggles& toggles);

} // namespace lineshape::kernel
