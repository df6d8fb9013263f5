// timedomain.hpp: Time-convolution propagation and numerical Laplace transforms (cross-check of the frequency route)

#pragma once

#include <vector>

#include "lineshape/bath.hpp"
#include "lineshape/hamiltonian.hpp"
#include "lineshape/kernel.hpp"

namespace lineshape::td {

// Samples rho_A(t_k), t_k = k dt, as H-S vectors in the eigenbasis of H_S.
struct Trajectory {
    double dt{0.0};
    double horizon{0.0};
    std::vector<Vector> samples;
};

// Memory kernel M(t) in the eigenbasis, t >= 0:
//   M(t) rho = -Phi(t) X X(-t) U rho U^+ + Phi*(t) X U rho U^+ X(-t)
//              + Phi(t) X(-t) U rho U^+ X - Phi*(t) U rho U^+ X(-t) X
// with U = exp(-i H_S t) and X(-t) = U X U^+.
Matrix kernel_time(double t, const kernel::KernelContext& ctx);

// Initial-correlation source Psi(t) for perturbation A (eigenbasis); the lambda integral over
// [0, beta] uses Gauss-Legendre with `lambda_nodes` points and Phi at complex argument -t - i lambda.
Vector inhomogeneous_time(double t, const kernel::KernelContext& ctx, const Matrix& A_eig, int lambda_nodes = 16);

struct PropagateOptions {
    double dt{0.02};
    double t_max{100.0};
    bool include_initial_correlation{true};
    int lambda_nodes{16};
    double growth_limit{1e6}; // ||x(t)|| above this multiple of the source scale is reported as unstable
};

// Second-order Volterra scheme: exponential Heun step for the free rotation, trapezoidal memory sum
// over the full history.
Trajectory propagate(const kernel::KernelContext& ctx, const Matrix& A_eig, const PropagateOptions& opts);

// f[omega] = int_0^inf exp(-i omega t) f(t) dt from the samples: trapezoid with the Euler-Maclaurin
// endpoint term and an exponential tail estimate. epsilon > 0 damps the integrand and extrapolates
// from (epsilon, epsilon/2, epsilon/4) back to zero damping; epsilon = 0 requires the trajectory to have
// decayed to 1e-6 of its peak norm.
Vector laplace_of(const Trajectory& traj, double omega, double epsilon = 0.0);

// i Tr(B x[omega]) for a trajectory started from vec([A, rho]).
cplx chi_from_trajectory(const Trajectory& traj, const Matrix& B_eig, double omega, double epsilon = 0.0);

// Laplace transforms of kernel_time and inhomogeneous_time by chunked Gauss-Legendre quadrature of
// the damped integrand, extrapolated in epsilon.
Matrix kernel_laplace(double omega, const kernel::KernelContext& ctx, double epsilon = 1e-3);
Vector inhomogeneous_laplace(double omega, const kernel::KernelContext& ctx, const Matrix& A_eig,
                             double epsilon = 1e-3);

// Inverse of the slowest nonzero Born-Markov decay rate, used to size propagation horizons.
double markov_decay_time(const kernel::KernelContext& ctx);

} // namespace lineshape::td
