// hs_algebra.hpp: Dense operators, spin-1/2 embeddings and Hilbert-Schmidt vectorization

#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace lineshape {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx I_unit{0.0, 1.0};

} // namespace lineshape

namespace lineshape::hs {

// Row-major stacking: element n*N + m (0-based) holds O(n, m).
Vector vectorize(const Matrix& op);

// Inverse of vectorize. Throws std::invalid_argument when v.size() is not a perfect square.
Matrix devectorize(const Vector& v);

// Tr(V^dagger O), conjugate-linear in the first argument.
cplx hs_inner(const Matrix& V, const Matrix& O);

// Superoperator of rho -> O1 rho O2^dagger acting on vectorize(rho).
// With row-major stacking this is kron(O1, conj(O2)).
Matrix sandwich_superop(const Matrix& O1, const Matrix& O2);

Matrix kron(const Matrix& A, const Matrix& B);

// Commutator superoperator rho -> H rho - rho H.
Matrix commutator_superop(const Matrix& H);

// Re-express a superoperator after the basis change rho -> U^dagger rho U.
Matrix change_basis_superop(const Matrix& S, const Matrix& U);

struct SpinOps {
    Matrix x, y, z, plus, minus;
};

// Single-site spin-1/2 matrices in the (|+>, |->) basis.
Matrix pauli_half_x();
Matrix pauli_half_y();
Matrix pauli_half_z();

// Embeds site `site` (1-based, site 1 is the leftmost tensor factor) into num_spins spins.
SpinOps spin_ops(int num_spins, int site);

// Sums over all sites.
SpinOps total_spin_ops(int num_spins);

double max_abs(const Matrix& M);
bool is_hermitian(const Matrix& M, double rel_tol = 1e-12);

} // namespace lineshape::hs
