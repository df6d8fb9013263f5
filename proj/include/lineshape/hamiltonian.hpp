// hamiltonian.hpp: Zeeman, exchange and dipolar spin Hamiltonians, bath coupling operator, eigensystems

#pragma once

#include <array>
#include <limits>
#include <vector>

#include "lineshape/hs_algebra.hpp"

namespace lineshape::ham {

struct PairGeometry {
    int i{1};           // 1-based spin indices, i < j
    int j{2};
    double theta{0.0};  // polar angle of r_ij relative to the static field
    double phi{0.0};    // azimuth of r_ij
};

struct SpinSystemSpec {
    int num_spins{1};
    double omega0{1.0};       // Larmor frequency
    double J{0.0};            // exchange constant
    double anisotropy_A{1.0}; // scales the zz exchange component
    double D0{0.0};           // dipolar strength 3D/(2 r^3)
    std::vector<PairGeometry> pairs;
};

struct CouplingSpec {
    // Per-spin angles; a single entry is broadcast to every spin.
    std::vector<double> lambda1{0.0};
    std::vector<double> lambda2{0.0};
};

struct EigenSystem {
    RealVector energies;  // ascending
    Matrix basis;         // columns are eigenvectors in the product basis
    Eigen::MatrixXd bohr; // bohr(k, m) = E_k - E_m

    Eigen::Index dim() const { return energies.size(); }
    Matrix to_eigenbasis(const Matrix& op) const { return basis.adjoint() * op * basis; }
    Matrix from_eigenbasis(const Matrix& op) const { return basis * op * basis.adjoint(); }
};

// Unit vector (sin t cos p, sin t sin p, cos t).
std::array<double, 3> unit_vector(double theta, double phi);

// Pair list for two spins with r_12 at (theta, phi).
std::vector<PairGeometry> two_spin_geometry(double theta, double phi = 0.0);

// Equilateral triangle of unit side. r_12 = (sin theta, 0, cos theta) and the third spin sits off
// the 1-2 edge along y, so the face is the yz-plane at theta = 0 and the xy-plane at theta = pi/2.
std::vector<PairGeometry> triangle_geometry(double theta);

// Interaction matrix h_ab of one pair for the bilinear form sum_ab S_{i,a} h_ab S_{j,b}.
Eigen::Matrix3d pair_coupling_matrix(double J, double A, double D0, const std::array<double, 3>& r_hat);

Matrix build_system_hamiltonian(const SpinSystemSpec& spec);
Matrix build_coupling_operator(const SpinSystemSpec& spec, const CouplingSpec& c);

// Hermitian eigendecomposition with ascending energies. Inside a degenerate cluster the basis is
// rebuilt from the projections of the product-basis vectors, each vector's first nonzero component
// is made real positive, and vectors are ordered by the index of that component.
EigenSystem eigendecompose(const Matrix& H, double degeneracy_tol = 1e-10);

// exp(-beta H)/Z; beta = +infinity gives the normalized ground-space projector.
Matrix thermal_state(const Matrix& H, double beta);

// Boltzmann weights of the eigen-energies, shifted by the minimum energy before exponentiation.
RealVector thermal_populations(const RealVector& energies, double beta);

struct TwoSpinAnalytic {
    std::array<double, 4> energies; // E_a, E_b, E_c, E_d
    std::array<Vector, 4> states;   // in the |++>, |+->, |-+>, |--> basis
};

// Closed-form eigensystem of omega0 (S1z + S2z) - sum_a j_a sigma_1a sigma_2a (Pauli matrices, so
// j_a is half of the effective_exchange component).
TwoSpinAnalytic two_spin_analytic_eigensystem(double jx, double jy, double jz, double omega0);

// Effective (J_x, J_y, J_z) for a pair whose interaction matrix is diagonal, in the form
// -2 sum_a J_a S_1a S_2a.
std::array<double, 3> effective_exchange(double J, double A, double D0, double theta, double phi = 0.0);

} // namespace lineshape::ham
