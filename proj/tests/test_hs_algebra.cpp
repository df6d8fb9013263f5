#include <doctest.h>

#include <random>

#include "lineshape/hs_algebra.hpp"

using namespace lineshape;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

} // namespace

TEST_CASE("vectorize is row-major and round-trips") {
    Matrix m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    const Vector v = hs::vectorize(m);
    CHECK(v(1) == cplx(2.0));
    CHECK(v(2) == cplx(3.0));
    CHECK(hs::devectorize(v) == m);
    CHECK_THROWS_AS(hs::devectorize(Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("sandwich superoperator acts as O1 rho O2^dagger") {
    std::mt19937_64 rng(5);
    for (int n : {2, 3, 4}) {
        const Matrix a = random_matrix(rng, n), b = random_matrix(rng, n), rho = random_matrix(rng, n);
        const Vector lhs = hs::sandwich_superop(a, b) * hs::vectorize(rho);
        CHECK((lhs - hs::vectorize(a * rho * b.adjoint())).norm() < 1e-12 * lhs.norm());
    }
}

TEST_CASE("commutator superoperator of a Hermitian operator") {
    std::mt19937_64 rng(6);
    Matrix h = random_matrix(rng, 3);
    h = (h + h.adjoint()).eval();
    const Matrix rho = random_matrix(rng, 3);
    const Vector got = hs::commutator_superop(h) * hs::vectorize(rho);
    CHECK((got - hs::vectorize(h * rho - rho * h)).norm() < 1e-12);
}

TEST_CASE("change_basis_superop maps a superoperator into the rotated frame") {
    std::mt19937_64 rng(7);
    const Matrix q = random_matrix(rng, 3).householderQr().householderQ();
    const Matrix a = random_matrix(rng, 3), b = random_matrix(rng, 3), rho = random_matrix(rng, 3);
    const Matrix S = hs::sandwich_superop(a, b);
    // Frame: rho' = q^+ rho q; the rotated superoperator must send rho' to q^+ (a rho b^+) q.
    const Matrix S_rot = hs::change_basis_superop(S, q);
    const Vector got = S_rot * hs::vectorize(q.adjoint() * rho * q);
    CHECK((got - hs::vectorize(q.adjoint() * a * rho * b.adjoint() * q)).norm() < 1e-12);
}

TEST_CASE("Hilbert-Schmidt inner product") {
    Matrix a(2, 2), b(2, 2);
    a << 1.0, cplx(0, 1), 0.0, 2.0;
    b << 3.0, 1.0, cplx(0, 2), 1.0;
    // Tr(a^+ b) = conj(1)*3 + conj(0)*2i + conj(i)*1 + conj(2)*1
    CHECK(std::abs(hs::hs_inner(a, b) - cplx(5.0, -1.0)) < 1e-15);
    CHECK_THROWS_AS(hs::hs_inner(a, Matrix::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("single-site spin operators") {
    const auto s = hs::spin_ops(1, 1);
    CHECK((s.x * s.y - s.y * s.x - I_unit * s.z).norm() < 1e-15);
    CHECK(s.plus(0, 1) == cplx(1.0));
    CHECK(s.z(0, 0) == cplx(0.5)); // |+> comes first
    const auto s2 = hs::spin_ops(3, 2);
    CHECK(s2.z.rows() == 8);
    // site 2 of 3: |+ - +> has index 0b010 = 2 and S_z = -1/2 there
    CHECK(s2.z(2, 2) == cplx(-0.5));
    CHECK_THROWS_AS(hs::spin_ops(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(hs::spin_ops(2, 0), std::invalid_argument);
    const auto tot = hs::total_spin_ops(2);
    const Matrix s_sq = tot.x * tot.x + tot.y * tot.y + tot.z * tot.z;
    // S^2 of two spins has eigenvalues 2 (triplet) and 0 (singlet)
    Eigen::SelfAdjointEigenSolver<Matrix> es(s_sq);
    CHECK(std::abs(es.eigenvalues()(0)) < 1e-14);
    CHECK(std::abs(es.eigenvalues()(3) - 2.0) < 1e-14);
}

TEST_CASE("Hermiticity check") {
    CHECK(hs::is_hermitian(hs::pauli_half_y()));
    CHECK_FALSE(hs::is_hermitian(hs::spin_ops(1, 1).plus));
}
