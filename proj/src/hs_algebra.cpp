// hs_algebra.cpp: Dense operators, spin-1/2 embeddings and Hilbert-Schmidt vectorization

#include "lineshape/hs_algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lineshape::hs {

namespace {

void require_same_square(const Matrix& A, const Matrix& B, const char* what) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
        throw std::invalid_argument(std::string(what) + ": operators must be square with equal dimension");
    }
}

} // namespace

Vector vectorize(const Matrix& op) {
    const Eigen::Index n = op.rows();
    const Eigen::Index m = op.cols();
    Vector v(n * m);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < m; ++c) v(r * m + c) = op(r, c);
    return v;
}

Matrix devectorize(const Vector& v) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (n * n != v.size()) throw std::invalid_argument("devectorize: length is not a perfect square");
    Matrix op(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) op(r, c) = v(r * n + c);
    return op;
}

cplx hs_inner(const Matrix& V, const Matrix& O) {
    if (V.rows() != O.rows() || V.cols() != O.cols())
        throw std::invalid_argument("hs_inner: dimension mismatch");
    return (V.conjugate().cwiseProduct(O)).sum();
}

Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

Matrix sandwich_superop(const Matrix& O1, const Matrix& O2) {
    require_same_square(O1, O2, "sandwich_superop");
    return kron(O1, O2.conjugate());
}

Matrix commutator_superop(const Matrix& H) {
    const Matrix id = Matrix::Identity(H.rows(), H.cols());
    return sandwich_superop(H, id) - sandwich_superop(id, H.adjoint());
}

Matrix change_basis_superop(const Matrix& S, const Matrix& U) {
    // vec(U^dagger rho U) = kron(U^dagger, U^T) vec(rho)
    const Matrix fwd = sandwich_superop(U.adjoint(), U.adjoint());
    const Matrix back = sandwich_superop(U, U);
    return fwd * S * back;
}

Matrix pauli_half_x() {
    Matrix s(2, 2);
    s << 0.0, 0.5, 0.5, 0.0;
    return s;
}

Matrix pauli_half_y() {
    Matrix s(2, 2);
    s << 0.0, cplx(0.0, -0.5), cplx(0.0, 0.5), 0.0;
    return s;
}

Matrix pauli_half_z() {
    Matrix s(2, 2);
    s << 0.5, 0.0, 0.0, -0.5;
    return s;
}

SpinOps spin_ops(int num_spins, int site) {
    if (num_spins < 1) throw std::invalid_argument("spin_ops: num_spins must be >= 1");
    if (site < 1 || site > num_spins)
        throw std::invalid_argument("spin_ops: site " + std::to_string(site) + " out of range 1.." +
                                    std::to_string(num_spins));
    auto embed = [&](const Matrix& local) {
        Matrix out = Matrix::Identity(1, 1);
        for (int k = 1; k <= num_spins; ++k)
            out = kron(out, k == site ? local : Matrix(Matrix::Identity(2, 2)));
        return out;
    };
    SpinOps ops;
    ops.x = embed(pauli_half_x());
    ops.y = embed(pauli_half_y());
    ops.z = embed(pauli_half_z());
    ops.plus = ops.x + I_unit * ops.y;
    ops.minus = ops.x - I_unit * ops.y;
    return ops;
}

SpinOps total_spin_ops(int num_spins) {
    SpinOps total = spin_ops(num_spins, 1);
    for (int k = 2; k <= num_spins; ++k) {
        const SpinOps s = spin_ops(num_spins, k);
        total.x += s.x;
        total.y += s.y;
        total.z += s.z;
        total.plus += s.plus;
        total.minus += s.minus;
    }
    return total;
}

double max_abs(const Matrix& M) {
    return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& M, double rel_tol) {
    if (M.rows() != M.cols()) return false;
    const double scale = max_abs(M);
    return max_abs(M - M.adjoint()) <= rel_tol * (scale > 0.0 ? scale : 1.0);
}

} // namespace lineshape::hs
