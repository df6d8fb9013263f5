// hamiltonian.cpp: Zeeman, exchange and dipolar spin Hamiltonians, bath coupling operator, eigensystems

#include "lineshape/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lineshape::ham {

std::array<double, 3> unit_vector(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::vector<PairGeometry> two_spin_geometry(double theta, double phi) {
    return {PairGeometry{1, 2, theta, phi}};
}

namespace {

PairGeometry pair_from_vector(int i, int j, const std::array<double, 3>& r) {
    const double norm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    const double z = std::clamp(r[2] / norm, -1.0, 1.0);
    double phi = std::atan2(r[1], r[0]);
    if (phi < 0.0) phi += 2.0 * M_PI;
    return PairGeometry{i, j, std::acos(z), phi};
}

} // namespace

std::vector<PairGeometry> triangle_geometry(double theta) {
    const std::array<double, 3> r12{std::sin(theta), 0.0, std::cos(theta)};
    const double h = std::sqrt(3.0) / 2.0;
    const std::array<double, 3> r13{0.5 * r12[0], h, 0.5 * r12[2]};
    const std::array<double, 3> r23{r13[0] - r12[0], r13[1] - r12[1], r13[2] - r12[2]};
    return {pair_from_vector(1, 2, r12), pair_from_vector(1, 3, r13), pair_from_vector(2, 3, r23)};
}

Eigen::Matrix3d pair_coupling_matrix(double J, double A, double D0, const std::array<double, 3>& r) {
    Eigen::Matrix3d h;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            if (a == b) {
                const double Ja = (a == 2) ? A * J : J;
                h(a, b) = -2.0 * (Ja + D0 * (r[a] * r[a] - 1.0 / 3.0));
            } else {
                h(a, b) = -2.0 * D0 * r[a] * r[b];
            }
        }
    }
    return h;
}

Matrix build_system_hamiltonian(const SpinSystemSpec& spec) {
    if (spec.num_spins < 1 || spec.num_spins > 8)
        throw std::invalid_argument("build_system_hamiltonian: num_spins must be in 1..8");
    if (spec.D0 != 0.0 && spec.pairs.empty())
        throw std::invalid_argument("build_system_hamiltonian: D0 is nonzero but no pair geometry is given");

    const int n = spec.num_spins;
    std::vector<hs::SpinOps> ops;
    ops.reserve(n);
    for (int k = 1; k <= n; ++k) ops.push_back(hs::spin_ops(n, k));

    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix H = Matrix::Zero(dim, dim);
    for (const auto& s : ops) H += spec.omega0 * s.z;

    for (const auto& p : spec.pairs) {
        if (p.i < 1 || p.j > n || p.i >= p.j)
            throw std::invalid_argument("build_system_hamiltonian: pair (" + std::to_string(p.i) + "," +
                                        std::to_string(p.j) + ") must satisfy 1 <= i < j <= num_spins");
        const Eigen::Matrix3d h = pair_coupling_matrix(spec.J, spec.anisotropy_A, spec.D0, unit_vector(p.theta, p.phi));
        const std::array<const Matrix*, 3> Si{&ops[p.i - 1].x, &ops[p.i - 1].y, &ops[p.i - 1].z};
        const std::array<const Matrix*, 3> Sj{&ops[p.j - 1].x, &ops[p.j - 1].y, &ops[p.j - 1].z};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                if (h(a, b) != 0.0) H += h(a, b) * ((*Si[a]) * (*Sj[b]));
    }
    // Remove rounding asymmetry so downstream Hermitian checks see an exactly Hermitian matrix.
    return 0.5 * (H + H.adjoint());
}

Matrix build_coupling_operator(const SpinSystemSpec& spec, const CouplingSpec& c) {
    const int n = spec.num_spins;
    auto angle = [](const std::vector<double>& v, int k, const char* name) {
        if (v.empty()) throw std::invalid_argument(std::string("build_coupling_operator: ") + name + " is empty");
        return v.size() == 1 ? v[0] : v.at(static_cast<std::size_t>(k));
    };
    if ((c.lambda1.size() != 1 && c.lambda1.size() != static_cast<std::size_t>(n)) ||
        (c.lambda2.size() != 1 && c.lambda2.size() != static_cast<std::size_t>(n)))
        throw std::invalid_argument("build_coupling_operator: angle lists must have 1 or num_spins entries");

    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix X = Matrix::Zero(dim, dim);
    for (int k = 0; k < n; ++k) {
        const double l1 = angle(c.lambda1, k, "lambda1");
        const double l2 = angle(c.lambda2, k, "lambda2");
        const cplx a = std::polar(1.0, l2) * std::sin(l1);
        const double cz = std::cos(l1);
        const hs::SpinOps s = hs::spin_ops(n, k + 1);
        X += 0.5 * (std::conj(a) * s.plus + a * s.minus) + cz * s.z;
    }
    return X;
}

EigenSystem eigendecompose(const Matrix& H, double degeneracy_tol) {
    if (!hs::is_hermitian(H, 1e-12)) throw std::invalid_argument("eigendecompose: input is not Hermitian");
    const Eigen::Index n = H.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");

    EigenSystem es;
    es.energies = solver.eigenvalues();
    es.basis = solver.eigenvectors();

    const double scale = std::max(1.0, hs::max_abs(H));
    const double tol = degeneracy_tol * scale;

    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && es.energies(stop) - es.energies(stop - 1) <= tol) ++stop;
        const Eigen::Index size = stop - start;

        Matrix cluster = es.basis.middleCols(start, size);
        if (size > 1) {
            // Canonical basis of the cluster: Gram-Schmidt on projected product-basis vectors.
            const Matrix P = cluster * cluster.adjoint();
            Matrix canon(n, size);
            Eigen::Index found = 0;
            for (Eigen::Index e = 0; e < n && found < size; ++e) {
                Vector v = P.col(e);
                for (Eigen::Index q = 0; q < found; ++q) v -= canon.col(q).dot(v) * canon.col(q);
                const double nv = v.norm();
                if (nv > 1e-6) canon.col(found++) = v / nv;
            }
            if (found != size) throw std::runtime_error("eigendecompose: degenerate cluster rebuild failed");
            cluster = canon;
        }
        std::vector<std::pair<Eigen::Index, Vector>> cols;
        for (Eigen::Index q = 0; q < size; ++q) {
            Vector v = cluster.col(q);
            Eigen::Index lead = 0;
            while (lead < n && std::abs(v(lead)) <= 1e-10) ++lead;
            if (lead == n) throw std::runtime_error("eigendecompose: zero eigenvector");
            v *= std::conj(v(lead)) / std::abs(v(lead));
            v(lead) = std::abs(v(lead));
            cols.emplace_back(lead, std::move(v));
        }
        std::stable_sort(cols.begin(), cols.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (Eigen::Index q = 0; q < size; ++q) es.basis.col(start + q) = cols[static_cast<std::size_t>(q)].second;
        if (size > 1) {
            // Re-evaluate the cluster energies in the rebuilt basis.
            for (Eigen::Index q = 0; q < size; ++q)
                es.energies(start + q) = (es.basis.col(start + q).adjoint() * H * es.basis.col(start + q))(0, 0).real();
        }
        start = stop;
    }

    es.bohr.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index m = 0; m < n; ++m) es.bohr(k, m) = es.energies(k) - es.energies(m);
    return es;
}

RealVector thermal_populations(const RealVector& energies, double beta) {
    if (beta < 0.0) throw std::invalid_argument("thermal_populations: beta must be >= 0");
    const Eigen::Index n = energies.size();
    RealVector p(n);
    const double emin = energies.minCoeff();
    if (std::isinf(beta)) {
        const double tol = 1e-10 * std::max(1.0, energies.cwiseAbs().maxCoeff());
        for (Eigen::Index k = 0; k < n; ++k) p(k) = (energies(k) - emin <= tol) ? 1.0 : 0.0;
    } else {
        for (Eigen::Index k = 0; k < n; ++k) p(k) = std::exp(-beta * (energies(k) - emin));
    }
    return p / p.sum();
}

Matrix thermal_state(const Matrix& H, double beta) {
    const EigenSystem es = eigendecompose(H);
    const RealVector p = thermal_populations(es.energies, beta);
    Matrix rho = es.basis * p.cast<cplx>().asDiagonal() * es.basis.adjoint();
    return 0.5 * (rho + rho.adjoint());
}

TwoSpinAnalytic two_spin_analytic_eigensystem(double jx, double jy, double jz, double omega0) {
    const double delta = jx - jy;
    const double K = std::sqrt(omega0 * omega0 + delta * delta);
    TwoSpinAnalytic out;
    out.energies = {-jz + K, jz - jx - jy, -jz - K, jz + jx + jy};

    // Basis order |++>, |+->, |-+>, |-->.
    const double norm = std::sqrt(2.0 * K * (K + omega0));
    const double r2 = 1.0 / std::sqrt(2.0);
    Vector a = Vector::Zero(4), b = Vector::Zero(4), c = Vector::Zero(4), d = Vector::Zero(4);
    a(0) = -(K + omega0) / norm;
    a(3) = delta / norm;
    b(1) = r2;
    b(2) = r2;
    c(0) = delta / norm;
    c(3) = (K + omega0) / norm;
    d(1) = r2;
    d(2) = -r2;
    out.states = {a, b, c, d};
    return out;
}

std::array<double, 3> effective_exchange(double J, double A, double D0, double theta, double phi) {
    const Eigen::Matrix3d h = pair_coupling_matrix(J, A, D0, unit_vector(theta, phi));
    const double off = std::max({std::abs(h(0, 1)), std::abs(h(0, 2)), std::abs(h(1, 2))});
    if (off > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("effective_exchange: pair interaction is not diagonal for this geometry");
    return {-h(0, 0) / 2.0, -h(1, 1) / 2.0, -h(2, 2) / 2.0};
}

} // namespace lineshape::ham
