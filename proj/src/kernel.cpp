// kernel.cpp: Frequency-domain memory kernel, inhomogeneous source and Born-Markov kernel in H-S space

#include "lineshape/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace lineshape::kernel {

namespace {

Eigen::MatrixXd snap_bohr(const Eigen::MatrixXd& bohr) {
    std::vector<double> values(bohr.data(), bohr.data() + bohr.size());
    std::sort(values.begin(), values.end());
    std::vector<double> reps;
    for (std::size_t k = 0; k < values.size();) {
        std::size_t j = k;
        while (j + 1 < values.size() && values[j + 1] - values[k] <= kBohrGroupTol) ++j;
        // Representative: cluster member closest to its mean, zero if the cluster straddles it.
        double rep = 0.5 * (values[k] + values[j]);
        if (values[k] <= 0.0 && values[j] >= 0.0) rep = 0.0;
        reps.push_back(rep);
        k = j + 1;
    }
    Eigen::MatrixXd out(bohr.rows(), bohr.cols());
    for (Eigen::Index i = 0; i < bohr.size(); ++i) {
        const double v = bohr.data()[i];
        auto it = std::lower_bound(reps.begin(), reps.end(), v - kBohrGroupTol);
        double best = *it;
        for (auto jt = it; jt != reps.end() && *jt <= v + kBohrGroupTol; ++jt)
            if (std::abs(*jt - v) < std::abs(best - v)) best = *jt;
        out.data()[i] = best;
    }
    // Keep exact antisymmetry after snapping.
    for (Eigen::Index k = 0; k < out.rows(); ++k) {
        out(k, k) = 0.0;
        for (Eigen::Index m = k + 1; m < out.cols(); ++m) out(m, k) = -out(k, m);
    }
    return out;
}

// Lazily evaluated G / Gs / H values for one drive frequency.
class ResolventCache {
public:
    ResolventCache(const KernelContext& ctx, bool shift) : ctx_(ctx), shift_(shift) {}

    cplx G(double nu) {
        auto it = g_.find(nu);
        if (it != g_.end()) return it->second;
        const cplx v = bath::resolvent_G(nu, ctx_.bath, ctx_.omega_max, shift_).combined();
        g_.emplace(nu, v);
        return v;
    }
    cplx Gs(double nu) {
        auto it = gs_.find(nu);
        if (it != gs_.end()) return it->second;
        const cplx v = bath::resolvent_Gs(nu, ctx_.bath, ctx_.omega_max, shift_).combined();
        gs_.emplace(nu, v);
        return v;
    }
    cplx H(double nu, double Omega) {
        const auto key = std::make_pair(nu, Omega);
        auto it = h_.find(key);
        if (it != h_.end()) return it->second;
        const cplx v = bath::inhomogeneous_resolvent(nu, Omega, ctx_.bath, ctx_.omega_max, shift_);
        h_.emplace(key, v);
        return v;
    }

private:
    const KernelContext& ctx_;
    bool shift_;
    std::map<double, cplx> g_, gs_;
    std::map<std::pair<double, double>, cplx> h_;
};

bool nonzero(cplx z) { return z != cplx(0.0, 0.0); }

} // namespace

KernelContext make_context(const ham::EigenSystem& eig, const Matrix& X_eig, const bath::BathSpec& bath) {
    bath.validate();
    KernelContext ctx;
    ctx.eig = eig;
    ctx.X_eig = X_eig;
    ctx.bath = bath;
    ctx.bohr = snap_bohr(eig.bohr);
    ctx.omega_max = bath::cutoff_frequency(bath, eig.bohr.cwiseAbs().maxCoeff());
    ctx.populations = ham::thermal_populations(eig.energies, bath.beta);
    return ctx;
}

KernelContext make_context(const Matrix& H, const Matrix& X, const bath::BathSpec& bath) {
    if (!hs::is_hermitian(X)) throw std::invalid_argument("make_context: coupling operator is not Hermitian");
    const ham::EigenSystem eig = ham::eigendecompose(H);
    return make_context(eig, eig.to_eigenbasis(X), bath);
}

Matrix liouvillian_superop(const Matrix& H_S) {
    if (!hs::is_hermitian(H_S)) throw std::invalid_argument("liouvillian_superop: H_S is not Hermitian");
    return hs::commutator_superop(H_S);
}

Matrix memory_kernel_general(double omega, const KernelContext& ctx, const KernelToggles& toggles) {
    const Eigen::Index N = ctx.eig.dim();
    const Matrix& X = ctx.X_eig;
    const Eigen::MatrixXd& w = ctx.bohr;
    ResolventCache cache(ctx, toggles.include_frequency_shift);
    Matrix M = Matrix::Zero(N * N, N * N);
    if (ctx.bath.s == 0.0) return M;

    for (Eigen::Index n = 0; n < N; ++n) {
        for (Eigen::Index m = 0; m < N; ++m) {
            const Eigen::Index row = n * N + m;
            for (Eigen::Index n2 = 0; n2 < N; ++n2) {
                // delta_{m m'} block: -sum_k X_nk X_kn' G(w + w_km)
                cplx diag_m = 0.0;
                for (Eigen::Index k = 0; k < N; ++k) {
                    const cplx c = X(n, k) * X(k, n2);
                    if (nonzero(c)) diag_m -= c * cache.G(omega + w(k, m));
                }
                M(row, n2 * N + m) += diag_m;

                const cplx xn = X(n, n2);
                for (Eigen::Index m2 = 0; m2 < N; ++m2) {
                    const cplx c = xn * std::conj(X(m, m2));
                    if (nonzero(c)) M(row, n2 * N + m2) += c * (cache.Gs(omega + w(n2, m)) + cache.G(omega + w(n, m2)));
                }
            }
            // delta_{n n'} block: -sum_k X*_mk X*_km' Gs(w + w_nk)
            for (Eigen::Index m2 = 0; m2 < N; ++m2) {
                cplx diag_n = 0.0;
                for (Eigen::Index k = 0; k < N; ++k) {
                    const cplx c = std::conj(X(m, k) * X(k, m2));
                    if (nonzero(c)) diag_n -= c * cache.Gs(omega + w(n, k));
                }
                M(row, n * N + m2) += diag_n;
            }
        }
    }
    return M;
}

Vector inhomogeneous_general(double omega, const KernelContext& ctx, const Matrix& A_eig, const KernelToggles& toggles) {
    const Eigen::Index N = ctx.eig.dim();
    if (A_eig.rows() != N || A_eig.cols() != N) throw std::invalid_argument("inhomogeneous_general: dimension mismatch");
    const Matrix& X = ctx.X_eig;
    const Matrix& A = A_eig;
    const RealVector& p = ctx.populations;
    const Eigen::MatrixXd& w = ctx.bohr;
    ResolventCache cache(ctx, toggles.include_frequency_shift);

    Vector psi = Vector::Zero(N * N);
    if (ctx.bath.s == 0.0) return psi;

    for (Eigen::Index n = 0; n < N; ++n) {
        for (Eigen::Index m = 0; m < N; ++m) {
            cplx acc = 0.0;
            for (Eigen::Index k = 0; k < N; ++k) {
                for (Eigen::Index l = 0; l < N; ++l) {
                    const cplx c1 = X(n, k) * A(k, l) * p(l) * X(l, m);
                    if (nonzero(c1)) acc += c1 * cache.H(omega + w(k, m), w(l, m));
                    const cplx c2 = X(n, k) * p(k) * X(k, l) * A(l, m);
                    if (nonzero(c2)) acc -= c2 * cache.H(omega + w(k, m), w(k, l));
                    const cplx c3 = A(n, k) * p(k) * X(k, l) * X(l, m);
                    if (nonzero(c3)) acc -= c3 * cache.H(omega + w(n, l), w(k, l));
                    const cplx c4 = p(n) * X(n, k) * A(k, l) * X(l, m);
                    if (nonzero(c4)) acc += c4 * cache.H(omega + w(n, l), w(n, k));
                }
            }
            psi(n * N + m) = I_unit * acc;
        }
    }
    return psi;
}

Matrix born_markov_kernel(const KernelContext& ctx, const KernelToggles& toggles) {
    const Eigen::Index N = ctx.eig.dim();
    const Matrix& X = ctx.X_eig;
    const Eigen::MatrixXd& w = ctx.bohr;
    ResolventCache cache(ctx, toggles.include_frequency_shift);
    Matrix M = Matrix::Zero(N * N, N * N);
    if (ctx.bath.s == 0.0) return M;

    for (Eigen::Index n = 0; n < N; ++n) {
        for (Eigen::Index m = 0; m < N; ++m) {
            const Eigen::Index row = n * N + m;
            for (Eigen::Index n2 = 0; n2 < N; ++n2) {
                cplx diag_m = 0.0;
                for (Eigen::Index k = 0; k < N; ++k) {
                    const cplx c = X(n, k) * X(k, n2);
                    if (nonzero(c)) diag_m -= c * cache.G(w(k, n2));
                }
                M(row, n2 * N + m) += diag_m;
                for (Eigen::Index m2 = 0; m2 < N; ++m2) {
                    const cplx c = X(n, n2) * std::conj(X(m, m2));
                    if (nonzero(c)) M(row, n2 * N + m2) += c * (cache.Gs(w(m2, m)) + cache.G(w(n, n2)));
                }
            }
            for (Eigen::Index m2 = 0; m2 < N; ++m2) {
                cplx diag_n = 0.0;
                for (Eigen::Index k = 0; k < N; ++k) {
                    const cplx c = std::conj(X(m, k) * X(k, m2));
                    if (nonzero(c)) diag_n -= c * cache.Gs(w(m2, k));
                }
                M(row, n * N + m2) += diag_n;
            }
        }
    }
    return M;
}

SingleSpinPhi single_spin_phi(double omega, double omega0, const bath::BathSpec& b, bool shift) {
    SingleSpinPhi f;
    f.F_plus = bath::half_fourier_F(+1, omega, omega0, b, shift).combined();
    f.F_minus = bath::half_fourier_F(-1, omega, omega0, b, shift).combined();
    f.Fs_plus = bath::half_fourier_Fs(+1, omega, omega0, b, shift).combined();
    f.Fs_minus = bath::half_fourier_Fs(-1, omega, omega0, b, shift).combined();
    const cplx F0 = bath::half_fourier_F(+1, omega, 0.0, b, shift).combined();
    const cplx Fs0 = bath::half_fourier_Fs(+1, omega, 0.0, b, shift).combined();
    f.phi1 = f.F_plus + f.Fs_minus;
    f.phi2 = f.Fs_plus + f.F_minus;
    f.phi3_zero = F0 - Fs0;
    f.phi4_plus = f.F_plus + f.Fs_plus;
    f.phi4_minus = f.F_minus + f.Fs_minus;
    f.phi4_zero = F0 + Fs0;
    return f;
}

Matrix memory_kernel_single_spin(double omega, double omega0, double Lambda, const bath::BathSpec& b,
                                 const KernelToggles& toggles) {
    const SingleSpinPhi f = single_spin_phi(omega, omega0, b, toggles.include_frequency_shift);
    const cplx a = std::sin(Lambda);
    const cplx ac = std::conj(a);
    const double c = std::cos(Lambda);
    const double a2 = std::norm(a);

    Matrix M(4, 4);
    M(0, 0) = -a2 * f.phi1 / 4.0;
    M(0, 1) = a * c * f.phi4_minus / 4.0;
    M(0, 2) = c * ac * f.phi4_plus / 4.0;
    M(0, 3) = a2 * f.phi2 / 4.0;

    M(1, 0) = c * ac * (f.phi3_zero + 2.0 * f.Fs_minus) / 4.0;
    M(1, 1) = -(a2 * f.phi4_zero + 2.0 * c * c * f.phi4_minus) / 4.0;
    M(1, 2) = ac * ac * f.phi4_zero / 4.0;
    M(1, 3) = c * ac * (f.phi3_zero - 2.0 * f.F_minus) / 4.0;

    M(2, 0) = -a * c * (f.phi3_zero - 2.0 * f.F_plus) / 4.0;
    M(2, 1) = a * a * f.phi4_zero / 4.0;
    M(2, 2) = -(a2 * f.phi4_zero + 2.0 * c * c * f.phi4_plus) / 4.0;
    M(2, 3) = -a * c * (f.phi3_zero + 2.0 * f.Fs_plus) / 4.0;

    M.row(3) = -M.row(0);
    return M;
}

SingleSpinEta single_spin_eta(double omega, double omega0, const bath::BathSpec& b, bool shift) {
    const double W = bath::cutoff_frequency(b, std::abs(omega) + std::abs(omega0));
    auto H = [&](double nu, double Om) { return bath::inhomogeneous_resolvent_half_line(nu, Om, b, W, shift); };
    SingleSpinEta e;
    e.eta1_plus = H(omega + omega0, 0.0);
    e.eta1_minus = H(omega - omega0, 0.0);
    e.eta2_plus = H(omega + omega0, omega0);
    e.eta2_minus = H(omega - omega0, -omega0);
    e.eta3_plus = H(omega, omega0);
    e.eta3_minus = H(omega, -omega0);
    e.eta4_plus = H(omega + omega0, -omega0);
    e.eta4_minus = H(omega - omega0, omega0);
    return e;
}

Vector inhomogeneous_single_spin(double omega, double omega0, double Lambda, const Matrix& A_nu,
                                 const bath::BathSpec& b, const KernelToggles& toggles) {
    if (A_nu.rows() != 2 || A_nu.cols() != 2) throw std::invalid_argument("inhomogeneous_single_spin: A_nu must be 2x2");
    Vector psi = Vector::Zero(4);
    if (b.s == 0.0) return psi;

    const SingleSpinEta e = single_spin_eta(omega, omega0, b, toggles.include_frequency_shift);
    const cplx a = std::sin(Lambda);
    const cplx ac = std::conj(a);
    const double c = std::cos(Lambda);
    const double a2 = std::norm(a);
    // Populations of |+> (energy +w0/2) and |-> (energy -w0/2).
    const double zp = 1.0 / (1.0 + std::exp(b.beta * omega0));
    const double p0 = zp;
    const double p1 = 1.0 - zp;
    const cplx A00 = A_nu(0, 0), A01 = A_nu(0, 1), A10 = A_nu(1, 0), A11 = A_nu(1, 1);
    const cplx i = I_unit;

    psi(0) = (i / 4.0) * (a2 * (A11 - A00) * (p1 * e.eta2_minus + p0 * e.eta2_plus) +
                          a * c * A01 * e.eta1_plus + c * ac * A10 * e.eta1_minus);
    psi(1) = (i / 2.0) * (c * ac * p0 * (A00 - A11) * e.eta2_plus - a2 * p1 * A01 * e.eta3_minus -
                          c * c * A01 * e.eta1_plus + ac * ac * p0 * A10 * e.eta3_plus);
    psi(2) = (i / 2.0) * (a * c * p1 * (A00 - A11) * e.eta2_minus + a * a * p1 * A01 * e.eta3_minus -
                          c * c * A10 * e.eta1_minus - a2 * p0 * A10 * e.eta3_plus);
    psi(3) = -psi(0);
    return psi;
}

KernelAtFrequency assemble(double omega, const KernelContext& ctx, const Matrix& A_eig, const KernelToggles& toggles_in) {
    const KernelToggles toggles = toggles_in.normalized();
    KernelAtFrequency k;
    k.omega = omega;
    const Matrix H_eig = ctx.eig.energies.cast<cplx>().asDiagonal();
    k.M_S = liouvillian_superop(H_eig);
    k.M_Xi2 = toggles.mode == Mode::BornMarkov ? born_markov_kernel(ctx, toggles)
                                               : memory_kernel_general(omega, ctx, toggles);
    const Matrix rho = ctx.populations.cast<cplx>().asDiagonal();
    k.rho0 = hs::vectorize(A_eig * rho - rho * A_eig);
    k.Psi2 = toggles.include_initial_correlation ? inhomogeneous_general(omega, ctx, A_eig, toggles)
                                                 : Vector(Vector::Zero(k.rho0.size()));
    return k;
}

} // namespace lineshape::kernel
