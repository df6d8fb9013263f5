// timedomain.cpp: Time-convolution propagation and numerical Laplace transforms (cross-check of the frequency route)

#include "lineshape/timedomain.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lineshape/quadrature.hpp"

namespace lineshape::td {

namespace {

Vector phases(const kernel::KernelContext& ctx, double t) {
    const Eigen::Index N = ctx.eig.dim();
    Vector u(N);
    for (Eigen::Index k = 0; k < N; ++k) u(k) = std::exp(cplx(0.0, -ctx.eig.energies(k) * t));
    return u;
}

// O(-t) = U O U^+ for U = diag(u).
Matrix evolve_back(const Matrix& O, const Vector& u) {
    return u.asDiagonal() * O * u.conjugate().asDiagonal();
}

} // namespace

Matrix kernel_time(double t, const kernel::KernelContext& ctx) {
    if (t < 0.0) throw std::invalid_argument("kernel_time: t must be >= 0");
    const Eigen::Index N = ctx.eig.dim();
    if (ctx.bath.s == 0.0) return Matrix::Zero(N * N, N * N);
    const cplx phi = bath::phi_analytic(t, ctx.bath);
    const cplx phic = std::conj(phi);
    const Vector u = phases(ctx, t);
    const Matrix U = u.asDiagonal();
    const Matrix& X = ctx.X_eig;
    const Matrix Xt = evolve_back(X, u);
    const Matrix XXtU = X * Xt * U;
    const Matrix XU = X * U;
    const Matrix XtU = Xt * U;
    return -phi * hs::sandwich_superop(XXtU, U) + phic * hs::sandwich_superop(XU, XtU) +
           phi * hs::sandwich_superop(XtU, XU) - phic * hs::sandwich_superop(U, XXtU);
}

Vector inhomogeneous_time(double t, const kernel::KernelContext& ctx, const Matrix& A_eig, int lambda_nodes) {
    if (t < 0.0) throw std::invalid_argument("inhomogeneous_time: t must be >= 0");
    const Eigen::Index N = ctx.eig.dim();
    const double beta = ctx.bath.beta;
    if (ctx.bath.s == 0.0 || beta == 0.0) return Vector::Zero(N * N);
    if (!std::isfinite(beta)) throw std::domain_error("inhomogeneous_time: requires finite beta");

    const Vector u = phases(ctx, t);
    const Matrix At = evolve_back(A_eig, u);
    const Matrix& X = ctx.X_eig;
    const Matrix rho = ctx.populations.cast<cplx>().asDiagonal();
    const Matrix XAr = X * At * rho;
    const Matrix Xr = X * rho;
    const Matrix Ar = At * rho;

    Matrix acc = Matrix::Zero(N, N);
    const quad::GaussLegendre rule = quad::gauss_legendre(lambda_nodes, 0.0, beta);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double lambda = rule.nodes[q];
        const cplx phi = bath::phi_analytic(cplx(-t, -lambda), ctx.bath);
        // X(-i lambda - t)_ab = X_ab exp(lambda w_ab) exp(-i w_ab t)
        Matrix Xl(N, N);
        for (Eigen::Index a = 0; a < N; ++a)
            for (Eigen::Index b = 0; b < N; ++b)
                Xl(a, b) = X(a, b) * std::exp(lambda * ctx.eig.bohr(a, b)) * u(a) * std::conj(u(b));
        const Matrix XlA = Xl * At;
        const Matrix term = XAr * Xl - Xr * XlA - Ar * Xl * X + rho * XlA * X;
        acc += (rule.weights[q] * phi) * term;
    }
    return hs::vectorize(I_unit * acc);
}

Trajectory propagate(const kernel::KernelContext& ctx, const Matrix& A_eig, const PropagateOptions& opts) {
    const double h = opts.dt;
    if (!(h > 0.0) || !(opts.t_max > 0.0)) throw std::invalid_argument("propagate: dt and t_max must be > 0");
    const auto steps = static_cast<Eigen::Index>(std::ceil(opts.t_max / h - 1e-9));
    const Eigen::Index N = ctx.eig.dim();
    const Eigen::Index D = N * N;

    // Kernel blocks stored in reverse order, M_steps ... M_0, so the history sum
    // sum_{k=1}^{n-1} M_{n-k} x_k is one contiguous product against x_1 ... x_{n-1}.
    Matrix Mrev(D, D * (steps + 1));
    for (Eigen::Index k = 0; k <= steps; ++k)
        Mrev.middleCols((steps - k) * D, D) = kernel_time(static_cast<double>(k) * h, ctx);
    auto block = [&](Eigen::Index k) { return Mrev.middleCols((steps - k) * D, D); };

    std::vector<Vector> psi(static_cast<std::size_t>(steps + 1), Vector::Zero(D));
    double psi_scale = 0.0;
    if (opts.include_initial_correlation) {
        for (Eigen::Index k = 0; k <= steps; ++k) {
            psi[k] = inhomogeneous_time(static_cast<double>(k) * h, ctx, A_eig, opts.lambda_nodes);
            psi_scale = std::max(psi_scale, psi[k].norm());
        }
    }

    Vector rot(D);
    for (Eigen::Index n = 0; n < N; ++n)
        for (Eigen::Index m = 0; m < N; ++m) rot(n * N + m) = std::exp(cplx(0.0, -ctx.bohr(n, m) * h));

    const Matrix rho = ctx.populations.cast<cplx>().asDiagonal();
    Vector hist(D * (steps + 1));
    hist.head(D) = hs::vectorize(A_eig * rho - rho * A_eig);
    const double scale = std::max(hist.head(D).norm() + psi_scale * opts.t_max, 1e-300);

    // partial(n) = h [ M_n x_0 / 2 + sum_{k=1}^{n-1} M_{n-k} x_k ]
    auto partial = [&](Eigen::Index n) -> Vector {
        Vector s = 0.5 * h * (block(n) * hist.head(D));
        if (n >= 2) s.noalias() += h * (Mrev.middleCols((steps - n + 1) * D, (n - 1) * D) * hist.segment(D, (n - 1) * D));
        return s;
    };

    Vector G = psi[0]; // memory term vanishes at t = 0
    const auto M0 = block(0);
    for (Eigen::Index n = 0; n < steps; ++n) {
        const Vector xn = hist.segment(n * D, D);
        const Vector base = rot.cwiseProduct(xn + 0.5 * h * G);
        const Vector pre = partial(n + 1) + psi[n + 1];
        const Vector xp = rot.cwiseProduct(xn + h * G);
        Vector Gp = pre + 0.5 * h * (M0 * xp);
        Vector xc = base + 0.5 * h * Gp;
        G = pre + 0.5 * h * (M0 * xc);
        if (!xc.allFinite() || xc.norm() > opts.growth_limit * scale)
            throw std::runtime_error("propagate: step-size instability at t = " +
                                     std::to_string(static_cast<double>(n + 1) * h) + " (norm growth; reduce dt)");
        hist.segment((n + 1) * D, D) = xc;
    }

    Trajectory traj;
    traj.dt = h;
    traj.horizon = static_cast<double>(steps) * h;
    traj.samples.reserve(static_cast<std::size_t>(steps + 1));
    for (Eigen::Index k = 0; k <= steps; ++k) traj.samples.push_back(hist.segment(k * D, D));
    return traj;
}

namespace {

Vector damped_sum(const Trajectory& traj, double omega, double eps) {
    const std::size_t K = traj.samples.size() - 1;
    const double h = traj.dt;
    const cplx z(-eps, -omega);
    auto f = [&](std::size_t k) -> Vector { return std::exp(z * (static_cast<double>(k) * h)) * traj.samples[k]; };

    Vector total = 0.5 * (f(0) + f(K));
    for (std::size_t k = 1; k < K; ++k) total += f(k);
    total *= h;

    // Euler-Maclaurin: -h^2/12 (f'(T) - f'(0)) with one-sided second-order derivatives.
    if (K >= 2) {
        const Vector d0 = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
        const Vector dT = (3.0 * f(K) - 4.0 * f(K - 1) + f(K - 2)) / (2.0 * h);
        total -= (h * h / 12.0) * (dT - d0);
    }

    // Tail beyond T: each component continued as f(T) exp(kappa (t - T)) when it is decaying.
    const Vector fK = f(K), fK1 = f(K - 1);
    for (Eigen::Index i = 0; i < fK.size(); ++i) {
        if (std::abs(fK(i)) == 0.0 || std::abs(fK1(i)) == 0.0) continue;
        const cplx ratio = fK(i) / fK1(i);
        if (!(std::abs(ratio) < 1.0)) continue;
        const cplx kappa = std::log(ratio) / h;
        total(i) -= fK(i) / kappa;
    }
    return total;
}

} // namespace

Vector laplace_of(const Trajectory& traj, double omega, double epsilon) {
    if (traj.samples.size() < 3) throw std::invalid_argument("laplace_of: trajectory needs >= 3 samples");
    if (epsilon < 0.0) throw std::invalid_argument("laplace_of: epsilon must be >= 0");
    if (epsilon == 0.0) {
        double peak = 0.0;
        for (const auto& x : traj.samples) peak = std::max(peak, x.norm());
        const double last = traj.samples.back().norm();
        if (last > 1e-6 * peak)
            throw std::runtime_error("laplace_of: trajectory has not decayed (final/peak norm " +
                                     std::to_string(last / peak) + "); use epsilon > 0 or a longer horizon");
        return damped_sum(traj, omega, 0.0);
    }
    const Vector l1 = damped_sum(traj, omega, epsilon);
    const Vector l2 = damped_sum(traj, omega, 0.5 * epsilon);
    const Vector l4 = damped_sum(traj, omega, 0.25 * epsilon);
    return (8.0 * l4 - 6.0 * l2 + l1) / 3.0;
}

cplx chi_from_trajectory(const Trajectory& traj, const Matrix& B_eig, double omega, double epsilon) {
    const Matrix x = hs::devectorize(laplace_of(traj, omega, epsilon));
    return I_unit * (B_eig * x).trace();
}

namespace {

// Damped transform of a matrix-valued function, chunked Gauss-Legendre, extrapolated in epsilon.
template <class Fn>
Matrix damped_transform(Fn&& f, double omega, double max_freq, double epsilon, const bath::BathSpec& b) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("damped transform: epsilon must be > 0");
    const double phi0 = std::abs(bath::phi_analytic(0.0, b));
    const double max_len = 2.0 * M_PI / std::max(max_freq, 1.0);
    const Matrix f0 = f(0.0);
    auto one = [&](double eps) {
        Matrix total = Matrix::Zero(f0.rows(), f0.cols());
        double t = 0.0;
        for (int chunk = 0; chunk < 50'000'000; ++chunk) {
            const double len = std::min(0.25 * t + 0.5, max_len);
            const quad::GaussLegendre rule = quad::gauss_legendre(24, t, t + len);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double tq = rule.nodes[q];
                total += (rule.weights[q] * std::exp(cplx(-eps * tq, -omega * tq))) * f(tq);
            }
            t += len;
            const double tail = std::exp(-eps * t) * std::abs(bath::phi_analytic(t, b)) * std::max(t, 1.0 / eps);
            if (tail < 1e-13 * phi0) return total;
        }
        throw std::runtime_error("damped transform: tail did not decay");
    };
    const Matrix l1 = one(epsilon);
    const Matrix l2 = one(0.5 * epsilon);
    const Matrix l4 = one(0.25 * epsilon);
    return (8.0 * l4 - 6.0 * l2 + l1) / 3.0;
}

double max_bohr(const kernel::KernelContext& ctx) { return ctx.bohr.cwiseAbs().maxCoeff(); }

} // namespace

Matrix kernel_laplace(double omega, const kernel::KernelContext& ctx, double epsilon) {
    const double fmax = std::abs(omega) + 2.0 * max_bohr(ctx);
    return damped_transform([&](double t) { return kernel_time(t, ctx); }, omega, fmax, epsilon, ctx.bath);
}

Vector inhomogeneous_laplace(double omega, const kernel::KernelContext& ctx, const Matrix& A_eig, double epsilon) {
    const double fmax = std::abs(omega) + 2.0 * max_bohr(ctx);
    const Matrix r = damped_transform([&](double t) -> Matrix { return Matrix(inhomogeneous_time(t, ctx, A_eig)); }, omega,
                                      fmax, epsilon, ctx.bath);
    return r.col(0);
}

double markov_decay_time(const kernel::KernelContext& ctx) {
    const Eigen::Index N = ctx.eig.dim();
    Matrix L = kernel::born_markov_kernel(ctx);
    for (Eigen::Index n = 0; n < N; ++n)
        for (Eigen::Index m = 0; m < N; ++m) L(n * N + m, n * N + m) -= I_unit * ctx.bohr(n, m);
    Eigen::ComplexEigenSolver<Matrix> es(L, false);
    double slowest = std::numeric_limits<double>::infinity();
    const double tol = 1e-10 * std::max(1.0, L.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double rate = -es.eigenvalues()(k).real();
        if (rate > tol) slowest = std::min(slowest, rate);
    }
    if (!std::isfinite(slowest)) throw std::runtime_error("markov_decay_time: no decaying mode");
    return 1.0 / slowest;
}

} // namespace lineshape::td
