// susceptibility.cpp: Linear-response solve for chi(omega), frequency and field sweeps, peak analysis

#include "lineshape/susceptibility.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace lineshape::chi {

ResponsePair make_response_pair(const std::string& label, int num_spins) {
    const hs::SpinOps s = hs::total_spin_ops(num_spins);
    if (label == "+-") return {s.minus, s.plus, label};
    if (label == "xx") return {s.x, s.x, label};
    if (label == "yy") return {s.y, s.y, label};
    if (label == "zz") return {s.z, s.z, label};
    throw std::invalid_argument("unknown response pair '" + label + "' (expected +-, xx, yy or zz)");
}

Vector initial_vector(const Matrix& A_nu, const Matrix& rho_A) {
    return hs::vectorize(A_nu * rho_A - rho_A * A_nu);
}

namespace {

constexpr double kSingularRcond = 1e-13;

// At omega = 0 a trace-preserving generator with conserved quantities is singular. The
// omega -> 0 limit of the regularized solve is then the group inverse applied to the right-hand
// side, L# = (L + P0)^-1 (1 - P0), with P0 the spectral projector on the null space. A
// right-hand side with a component along the null space has no finite limit.
Vector limit_solve(const Matrix& L, const Vector& rhs, double omega, double rcond) {
    Eigen::JacobiSVD<Matrix> svd(L, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = 1e-10 * sv(0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    const Eigen::Index k = sv.size() - rank;
    const Matrix R = svd.matrixV().rightCols(k);
    const Matrix W = svd.matrixU().rightCols(k);
    const Matrix WR = W.adjoint() * R;
    Eigen::FullPivLU<Matrix> wr(WR);
    if (k == 0 || !wr.isInvertible())
        throw std::runtime_error("susceptibility solve is singular at omega = " + std::to_string(omega) +
                                 " (reciprocal condition estimate " + std::to_string(rcond) + ")");
    const Matrix P0 = R * wr.solve(W.adjoint());
    const Vector null_part = P0 * rhs;
    if (null_part.norm() > 1e-9 * std::max(rhs.norm(), 1e-300))
        throw std::runtime_error("susceptibility diverges at omega = " + std::to_string(omega) +
                                 ": the source drives a conserved mode");
    const Matrix shifted = L + P0;
    return shifted.partialPivLu().solve(rhs - null_part);
}

} // namespace

Solver::Solver(const ham::SpinSystemSpec& system, const ham::CouplingSpec& coupling, const bath::BathSpec& bath,
               const ResponsePair& pair, const kernel::KernelToggles& toggles, const SolveOptions& opts)
    : toggles_(toggles.normalized()) {
    epsilon_ = opts.epsilon;
    init(ham::build_system_hamiltonian(system), ham::build_coupling_operator(system, coupling), bath, pair,
         system.omega0);
}

Solver::Solver(const Matrix& H, const Matrix& X, const bath::BathSpec& bath, const ResponsePair& pair,
               const kernel::KernelToggles& toggles, const SolveOptions& opts)
    : toggles_(toggles.normalized()) {
    epsilon_ = opts.epsilon;
    init(H, X, bath, pair, 1.0);
}

void Solver::init(const Matrix& H, const Matrix& X, const bath::BathSpec& bath, const ResponsePair& pair,
                  double omega0) {
    if (pair.A.rows() != H.rows() || pair.B.rows() != H.rows())
        throw std::invalid_argument("Solver: response operators do not match the system dimension");
    ctx_ = kernel::make_context(H, X, bath);
    A_eig_ = ctx_.eig.to_eigenbasis(pair.A);
    B_eig_ = ctx_.eig.to_eigenbasis(pair.B);
    if (bath.s != 0.0) {
        epsilon_ = 0.0;
    } else if (epsilon_ <= 0.0) {
        epsilon_ = 1e-6 * std::abs(omega0);
    }
    if (toggles_.mode == kernel::Mode::BornMarkov) markov_ = kernel::born_markov_kernel(ctx_, toggles_);
}

Vector Solver::solve(double omega, SolveDiagnostics* diag) const {
    const Eigen::Index N = ctx_.eig.dim();
    const Eigen::Index N2 = N * N;
    Matrix L = Matrix::Zero(N2, N2);
    if (toggles_.mode == kernel::Mode::BornMarkov) {
        L = -markov_;
    } else {
        L = -kernel::memory_kernel_general(omega, ctx_, toggles_);
    }
    const cplx drive(epsilon_, omega);
    for (Eigen::Index n = 0; n < N; ++n)
        for (Eigen::Index m = 0; m < N; ++m) L(n * N + m, n * N + m) += drive + I_unit * ctx_.bohr(n, m);

    const Matrix rho = ctx_.populations.cast<cplx>().asDiagonal();
    Vector rhs = hs::vectorize(A_eig_ * rho - rho * A_eig_);
    if (toggles_.include_initial_correlation) rhs += kernel::inhomogeneous_general(omega, ctx_, A_eig_, toggles_);

    const double rhs_norm = rhs.norm();
    Eigen::PartialPivLU<Matrix> lu(L);
    double rcond = lu.rcond();
    Vector x;
    if (rcond >= kSingularRcond) {
        x = lu.solve(rhs);
    } else {
        x = limit_solve(L, rhs, omega, rcond);
    }
    const double residual = rhs_norm > 0.0 ? (L * x - rhs).norm() / rhs_norm : (L * x).norm();
    if (!std::isfinite(residual) || residual > 1e-8)
        throw std::runtime_error("susceptibility solve failed at omega = " + std::to_string(omega) +
                                 " (relative residual " + std::to_string(residual) + ")");
    if (diag) *diag = SolveDiagnostics{residual, rhs_norm, rcond};
    return x;
}

cplx Solver::chi_at(double omega, SolveDiagnostics* diag) const {
    const Vector x = solve(omega, diag);
    // i Tr(B x) = i (B^dagger, x)
    return I_unit * hs::hs_inner(B_eig_.adjoint(), hs::devectorize(x));
}

cplx chi_at(double omega, const ham::SpinSystemSpec& system, const ham::CouplingSpec& coupling,
            const bath::BathSpec& bath, const ResponsePair& pair, const kernel::KernelToggles& toggles) {
    return Solver(system, coupling, bath, pair, toggles).chi_at(omega);
}

std::vector<double> SusceptibilitySweep::chi_pp() const {
    std::vector<double> out(chi.size());
    for (std::size_t i = 0; i < chi.size(); ++i) out[i] = -chi[i].imag();
    return out;
}

namespace {

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failed_index = std::numeric_limits<std::size_t>::max();
    std::mutex mu;
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const std::exception& e) {
            throw std::runtime_error("grid point " + std::to_string(failed_index) + ": " + e.what());
        }
    }
}

void require_monotone(const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("sweep grid must be strictly increasing");
}

} // namespace

SusceptibilitySweep chi_sweep(const std::vector<double>& grid, const Solver& solver, int threads) {
    require_monotone(grid);
    SusceptibilitySweep out;
    out.grid = grid;
    out.chi.assign(grid.size(), cplx{});
    out.toggles = solver.toggles();
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const cplx v = solver.chi_at(grid[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::runtime_error("non-finite susceptibility");
        out.chi[i] = v;
    });
    return out;
}

SusceptibilitySweep chi_sweep(const std::vector<double>& grid, const ham::SpinSystemSpec& system,
                              const ham::CouplingSpec& coupling, const bath::BathSpec& bath, const ResponsePair& pair,
                              const kernel::KernelToggles& toggles, int threads) {
    return chi_sweep(grid, Solver(system, coupling, bath, pair, toggles), threads);
}

SusceptibilitySweep field_sweep(double omega_fixed, const std::vector<double>& H0_grid,
                                const ham::SpinSystemSpec& system, const ham::CouplingSpec& coupling,
                                const bath::BathSpec& bath, const ResponsePair& pair,
                                const kernel::KernelToggles& toggles, int threads) {
    require_monotone(H0_grid);
    SusceptibilitySweep out;
    out.grid = H0_grid;
    out.chi.assign(H0_grid.size(), cplx{});
    out.toggles = toggles.normalized();
    parallel_for(H0_grid.size(), threads, [&](std::size_t i) {
        ham::SpinSystemSpec spec = system;
        spec.omega0 = H0_grid[i];
        const Solver solver(spec, coupling, bath, pair, toggles);
        out.chi[i] = solver.chi_at(omega_fixed);
    });
    return out;
}

std::vector<Peak> peak_analysis(const std::vector<double>& grid, const std::vector<double>& y, double min_prominence) {
    if (grid.size() != y.size() || grid.size() < 3) throw std::invalid_argument("peak_analysis: need >= 3 matching points");
    const std::size_t n = y.size();
    const double gmax = *std::max_element(y.begin(), y.end());
    if (!(gmax > 0.0)) throw std::runtime_error("peak_analysis: no peak found (signal is not positive)");
    const double threshold = min_prominence * gmax;

    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        // Plateaus count once, at their left edge.
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;

        // Prominence: height above the higher of the two minima reached before a taller point.
        double left_min = y[i];
        for (std::size_t j = i; j-- > 0;) {
            if (y[j] > y[i]) break;
            left_min = std::min(left_min, y[j]);
        }
        double right_min = y[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (y[j] > y[i]) break;
            right_min = std::min(right_min, y[j]);
        }
        const double prominence = y[i] - std::max(left_min, right_min);
        if (prominence < threshold) continue;

        Peak p;
        p.index = i;
        p.prominence = prominence;
        const double h = grid[i + 1] - grid[i];
        const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
        double shift = 0.0;
        if (denom < 0.0) shift = 0.5 * (y[i - 1] - y[i + 1]) / denom;
        shift = std::clamp(shift, -0.5, 0.5);
        p.position = grid[i] + shift * h;
        p.height = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * shift;

        const double half = 0.5 * p.height;
        double left = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = i; j-- > 0;) {
            if (y[j] <= half) {
                left = grid[j] + (half - y[j]) / (y[j + 1] - y[j]) * (grid[j + 1] - grid[j]);
                break;
            }
        }
        double right = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = i + 1; j < n; ++j) {
            if (y[j] <= half) {
                right = grid[j - 1] + (y[j - 1] - half) / (y[j - 1] - y[j]) * (grid[j] - grid[j - 1]);
                break;
            }
        }
        p.fwhm = right - left;
        peaks.push_back(p);
    }
    if (peaks.empty()) throw std::runtime_error("peak_analysis: no peak found");
    return peaks;
}

std::vector<Peak> peak_analysis(const SusceptibilitySweep& sweep, double min_prominence) {
    return peak_analysis(sweep.grid, sweep.chi_pp(), min_prominence);
}

std::vector<double> linspace_step(double start, double stop, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be > 0");
    if (!(stop >= start)) throw std::invalid_argument("grid stop must be >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) g[i] = start + static_cast<double>(i) * step;
    return g;
}

} // namespace lineshape::chi
