#include <doctest.h>

#include <cmath>

#include "lineshape/susceptibility.hpp"
#include "lineshape/timedomain.hpp"

using namespace lineshape;

namespace {

kernel::KernelContext spin_context(double Lambda, double s = 0.1) {
    const Matrix H = hs::pauli_half_z();
    const Matrix X = std::sin(Lambda) * hs::pauli_half_x() + std::cos(Lambda) * hs::pauli_half_z();
    return kernel::make_context(H, X, bath::BathSpec{s, 0.5, 5.0});
}

} // namespace

TEST_CASE("kernel at t = 0 is the double commutator weighted by Phi(0)") {
    const auto ctx = spin_context(0.7);
    const Matrix M0 = td::kernel_time(0.0, ctx);
    const Matrix X = ctx.X_eig;
    const cplx phi0 = bath::phi_analytic(0.0, ctx.bath);
    // M(0) rho = -Phi(0) [X, [X, rho]] for real Phi(0)
    const Matrix C = hs::commutator_superop(X);
    CHECK((M0 + phi0 * C * C).norm() < 1e-13 * M0.norm());
}

TEST_CASE("decoupled bath: zero kernel, zero source, free rotation") {
    const auto ctx = spin_context(0.3, 0.0);
    const Matrix A = ctx.eig.to_eigenbasis(hs::spin_ops(1, 1).minus);
    CHECK(td::kernel_time(1.5, ctx).norm() == 0.0);
    CHECK(td::inhomogeneous_time(1.5, ctx, A).norm() == 0.0);
    td::PropagateOptions opts;
    opts.t_max = 5.0;
    const auto traj = td::propagate(ctx, A, opts);
    const Vector& x0 = traj.samples.front();
    const Vector& xT = traj.samples.back();
    const double T = opts.dt * (traj.samples.size() - 1);
    // S- lives on the (0,1) element, which rotates as exp(+i w0 t)
    REQUIRE(std::abs(x0(1)) > 0.1);
    CHECK(std::abs(xT(1) - x0(1) * std::exp(I_unit * T)) < 1e-12 * std::abs(x0(1)));
}

TEST_CASE("inhomogeneous source requires finite temperature") {
    auto ctx = spin_context(0.3);
    ctx.bath.beta = std::numeric_limits<double>::infinity();
    const Matrix A = ctx.eig.to_eigenbasis(hs::spin_ops(1, 1).minus);
    CHECK_THROWS(td::inhomogeneous_time(0.5, ctx, A));
}

TEST_CASE("Laplace transform of a sampled exponential") {
    // f(t) = exp(-(g + i w1) t) on a single component: f[w] = 1 / (g + i (w + w1))
    td::Trajectory traj;
    traj.dt = 0.01;
    const double g = 0.8, w1 = 1.3;
    for (int k = 0; k <= 4000; ++k) {
        Vector v(1);
        v(0) = std::exp(-(g + I_unit * w1) * (k * traj.dt));
        traj.samples.push_back(v);
    }
    traj.horizon = 40.0;
    for (double w : {-1.3, 0.0, 2.0}) {
        const cplx want = 1.0 / (g + I_unit * (w + w1));
        CHECK(std::abs(td::laplace_of(traj, w)(0) - want) < 1e-6 * std::abs(want));
        CHECK(std::abs(td::laplace_of(traj, w, 0.01)(0) - want) < 1e-6 * std::abs(want));
    }
    // truncated before decay: undamped transform is refused
    traj.samples.resize(200);
    CHECK_THROWS(td::laplace_of(traj, 0.0));
}

TEST_CASE("propagation is linear in the perturbation") {
    const auto ctx = spin_context(0.5);
    const Matrix A1 = ctx.eig.to_eigenbasis(hs::pauli_half_x());
    const Matrix A2 = ctx.eig.to_eigenbasis(hs::pauli_half_y());
    td::PropagateOptions opts;
    opts.t_max = 4.0;
    const auto a = td::propagate(ctx, A1, opts);
    const auto b = td::propagate(ctx, A2, opts);
    const auto c = td::propagate(ctx, Matrix(2.0 * A1 - 0.5 * A2), opts);
    const Vector diff = c.samples.back() - 2.0 * a.samples.back() + 0.5 * b.samples.back();
    CHECK(diff.norm() < 1e-12 * c.samples.back().norm());
}

TEST_CASE("pure dephasing leaves populations untouched") {
    const auto ctx = spin_context(0.0);
    const Matrix A = ctx.eig.to_eigenbasis(hs::spin_ops(1, 1).minus);
    td::PropagateOptions opts;
    opts.t_max = 10.0;
    const auto traj = td::propagate(ctx, A, opts);
    for (const auto& v : traj.samples) {
        CHECK(std::abs(v(0)) < 1e-14);
        CHECK(std::abs(v(3)) < 1e-14);
    }
}

TEST_CASE("kernel Laplace transform matches the frequency-domain kernel off resonance") {
    const auto ctx = spin_context(0.6);
    const Matrix Mw = kernel::memory_kernel_general(0.6, ctx);
    const Matrix Mt = td::kernel_laplace(0.6, ctx);
    CHECK((Mw - Mt).cwiseAbs().maxCoeff() < 1e-6 * Mw.cwiseAbs().maxCoeff());
}

TEST_CASE("short dual-route comparison for one spin") {
    // strong coupling keeps the horizon short
    ham::SpinSystemSpec sys;
    const chi::Solver solver(sys, ham::CouplingSpec{{0.8}, {0.0}}, bath::BathSpec{0.3, 0.5, 1.0},
                             chi::make_response_pair("+-", 1), kernel::KernelToggles{});
    td::PropagateOptions opts;
    opts.dt = 0.02;
    opts.t_max = 30.0 * td::markov_decay_time(solver.context());
    const auto traj = td::propagate(solver.context(), solver.A_eig(), opts);
    for (double w : {0.7, 1.0, 1.4}) {
        const cplx f = solver.chi_at(w);
        const cplx t = td::chi_from_trajectory(traj, solver.B_eig(), w, 0.01);
        INFO("omega " << w << " frequency " << f << " time " << t);
        CHECK(std::abs(f - t) < 5e-3 * std::abs(f));
    }
}
