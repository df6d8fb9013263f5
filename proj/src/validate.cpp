// validate.cpp: Oracle comparisons and structural invariants, collected into a machine-readable report

#include "lineshape/validate.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include <json.hpp>

#include "lineshape/hamiltonian.hpp"
#include "lineshape/hs_algebra.hpp"
#include "lineshape/susceptibility.hpp"
#include "lineshape/timedomain.hpp"

namespace lineshape::validation {

double relative_error(const Matrix& value, const Matrix& reference) {
    const double scale = reference.cwiseAbs().maxCoeff();
    const double diff = (value - reference).cwiseAbs().maxCoeff();
    return scale > 0.0 ? diff / scale : diff;
}

std::pair<double, double> single_spin_oracle(double omega, double Lambda, const bath::BathSpec& b,
                                             const kernel::KernelToggles& toggles) {
    const double w0 = 1.0;
    const Matrix H = w0 * hs::pauli_half_z();
    const Matrix X = std::sin(Lambda) * hs::pauli_half_x() + std::cos(Lambda) * hs::pauli_half_z();
    const auto ctx = kernel::make_context(H, X, b);

    const Matrix general = hs::change_basis_superop(kernel::memory_kernel_general(omega, ctx, toggles),
                                                    ctx.eig.basis.adjoint());
    const Matrix closed = kernel::memory_kernel_single_spin(omega, w0, Lambda, b, toggles);

    const Matrix A = hs::spin_ops(1, 1).minus;
    const Vector psi_eig = kernel::inhomogeneous_general(omega, ctx, ctx.eig.to_eigenbasis(A), toggles);
    const Vector psi_general = hs::vectorize(ctx.eig.from_eigenbasis(hs::devectorize(psi_eig)));
    const Vector psi_closed = kernel::inhomogeneous_single_spin(omega, w0, Lambda, A, b, toggles);
    return {relative_error(general, closed), relative_error(psi_general, psi_closed)};
}

double kms_error(const bath::BathSpec& b, int points, double w_max) {
    if (w_max <= 0.0) w_max = 10.0 * b.omega_c;
    double worst = 0.0;
    for (int k = 1; k <= points; ++k) {
        const double w = w_max * k / points;
        const double neg = bath::bath_spectrum_J(-w, b);
        const double pos = bath::bath_spectrum_J(w, b);
        if (neg == 0.0) continue;
        worst = std::max(worst, std::abs(neg - std::exp(-b.beta * w) * pos) / neg);
    }
    return worst;
}

double phi_route_error(const bath::BathSpec& b, int points, double t_max) {
    double worst = 0.0;
    for (int k = 0; k < points; ++k) {
        const double t = t_max * k / std::max(points - 1, 1);
        const cplx a = bath::phi_analytic(t, b);
        const cplx q = bath::phi_quadrature(t, b);
        worst = std::max(worst, std::abs(a - q) / std::abs(a));
    }
    return worst;
}

double half_fourier_route_error(const bath::BathSpec& b, const std::vector<double>& omegas, double omega0) {
    double worst = 0.0;
    for (double w : omegas) {
        for (int sign : {+1, -1}) {
            const double nu = w - sign * omega0;
            const cplx F = bath::half_fourier_F(sign, w, omega0, b).combined();
            const cplx Fs = bath::half_fourier_Fs(sign, w, omega0, b).combined();
            const cplx F_t = bath::damped_time_transform(nu, b, false);
            const cplx Fs_t = bath::damped_time_transform(nu, b, true);
            worst = std::max({worst, std::abs(F - F_t) / std::abs(F_t), std::abs(Fs - Fs_t) / std::abs(Fs_t)});
        }
    }
    return worst;
}

double dual_route_error(const chi::Solver& solver, const std::vector<double>& omegas, double damping_times,
                        double dt, double epsilon) {
    td::PropagateOptions o;
    o.dt = dt;
    o.t_max = damping_times * td::markov_decay_time(solver.context());
    o.include_initial_correlation = solver.toggles().include_initial_correlation;
    const auto traj = td::propagate(solver.context(), solver.A_eig(), o);
    double worst = 0.0;
    for (double w : omegas) {
        const cplx f = solver.chi_at(w);
        const cplx t = td::chi_from_trajectory(traj, solver.B_eig(), w, epsilon);
        worst = std::max(worst, std::abs(t - f) / std::abs(f));
    }
    return worst;
}

double step_halving_order(const chi::Solver& solver, double dt, double t_max) {
    Vector end[3];
    for (int k = 0; k < 3; ++k) {
        td::PropagateOptions o;
        o.dt = dt / static_cast<double>(1 << k);
        o.t_max = t_max;
        end[k] = td::propagate(solver.context(), solver.A_eig(), o).samples.back();
    }
    return std::log2((end[0] - end[1]).norm() / (end[1] - end[2]).norm());
}

bool Report::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string Report::to_json() const {
    nlohmann::json j;
    j["level"] = level;
    j["version"] = version;
    j["passed"] = passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"measured", c.measured},
                               {"tolerance", c.tolerance},
                               {"comparison", c.comparison},
                               {"seconds", c.seconds},
                               {"detail", c.detail}});
    }
    return j.dump(2);
}

Report Report::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Report r;
    r.level = j.at("level").get<std::string>();
    r.version = j.at("version").get<std::string>();
    for (const auto& c : j.at("checks")) {
        CheckResult cr;
        cr.name = c.at("name").get<std::string>();
        cr.passed = c.at("passed").get<bool>();
        cr.measured = c.at("measured").get<double>();
        cr.tolerance = c.at("tolerance").get<double>();
        cr.comparison = c.at("comparison").get<std::string>();
        cr.seconds = c.at("seconds").get<double>();
        cr.detail = c.at("detail").get<std::string>();
        r.checks.push_back(cr);
    }
    return r;
}

namespace {

using Clock = std::chrono::steady_clock;

// Runs one check; a thrown exception is recorded as a failure with its message.
void run_check(Report& report, const std::string& name, double tolerance, const std::string& comparison,
               const std::function<double(std::string&)>& body) {
    CheckResult c;
    c.name = name;
    c.tolerance = tolerance;
    c.comparison = comparison;
    const auto t0 = Clock::now();
    try {
        c.measured = body(c.detail);
        c.passed = comparison == "<=" ? c.measured <= tolerance : c.measured >= tolerance;
    } catch (const std::exception& e) {
        c.measured = NAN;
        c.passed = false;
        c.detail = e.what();
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    report.checks.push_back(c);
}

Matrix random_matrix(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cplx(u(rng), u(rng));
    return m;
}

ham::SpinSystemSpec two_spin_spec(double theta) {
    ham::SpinSystemSpec s;
    s.num_spins = 2;
    s.J = -1.0;
    s.D0 = 0.1;
    s.pairs = ham::two_spin_geometry(theta);
    return s;
}

const bath::BathSpec kReferenceBath{0.1, 0.5, 5.0};

void quick_checks(Report& r) {
    run_check(r, "hs.sandwich_identity", 1e-13, "<=", [](std::string&) {
        std::mt19937_64 rng(11);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix a = random_matrix(rng, 4), b = random_matrix(rng, 4), rho = random_matrix(rng, 4);
            const Vector lhs = hs::sandwich_superop(a, b) * hs::vectorize(rho);
            const Vector rhs = hs::vectorize(a * rho * b.adjoint());
            worst = std::max(worst, relative_error(lhs, rhs));
        }
        return worst;
    });
    run_check(r, "hs.vectorize_roundtrip", 0.0, "<=", [](std::string&) {
        std::mt19937_64 rng(12);
        const Matrix m = random_matrix(rng, 8);
        return (hs::devectorize(hs::vectorize(m)) - m).cwiseAbs().maxCoeff();
    });
    run_check(r, "bath.kms", 1e-12, "<=", [](std::string&) {
        double worst = 0.0;
        for (double beta : {0.5, 1.0, 5.0}) worst = std::max(worst, kms_error(bath::BathSpec{0.1, 0.5, beta}));
        return worst;
    });
    run_check(r, "bath.phi_closed_form_vs_quadrature", 1e-6, "<=",
              [](std::string&) { return phi_route_error(kReferenceBath, 6, 20.0 / kReferenceBath.omega_c); });
    run_check(r, "kernel.single_spin_oracle", 1e-8, "<=", [](std::string& detail) {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> uw(0.3, 1.7), ul(0.0, M_PI / 2), ub(0.5, 10.0), us(0.01, 0.3),
            uc(0.2, 2.0);
        double worst_k = 0.0, worst_p = 0.0;
        for (int k = 0; k < 8; ++k) {
            const double w = uw(rng), L = ul(rng);
            const bath::BathSpec b{us(rng), uc(rng), ub(rng)};
            const auto [ek, ep] = single_spin_oracle(w, L, b);
            worst_k = std::max(worst_k, ek);
            worst_p = std::max(worst_p, ep);
        }
        detail = "kernel " + std::to_string(worst_k) + ", source " + std::to_string(worst_p);
        return std::max(worst_k, worst_p);
    });
    run_check(r, "susceptibility.born_markov_closed_form", 1e-8, "<=", [](std::string&) {
        ham::SpinSystemSpec sys;
        kernel::KernelToggles t;
        t.mode = kernel::Mode::BornMarkov;
        const chi::Solver solver(sys, ham::CouplingSpec{}, kReferenceBath, chi::make_response_pair("+-", 1), t);
        const auto phi = kernel::single_spin_phi(0.0, 0.0, kReferenceBath, true);
        const double tanh_factor = std::tanh(0.5 * kReferenceBath.beta);
        double worst = 0.0;
        for (double w : {0.9, 0.97, 1.0, 1.03, 1.1}) {
            const cplx closed = -tanh_factor / (w - 1.0 - 0.5 * I_unit * phi.phi4_zero);
            worst = std::max(worst, std::abs(solver.chi_at(w) - closed) / std::abs(closed));
        }
        return worst;
    });
    run_check(r, "bath.pv_cancellation", 1e-10, "<=", [](std::string&) {
        return std::abs(kernel::single_spin_phi(0.0, 0.0, kReferenceBath, true).phi4_zero.imag());
    });
    run_check(r, "susceptibility.solve_residual", 1e-10, "<=", [](std::string&) {
        double worst = 0.0;
        const chi::Solver s1(ham::SpinSystemSpec{}, ham::CouplingSpec{{0.6}, {0.2}}, kReferenceBath,
                             chi::make_response_pair("+-", 1), kernel::KernelToggles{});
        const chi::Solver s2(two_spin_spec(0.4), ham::CouplingSpec{}, bath::BathSpec{0.02, 0.5, 1.0},
                             chi::make_response_pair("xx", 2), kernel::KernelToggles{});
        for (double w = 0.5; w <= 1.5; w += 0.1) {
            chi::SolveDiagnostics d1, d2;
            s1.chi_at(w, &d1);
            s2.chi_at(w, &d2);
            worst = std::max({worst, d1.residual, d2.residual});
        }
        return worst;
    });
    run_check(r, "susceptibility.reality_pairing_xx", 1e-8, "<=", [](std::string&) {
        const chi::Solver s(two_spin_spec(0.7), ham::CouplingSpec{{0.3}, {0.1}}, bath::BathSpec{0.1, 0.5, 2.0},
                            chi::make_response_pair("xx", 2), kernel::KernelToggles{});
        double worst = 0.0;
        for (double w : {0.2, 0.6, 0.95, 1.0, 1.05, 1.8}) {
            const cplx p = s.chi_at(w), m = s.chi_at(-w);
            worst = std::max(worst, std::abs(m - std::conj(p)) / std::abs(p));
        }
        return worst;
    });
    run_check(r, "timedomain.trace_conservation", 1e-10, "<=", [](std::string&) {
        const chi::Solver s(two_spin_spec(0.5), ham::CouplingSpec{{0.4}, {0.0}}, bath::BathSpec{0.1, 0.5, 1.0},
                            chi::make_response_pair("xx", 2), kernel::KernelToggles{});
        td::PropagateOptions o;
        o.t_max = 8.0;
        const auto traj = td::propagate(s.context(), s.A_eig(), o);
        double worst = 0.0;
        for (const auto& x : traj.samples) worst = std::max(worst, std::abs(hs::devectorize(x).trace()));
        return worst;
    });
    run_check(r, "timedomain.anti_hermitian", 1e-8, "<=", [](std::string&) {
        const chi::Solver s(ham::SpinSystemSpec{}, ham::CouplingSpec{{0.8}, {0.3}}, kReferenceBath,
                            chi::make_response_pair("xx", 1), kernel::KernelToggles{});
        td::PropagateOptions o;
        o.t_max = 20.0;
        const auto traj = td::propagate(s.context(), s.A_eig(), o);
        double worst = 0.0, scale = 0.0;
        for (const auto& x : traj.samples) {
            const Matrix m = hs::devectorize(x);
            worst = std::max(worst, (m + m.adjoint()).cwiseAbs().maxCoeff());
            scale = std::max(scale, m.cwiseAbs().maxCoeff());
        }
        return worst / scale;
    });
}

void full_checks(Report& r) {
    run_check(r, "bath.half_fourier_vs_time_integral", 1e-4, "<=",
              [](std::string&) { return half_fourier_route_error(kReferenceBath, {0.8, 1.3}, 1.0); });
    run_check(r, "timedomain.kernel_laplace", 1e-3, "<=", [](std::string&) {
        const auto ctx = kernel::make_context(hs::pauli_half_z(), 0.6 * hs::pauli_half_x() + 0.8 * hs::pauli_half_z(),
                                              kReferenceBath);
        double worst = 0.0;
        for (double w : {0.9, 1.0})
            worst = std::max(worst, relative_error(td::kernel_laplace(w, ctx), kernel::memory_kernel_general(w, ctx)));
        return worst;
    });
    run_check(r, "timedomain.inhomogeneous_laplace", 1e-3, "<=", [](std::string&) {
        const auto ctx = kernel::make_context(hs::pauli_half_z(), 0.6 * hs::pauli_half_x() + 0.8 * hs::pauli_half_z(),
                                              kReferenceBath);
        const Matrix A = ctx.eig.to_eigenbasis(hs::spin_ops(1, 1).minus);
        return relative_error(td::inhomogeneous_laplace(1.2, ctx, A), kernel::inhomogeneous_general(1.2, ctx, A));
    });
    run_check(r, "timedomain.dual_route_single_spin", 0.02, "<=", [](std::string&) {
        const chi::Solver s(ham::SpinSystemSpec{}, ham::CouplingSpec{}, kReferenceBath, chi::make_response_pair("+-", 1),
                            kernel::KernelToggles{});
        return dual_route_error(s, {0.95, 0.98, 1.0145, 1.05, 1.08});
    });
    run_check(r, "timedomain.dual_route_two_spin", 0.05, "<=", [](std::string&) {
        const chi::Solver s(two_spin_spec(0.0), ham::CouplingSpec{}, bath::BathSpec{0.1, 0.5, 1.0},
                            chi::make_response_pair("xx", 2), kernel::KernelToggles{});
        return dual_route_error(s, {0.8, 0.9, 1.0, 1.1, 1.2});
    });
    run_check(r, "timedomain.step_halving_order", 1.9, ">=", [](std::string&) {
        const chi::Solver s(ham::SpinSystemSpec{}, ham::CouplingSpec{}, kReferenceBath, chi::make_response_pair("+-", 1),
                            kernel::KernelToggles{});
        return step_halving_order(s, 0.08, 20.0);
    });
}

} // namespace

Report run_validate(Level level) {
    Report r;
    r.level = level == Level::Quick ? "quick" : "full";
    r.version = LINESHAPE_VERSION;
    quick_checks(r);
    if (level == Level::Full) full_checks(r);
    return r;
}

} // namespace lineshape::validation
