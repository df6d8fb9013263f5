#include <doctest.h>

#include <cmath>

#include "lineshape/hamiltonian.hpp"

using namespace lineshape;

namespace {

ham::SpinSystemSpec pair_spec(double theta, double D0 = 0.1, double J = -1.0) {
    ham::SpinSystemSpec s;
    s.num_spins = 2;
    s.J = J;
    s.D0 = D0;
    s.pairs = ham::two_spin_geometry(theta);
    return s;
}

} // namespace

TEST_CASE("single spin Zeeman levels") {
    ham::SpinSystemSpec s;
    s.omega0 = 1.3;
    const auto eig = ham::eigendecompose(ham::build_system_hamiltonian(s));
    CHECK(eig.energies(0) == doctest::Approx(-0.65));
    CHECK(eig.energies(1) == doctest::Approx(0.65));
    CHECK(eig.bohr(1, 0) == doctest::Approx(1.3));
    // ascending energy puts |-> first
    CHECK(std::abs(eig.basis(1, 0) - 1.0) < 1e-15);
}

TEST_CASE("pair coupling matrix") {
    const auto h = ham::pair_coupling_matrix(-1.0, 1.0, 0.1, ham::unit_vector(0.0, 0.0));
    // h_zz = -2 (J + D0 (1 - 1/3)), h_xx = -2 (J - D0/3)
    CHECK(h(2, 2) == doctest::Approx(-2.0 * (-1.0 + 0.1 * 2.0 / 3.0)));
    CHECK(h(0, 0) == doctest::Approx(-2.0 * (-1.0 - 0.1 / 3.0)));
    CHECK(h(0, 2) == doctest::Approx(0.0));
    // the dipolar part is traceless
    const auto d = ham::pair_coupling_matrix(0.0, 1.0, 0.3, ham::unit_vector(0.7, 0.4));
    CHECK(d.trace() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("two-spin eigen-energies match the closed form at theta = 0 and pi/2") {
    for (double theta : {0.0, M_PI / 2}) {
        const auto s = pair_spec(theta);
        const auto j = ham::effective_exchange(s.J, s.anisotropy_A, s.D0, theta);
        const auto an = ham::two_spin_analytic_eigensystem(0.5 * j[0], 0.5 * j[1], 0.5 * j[2], s.omega0);
        const Matrix H = ham::build_system_hamiltonian(s);
        for (int k = 0; k < 4; ++k) {
            const Vector v = an.states[k];
            const Vector hv = H * v;
            CHECK((hv - an.energies[k] * v).norm() < 1e-12);
            CHECK(std::abs(v.norm() - 1.0) < 1e-14);
        }
        const auto eig = ham::eigendecompose(H);
        std::array<double, 4> sorted = an.energies;
        std::sort(sorted.begin(), sorted.end());
        for (int k = 0; k < 4; ++k) CHECK(std::abs(eig.energies(k) - sorted[k]) < 1e-12);
    }
}

TEST_CASE("effective exchange requires a diagonal interaction") {
    CHECK_NOTHROW(ham::effective_exchange(-1.0, 1.0, 0.1, M_PI / 2));
    CHECK_THROWS(ham::effective_exchange(-1.0, 1.0, 0.1, 0.5));
}

TEST_CASE("energies of the pair at the two reference angles") {
    // E_b - E_c for J = -1, D0 = 0.1: 1.1 along the field, 0.95125 perpendicular.
    const auto e0 = ham::eigendecompose(ham::build_system_hamiltonian(pair_spec(0.0))).energies;
    const auto e1 = ham::eigendecompose(ham::build_system_hamiltonian(pair_spec(M_PI / 2))).energies;
    CHECK(e0(2) - e0(1) == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(e1(2) - e1(1) == doctest::Approx(0.9512492197250393).epsilon(1e-12));
}

TEST_CASE("triangle geometry") {
    const auto pairs = ham::triangle_geometry(M_PI / 2);
    REQUIRE(pairs.size() == 3);
    // every edge perpendicular to z once the face lies in the xy-plane
    for (const auto& p : pairs) CHECK(std::abs(std::cos(p.theta)) < 1e-12);
    const auto upright = ham::triangle_geometry(0.0);
    CHECK(upright[0].theta == doctest::Approx(0.0));
    CHECK(upright[1].theta == doctest::Approx(M_PI / 3));
}

TEST_CASE("coupling operator") {
    ham::SpinSystemSpec s;
    s.num_spins = 2;
    const Matrix X = ham::build_coupling_operator(s, ham::CouplingSpec{{M_PI / 2}, {0.0}});
    const auto tot = hs::total_spin_ops(2);
    CHECK((X - tot.x).norm() < 1e-14);
    const Matrix Z = ham::build_coupling_operator(s, ham::CouplingSpec{{0.0}, {1.0}});
    CHECK((Z - tot.z).norm() < 1e-14);
    CHECK_THROWS(ham::build_coupling_operator(s, ham::CouplingSpec{{0.1, 0.2, 0.3}, {0.0}}));
}

TEST_CASE("invalid system specifications") {
    ham::SpinSystemSpec s;
    s.num_spins = 9;
    CHECK_THROWS(ham::build_system_hamiltonian(s));
    ham::SpinSystemSpec d;
    d.num_spins = 2;
    d.D0 = 0.1;
    CHECK_THROWS(ham::build_system_hamiltonian(d));
}

TEST_CASE("degenerate clusters are ordered deterministically") {
    ham::SpinSystemSpec s;
    s.num_spins = 3;
    s.omega0 = 0.0;
    const auto eig = ham::eigendecompose(ham::build_system_hamiltonian(s) + Matrix::Zero(8, 8));
    // H = 0: the basis is the identity in product order
    CHECK((eig.basis - Matrix::Identity(8, 8)).norm() < 1e-14);
}

TEST_CASE("thermal populations") {
    RealVector e(3);
    e << -1.0, 0.0, 1.0;
    const auto p = ham::thermal_populations(e, 1.0);
    CHECK(p.sum() == doctest::Approx(1.0));
    CHECK(p(0) / p(1) == doctest::Approx(std::exp(1.0)));
    const auto g = ham::thermal_populations(e, std::numeric_limits<double>::infinity());
    CHECK(g(0) == doctest::Approx(1.0));
    const Matrix rho = ham::thermal_state(ham::build_system_hamiltonian(ham::SpinSystemSpec{}), 5.0);
    CHECK(std::real(rho.trace()) == doctest::Approx(1.0));
    CHECK(std::real(rho(1, 1) / rho(0, 0)) == doctest::Approx(std::exp(5.0)));
}
