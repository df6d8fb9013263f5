#include <doctest.h>

#include <cmath>

#include "lineshape/bath.hpp"

using namespace lineshape::bath;
using cplx = std::complex<double>;

namespace {

// Reference values from an independent arbitrary-precision evaluation
// (s = 0.1, omega_c = 0.5, beta = 5 unless stated).
void check_close(cplx got, cplx want, double tol) {
    INFO("got " << got << " want " << want);
    CHECK(std::abs(got - want) <= tol * std::abs(want));
}

} // namespace

TEST_CASE("spectral density and detailed balance") {
    const BathSpec b{};
    CHECK(bath_spectrum_J(0.0, b) == doctest::Approx(b.s / b.beta));
    for (double w : {0.01, 0.3, 1.0, 2.5}) {
        CHECK(bath_spectrum_J(-w, b) == doctest::Approx(std::exp(-b.beta * w) * bath_spectrum_J(w, b)).epsilon(1e-13));
        CHECK(bath_spectrum_J(w, b) == doctest::Approx(ohmic_I(w, b) * (bose_n(w, b.beta) + 1.0)).epsilon(1e-13));
    }
    // continuity through zero
    CHECK(bath_spectrum_J(1e-9, b) == doctest::Approx(b.s / b.beta).epsilon(1e-8));
    CHECK(kappa_i(0.0, 2.0) == doctest::Approx(2.0));
    CHECK(kappa_i(1e-7, 2.0) == doctest::Approx(-std::expm1(-2e-7) / 1e-7).epsilon(1e-12));
}

TEST_CASE("bath parameter validation") {
    CHECK_THROWS(BathSpec{-0.1, 0.5, 5.0}.validate());
    CHECK_THROWS(BathSpec{0.1, 0.0, 5.0}.validate());
    CHECK_THROWS(BathSpec{0.1, 0.5, -1.0}.validate());
    CHECK_NOTHROW(BathSpec{0.0, 0.5, 5.0}.validate());
}

TEST_CASE("trigamma against reference values") {
    check_close(trigamma({1.0, 1.0}), {0.46300009662276379, -0.79423354275931887}, 1e-13);
    check_close(trigamma({0.3, -2.0}), {-0.053127583205179119, 0.50591239052800669}, 1e-12);
    check_close(trigamma({-2.5, 0.1}), {8.6261906773959992, -0.010809084016005464}, 1e-12);
    CHECK(trigamma({1.0, 0.0}).real() == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-14));
}

TEST_CASE("closed-form correlation function against reference values") {
    const BathSpec b{};
    check_close(phi_analytic(0.0, b), {0.033202852724236782, 0.0}, 1e-13);
    check_close(phi_analytic(1.3, b), {0.014869797243654757, -0.016061230352018928}, 1e-12);
    check_close(phi_analytic(cplx(-1.0, -2.0), b), {0.014172481764022214, 0.0013817020789446557}, 1e-12);
    // Phi(-t) = conj(Phi(t))
    check_close(phi_analytic(-2.7, b), std::conj(phi_analytic(2.7, b)), 1e-14);
    // outside the analyticity strip
    CHECK_THROWS(phi_analytic(cplx(0.0, 3.0), b));
}

TEST_CASE("quadrature routes reproduce the closed form") {
    const BathSpec b{};
    for (double t : {0.0, 0.4, 3.0, 11.0}) {
        const cplx ref = phi_analytic(t, b);
        CHECK(std::abs(phi_quadrature(t, b) - ref) < 1e-9 * std::abs(phi_analytic(0.0, b)));
        CHECK(std::abs(phi_from_spectrum(t, b) - ref) < 1e-9 * std::abs(phi_analytic(0.0, b)));
    }
}

TEST_CASE("principal-value transform of the spectrum") {
    const BathSpec b{};
    const double wmax = cutoff_frequency(b);
    CHECK(pv_spectrum(0.0, b, wmax) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(pv_spectrum(0.7, b, wmax) == doctest::Approx(-0.015439612637983214).epsilon(1e-9));
    CHECK(pv_spectrum(-0.3, b, wmax) == doctest::Approx(0.049987520619710202).epsilon(1e-9));
}

TEST_CASE("principal-value integral by pole subtraction") {
    // PV int_{-1}^{2} du / (u - 0.5) = ln(1.5 / 1.5) = 0
    auto one = [](double) { return 1.0; };
    CHECK(std::abs(pv_integral(one, 0.5, -1.0, 2.0)) < 1e-13);
    // PV int_0^1 u^2 / (u - 0.25) du = 1/2 + 1/4 + (1/16) ln 3
    auto sq = [](double u) { return u * u; };
    CHECK(pv_integral(sq, 0.25, 0.0, 1.0) == doctest::Approx(0.75 + std::log(3.0) / 16.0).epsilon(1e-12));
    // pole outside the interval: ordinary integral ln 2
    CHECK(pv_integral(one, -1.0, 0.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
    CHECK_THROWS(pv_integral(one, 1.0, 0.0, 1.0));
}

TEST_CASE("resolvents agree with damped time integrals") {
    const BathSpec b{};
    const double wmax = cutoff_frequency(b, 2.0);
    for (double nu : {-1.1, 0.2, 0.9}) {
        const cplx G = resolvent_G(nu, b, wmax).combined();
        const cplx Gs = resolvent_Gs(nu, b, wmax).combined();
        check_close(damped_time_transform(nu, b, false), G, 1e-6);
        check_close(damped_time_transform(nu, b, true), Gs, 1e-6);
    }
}

TEST_CASE("frequency-shift toggle drops only the principal part") {
    const BathSpec b{};
    const double wmax = cutoff_frequency(b, 2.0);
    const auto with = resolvent_G(0.4, b, wmax, true);
    const auto without = resolvent_G(0.4, b, wmax, false);
    CHECK(with.delta_part == without.delta_part);
    CHECK(without.pv_part == 0.0);
    CHECK(inhomogeneous_resolvent(0.4, 1.0, b, wmax, false).imag() == 0.0);
}

TEST_CASE("inhomogeneous resolvent from the full line and the half line") {
    const BathSpec b{};
    const double wmax = cutoff_frequency(b, 2.0);
    for (auto [nu, W] : {std::pair{0.3, 1.0}, std::pair{-0.8, -1.0}, std::pair{1.9, 0.0}}) {
        const cplx full = inhomogeneous_resolvent(nu, W, b, wmax);
        const cplx half = inhomogeneous_resolvent_half_line(nu, W, b, wmax);
        CHECK(std::abs(full - half) < 1e-9 * std::max(1.0, std::abs(full)));
    }
}

TEST_CASE("half-Fourier transforms split into on-shell and principal parts") {
    const BathSpec b{};
    const auto F = half_fourier_F(+1, 0.9, 1.0, b);
    const auto F0 = half_fourier_F(+1, 0.9, 1.0, b, false);
    CHECK(F.delta_part == doctest::Approx(F0.delta_part));
    CHECK(F0.pv_part == 0.0);
    CHECK(F.delta_part > 0.0);
}

TEST_CASE("inhomogeneous resolvent stays finite for a cold bath with a wide cutoff") {
    const BathSpec b{0.2, 1.9, 8.9};
    const double wmax = cutoff_frequency(b, 1.0);
    const cplx full = inhomogeneous_resolvent(0.47, 1.0, b, wmax);
    const cplx half = inhomogeneous_resolvent_half_line(0.47, 1.0, b, wmax);
    REQUIRE(std::isfinite(full.real()));
    REQUIRE(std::isfinite(half.imag()));
    CHECK(std::abs(full - half) < 1e-9 * std::abs(full));
}

TEST_CASE("damped transform at zero frequency") {
    const BathSpec b{};
    const double wmax = cutoff_frequency(b);
    const cplx G = resolvent_G(0.0, b, wmax).combined();
    check_close(damped_time_transform(0.0, b, false), G, 1e-6);
}
