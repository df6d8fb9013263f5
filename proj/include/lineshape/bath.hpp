// bath.hpp: Ohmic bosonic bath: spectra, correlation function, half-Fourier transforms, kappa factors

#pragma once

#include <complex>
#include <functional>

#include "lineshape/quadrature.hpp"

namespace lineshape::bath {

using cplx = std::complex<double>;

struct BathSpec {
    double s{0.1};       // dimensionless coupling strength
    double omega_c{0.5}; // cutoff frequency
    double beta{5.0};    // inverse temperature

    void validate() const;
};

// s * w * exp(-w / omega_c) for w >= 0.
double ohmic_I(double omega, const BathSpec& b);

// 1 / (exp(beta w) - 1), continued to w < 0 as -(n(-w) + 1).
double bose_n(double omega, double beta);

// I(w)(n(w)+1) for w > 0, I(-w) n(-w) for w < 0, s/beta at w = 0.
double bath_spectrum_J(double omega, const BathSpec& b);

// (1 - exp(-beta w)) / w with the series limit near w = 0.
double kappa_i(double omega, double beta);

// Trigamma of complex argument (recurrence to Re z >= 10, then asymptotic series).
cplx trigamma(cplx z);

// Closed-form correlation function; complex arguments are the analytic continuation, valid in the
// strip -(beta + 1/omega_c) < Im tau < 1/omega_c. Arguments too close to the strip edge throw.
cplx phi_analytic(cplx tau, const BathSpec& b);
inline cplx phi_analytic(double t, const BathSpec& b) { return phi_analytic(cplx(t, 0.0), b); }

// Correlation function by adaptive quadrature of the mode sum on [0, omega_max].
cplx phi_quadrature(double t, const BathSpec& b, double omega_max = 0.0);

// Same function written as the full-line transform of J over [-omega_max, omega_max].
cplx phi_from_spectrum(double t, const BathSpec& b, double omega_max = 0.0);

// Integration cutoff max(40 omega_c, 10 max|Bohr| + 40 omega_c).
double cutoff_frequency(const BathSpec& b, double max_bohr = 0.0);

// Principal value of the integral of f(u)/(u - pole) over [a, b] by pole subtraction. A pole outside
// [a, b] reduces to ordinary quadrature. Throws when the pole lies within 1e-12 of an endpoint.
double pv_integral(const std::function<double(double)>& f, double pole, double a, double b,
                   const std::vector<double>& breakpoints = {}, const quad::Options& opts = {});

struct HalfFourierValue {
    double delta_part{0.0}; // pi * J at the on-shell frequency
    double pv_part{0.0};    // principal-value integral, entering with factor -i
    cplx combined() const { return cplx(delta_part, -pv_part); }
};

// F_{+/-}[w, w0] = integral_0^inf dt Phi(t) exp(i(+/-w0 - w)t) and the analogue with conj(Phi),
// evaluated from the positive-frequency mode integrals. sign is +1 or -1.
HalfFourierValue half_fourier_F(int sign, double omega, double omega0, const BathSpec& b,
                                bool include_shift = true, double omega_max = 0.0);
HalfFourierValue half_fourier_Fs(int sign, double omega, double omega0, const BathSpec& b,
                                 bool include_shift = true, double omega_max = 0.0);

// Full-line building blocks used by the eigenbasis kernel.
//   G(nu)  = integral_0^inf Phi(t) exp(-i nu t) dt       = pi J(-nu) - i PV int J(u)/(u + nu) du
//   Gs(nu) = integral_0^inf conj(Phi(t)) exp(-i nu t) dt = pi J(nu)  + i PV int J(u)/(u - nu) du
//   H(nu, W) = pi J(nu) kappa_i(nu - W) + i PV int J(u) kappa_i(u - W)/(u - nu) du
double pv_spectrum(double x, const BathSpec& b, double omega_max);
HalfFourierValue resolvent_G(double nu, const BathSpec& b, double omega_max, bool include_shift = true);
HalfFourierValue resolvent_Gs(double nu, const BathSpec& b, double omega_max, bool include_shift = true);
cplx inhomogeneous_resolvent(double nu, double Omega, const BathSpec& b, double omega_max, bool include_shift = true);

// The same inhomogeneous resolvent assembled from positive-frequency mode integrals only.
cplx inhomogeneous_resolvent_half_line(double nu, double Omega, const BathSpec& b, double omega_max,
                                       bool include_shift = true);

// Damped time-integral of Phi(t) exp(-i nu t) (or of conj(Phi)) extrapolated to zero damping from
// epsilon, epsilon/2, epsilon/4. Near nu = 0 epsilon is lowered to |nu|/10 (not below 1e-7).
cplx damped_time_transform(double nu, const BathSpec& b, bool conjugate_phi, double epsilon = 1e-3);

} // namespace lineshape::bath
