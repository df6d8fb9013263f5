// bath.cpp: Ohmic bosonic bath: spectra, correlation function, half-Fourier transforms, kappa factors

#include "lineshape/bath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lineshape::bath {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Poles closer than this to zero are folded into a single regular integrand.
constexpr double kEndpointPole = 1e-12;

double resolve_cutoff(const BathSpec& b, double omega_max, double nu) {
    return omega_max > 0.0 ? omega_max : cutoff_frequency(b, std::abs(nu));
}

std::vector<double> oscillation_breaks(double a, double b, double t) {
    std::vector<double> pts;
    if (std::abs(t) < 1e-12) return pts;
    const double width = 8.0 * kPi / std::abs(t);
    for (double x = a + width; x < b; x += width) pts.push_back(x);
    return pts;
}

} // namespace

void BathSpec::validate() const {
    if (!(s >= 0.0)) throw std::invalid_argument("bath: s must be >= 0");
    if (!(omega_c > 0.0)) throw std::invalid_argument("bath: omega_c must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("bath: beta must be > 0");
}

double ohmic_I(double omega, const BathSpec& b) {
    if (omega < 0.0) throw std::domain_error("ohmic_I: negative frequency");
    return b.s * omega * std::exp(-omega / b.omega_c);
}

double bose_n(double omega, double beta) {
    if (omega == 0.0) throw std::domain_error("bose_n: omega = 0 has no finite occupation");
    return 1.0 / std::expm1(beta * omega);
}

double bath_spectrum_J(double omega, const BathSpec& b) {
    if (std::abs(omega) < 1e-300) return b.s / b.beta;
    // x/(1 - e^{-beta x}) covers both branches of the step-function form.
    const double bx = b.beta * omega;
    double ratio;
    if (std::abs(bx) < 1e-8) {
        ratio = (1.0 + 0.5 * bx) / b.beta;
    } else {
        ratio = omega / (-std::expm1(-bx));
    }
    return b.s * std::exp(-std::abs(omega) / b.omega_c) * ratio;
}

double kappa_i(double omega, double beta) {
    if (std::abs(omega) < 1e-8) return beta - 0.5 * beta * beta * omega + beta * beta * beta * omega * omega / 6.0;
    return -std::expm1(-beta * omega) / omega;
}

cplx trigamma(cplx z) {
    const double re = z.real();
    const double im = z.imag();
    if (im == 0.0 && re <= 0.0 && std::abs(re - std::round(re)) < 1e-14)
        throw std::domain_error("trigamma: pole at non-positive integer " + std::to_string(re));

    if (re < 0.5 && std::abs(im) <= 20.0) {
        const cplx sp = std::sin(kPi * z);
        return kPi * kPi / (sp * sp) - trigamma(1.0 - z);
    }

    cplx acc = 0.0;
    while (z.real() < 10.0) {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    const cplx w = 1.0 / z;
    const cplx w2 = w * w;
    // 1/z + 1/(2z^2) + sum_k B_{2k} / z^{2k+1}
    static constexpr double B[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0};
    cplx series = 0.0;
    for (int k = 6; k >= 0; --k) series = series * w2 + B[k];
    series *= w * w2;
    return acc + w + 0.5 * w2 + series;
}

cplx phi_analytic(cplx tau, const BathSpec& b) {
    const double upper = 0.9 / b.omega_c;
    const double lower = -(b.beta + 0.9 / b.omega_c);
    if (!(tau.imag() < upper && tau.imag() > lower))
        throw std::domain_error("phi_analytic: Im(tau) = " + std::to_string(tau.imag()) +
                                " outside the analyticity strip (" + std::to_string(lower) + ", " +
                                std::to_string(upper) + ")");
    const cplx i(0.0, 1.0);
    const cplx d = 1.0 + i * b.omega_c * tau;
    const cplx zero_point = b.s * b.omega_c * b.omega_c / (d * d);
    const double a = 1.0 + 1.0 / (b.beta * b.omega_c);
    const cplx thermal = (b.s / (b.beta * b.beta)) *
                         (trigamma(a + i * tau / b.beta) + trigamma(a - i * tau / b.beta));
    return zero_point + thermal;
}

double cutoff_frequency(const BathSpec& b, double max_bohr) {
    return std::max(40.0 * b.omega_c, 10.0 * std::abs(max_bohr) + 40.0 * b.omega_c);
}

cplx phi_quadrature(double t, const BathSpec& b, double omega_max) {
    const double W = omega_max > 0.0 ? omega_max : cutoff_frequency(b);
    auto f = [&](double w) -> cplx {
        const cplx e = std::polar(1.0, -w * t);
        return bath_spectrum_J(w, b) * e + bath_spectrum_J(-w, b) * std::conj(e);
    };
    return quad::integrate(quad::ComplexFn(f), 0.0, W, oscillation_breaks(0.0, W, t));
}

cplx phi_from_spectrum(double t, const BathSpec& b, double omega_max) {
    const double W = omega_max > 0.0 ? omega_max : cutoff_frequency(b);
    auto f = [&](double u) -> cplx { return bath_spectrum_J(u, b) * std::polar(1.0, -u * t); };
    auto brk = oscillation_breaks(-W, W, t);
    brk.push_back(0.0);
    return quad::integrate(quad::ComplexFn(f), -W, W, brk);
}

double pv_integral(const std::function<double(double)>& f, double pole, double a, double b,
                   const std::vector<double>& breakpoints, const quad::Options& opts) {
    if (!(a < b)) throw std::invalid_argument("pv_integral: require a < b");
    const double edge = 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    if (std::abs(pole - a) < edge || std::abs(pole - b) < edge)
        throw std::domain_error("pv_integral: pole " + std::to_string(pole) + " lies at an integration endpoint");

    if (pole < a || pole > b) {
        auto g = [&](double u) { return f(u) / (u - pole); };
        return quad::integrate(quad::RealFn(g), a, b, breakpoints, opts);
    }

    // Pole subtraction on the symmetric window [pole - h, pole + h]: the f(pole) terms of the two
    // halves cancel, leaving the regular integrand (f(pole + t) - f(pole - t)) / t on [0, h].
    const double h = std::min(pole - a, b - pole);
    auto folded = [&](double t) { return t == 0.0 ? 0.0 : (f(pole + t) - f(pole - t)) / t; };
    std::vector<double> folded_breaks;
    for (double x : breakpoints) {
        const double c = std::abs(x - pole);
        if (c >= h) continue;
        folded_breaks.push_back(c);
        // A kink close to the pole leaves a c/t layer behind it; grade the mesh geometrically.
        for (double d = 0.1 * c; c > 0.0 && c + d < h; d *= 10.0) folded_breaks.push_back(c + d);
    }
    double total = quad::integrate(quad::RealFn(folded), 0.0, h, folded_breaks, opts);

    // Remaining one-sided piece, again with f(pole) subtracted and its logarithm added back.
    const double lo = (pole - a > b - pole) ? a : pole + h;
    const double hi = (pole - a > b - pole) ? pole - h : b;
    if (hi > lo) {
        const double fp = f(pole);
        auto g = [&](double u) { return (f(u) - fp) / (u - pole); };
        total += quad::integrate(quad::RealFn(g), lo, hi, breakpoints, opts);
        total += fp * std::log(std::abs((hi - pole) / (lo - pole)));
    }
    return total;
}

double pv_spectrum(double x, const BathSpec& b, double omega_max) {
    auto J = [&](double u) { return bath_spectrum_J(u, b); };
    return pv_integral(J, x, -omega_max, omega_max, {0.0});
}

HalfFourierValue resolvent_G(double nu, const BathSpec& b, double omega_max, bool include_shift) {
    HalfFourierValue v;
    v.delta_part = kPi * bath_spectrum_J(-nu, b);
    if (include_shift) v.pv_part = pv_spectrum(-nu, b, omega_max);
    return v;
}

HalfFourierValue resolvent_Gs(double nu, const BathSpec& b, double omega_max, bool include_shift) {
    HalfFourierValue v;
    v.delta_part = kPi * bath_spectrum_J(nu, b);
    if (include_shift) v.pv_part = -pv_spectrum(nu, b, omega_max);
    return v;
}

namespace {

// J(u) kappa_i(u - W) without the 0 * inf that the two factors produce separately at large |u|.
double spectrum_times_kappa(double u, double W, const BathSpec& b) {
    if (std::abs(u) < 1e-8 || std::abs(u - W) < 1e-8) return bath_spectrum_J(u, b) * kappa_i(u - W, b.beta);
    const double ratio = u > 0.0 ? std::expm1(-b.beta * (u - W)) / std::expm1(-b.beta * u)
                                 : std::exp(b.beta * W) * std::expm1(b.beta * (u - W)) / std::expm1(b.beta * u);
    return b.s * std::exp(-std::abs(u) / b.omega_c) * u / (u - W) * ratio;
}

} // namespace

cplx inhomogeneous_resolvent(double nu, double Omega, const BathSpec& b, double omega_max, bool include_shift) {
    const double on_shell = kPi * spectrum_times_kappa(nu, Omega, b);
    if (!include_shift) return {on_shell, 0.0};
    auto f = [&](double u) { return spectrum_times_kappa(u, Omega, b); };
    const double pv = pv_integral(f, nu, -omega_max, omega_max, {0.0});
    return {on_shell, pv};
}

namespace {

// PV over [0, W] of f_plus(w)/(w - nu) - f_minus(w)/(w + nu), folding the pair when nu -> 0.
double half_line_pair(const std::function<double(double)>& f_plus, const std::function<double(double)>& f_minus,
                      double nu, double W, const std::vector<double>& breakpoints) {
    if (std::abs(nu) < kEndpointPole) {
        auto g = [&](double w) { return (f_plus(w) - f_minus(w)) / w; };
        return quad::integrate(quad::RealFn(g), 0.0, W, breakpoints);
    }
    return pv_integral(f_plus, nu, 0.0, W, breakpoints) - pv_integral(f_minus, -nu, 0.0, W, breakpoints);
}

// P(nu) = PV int_0^W [ I(n+1)/(w + nu) - I n/(w - nu) ] dw.
double half_line_shift(double nu, const BathSpec& b, double W) {
    // Mode weights switch to the J limit near w = 0, where n(w) itself diverges.
    auto emit = [&](double w) {
        return w < 1e-8 ? bath_spectrum_J(w, b) : ohmic_I(w, b) * (bose_n(w, b.beta) + 1.0);
    };
    auto absorb = [&](double w) { return w < 1e-8 ? bath_spectrum_J(-w, b) : ohmic_I(w, b) * bose_n(w, b.beta); };
    return -half_line_pair(absorb, emit, nu, W, {});
}

} // namespace

HalfFourierValue half_fourier_F(int sign, double omega, double omega0, const BathSpec& b, bool include_shift,
                                double omega_max) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("half_fourier_F: sign must be +1 or -1");
    const double nu = omega - sign * omega0;
    const double W = resolve_cutoff(b, omega_max, nu);
    HalfFourierValue v;
    // On-shell weight: emission branch I(n+1) when nu < 0, absorption branch I n when nu > 0.
    if (nu < 0.0) {
        v.delta_part = kPi * ohmic_I(-nu, b) * (bose_n(-nu, b.beta) + 1.0);
    } else if (nu > 0.0) {
        v.delta_part = kPi * ohmic_I(nu, b) * bose_n(nu, b.beta);
    } else {
        v.delta_part = kPi * b.s / b.beta;
    }
    if (std::abs(nu) < 1e-8) v.delta_part = kPi * bath_spectrum_J(-nu, b);
    if (include_shift) v.pv_part = half_line_shift(nu, b, W);
    return v;
}

HalfFourierValue half_fourier_Fs(int sign, double omega, double omega0, const BathSpec& b, bool include_shift,
                                 double omega_max) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("half_fourier_Fs: sign must be +1 or -1");
    const double nu = omega - sign * omega0;
    const double W = resolve_cutoff(b, omega_max, nu);
    HalfFourierValue v;
    if (nu > 0.0) {
        v.delta_part = kPi * ohmic_I(nu, b) * (bose_n(nu, b.beta) + 1.0);
    } else if (nu < 0.0) {
        v.delta_part = kPi * ohmic_I(-nu, b) * bose_n(-nu, b.beta);
    } else {
        v.delta_part = kPi * b.s / b.beta;
    }
    if (std::abs(nu) < 1e-8) v.delta_part = kPi * bath_spectrum_J(nu, b);
    if (include_shift) v.pv_part = -half_line_shift(-nu, b, W);
    return v;
}

cplx inhomogeneous_resolvent_half_line(double nu, double Omega, const BathSpec& b, double omega_max,
                                       bool include_shift) {
    double on_shell;
    if (nu > 1e-8) {
        on_shell = ohmic_I(nu, b) * (bose_n(nu, b.beta) + 1.0);
    } else if (nu < -1e-8) {
        on_shell = ohmic_I(-nu, b) * bose_n(-nu, b.beta);
    } else {
        on_shell = bath_spectrum_J(nu, b);
    }
    on_shell *= kPi * kappa_i(nu - Omega, b.beta);
    if (!include_shift) return {on_shell, 0.0};

    auto emit = [&](double w) {
        const double weight = w < 1e-8 ? bath_spectrum_J(w, b) : ohmic_I(w, b) * (bose_n(w, b.beta) + 1.0);
        return weight * kappa_i(w - Omega, b.beta);
    };
    auto absorb = [&](double w) {
        if (w < 1e-8 || std::abs(w + Omega) < 1e-6)
            return (w < 1e-8 ? bath_spectrum_J(-w, b) : ohmic_I(w, b) * bose_n(w, b.beta)) *
                   kappa_i(-w - Omega, b.beta);
        // n(w) kappa_i(-w - W) = (e^{beta W} - e^{-beta w}) / ((1 - e^{-beta w}) (w + W))
        return ohmic_I(w, b) * (std::exp(b.beta * Omega) - std::exp(-b.beta * w)) /
               (-std::expm1(-b.beta * w) * (w + Omega));
    };
    return {on_shell, half_line_pair(emit, absorb, nu, omega_max, {})};
}

cplx damped_time_transform(double nu, const BathSpec& b, bool conjugate_phi, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("damped_time_transform: epsilon must be > 0");
    const double phi0 = std::abs(phi_analytic(0.0, b));
    // Close to nu = 0 the transform carries eps*log(eps) terms that the extrapolation cannot remove.
    epsilon = std::min(epsilon, std::max(0.1 * std::abs(nu), 1e-7));
    auto transform = [&](double eps) {
        auto f = [&](double t) -> cplx {
            cplx p = phi_analytic(t, b);
            if (conjugate_phi) p = std::conj(p);
            return p * std::exp(cplx(-eps * t, -nu * t));
        };
        cplx total = 0.0;
        double t = 0.0;
        for (int chunk = 0; chunk < 10'000'000; ++chunk) {
            double len = 0.25 * t + 1.0;
            if (std::abs(nu) > 1e-9) len = std::min(len, 4.0 * kPi / std::abs(nu));
            total += quad::integrate(quad::ComplexFn(f), t, t + len);
            t += len;
            const double tail = std::exp(-eps * t) * std::abs(phi_analytic(t, b)) * std::max(t, 1.0 / eps);
            if (tail < 1e-14 * phi0) return total;
        }
        throw std::runtime_error("damped_time_transform: tail did not decay");
    };
    const cplx l1 = transform(epsilon);
    const cplx l2 = transform(0.5 * epsilon);
    const cplx l4 = transform(0.25 * epsilon);
    return (8.0 * l4 - 6.0 * l2 + l1) / 3.0;
}

} // namespace lineshape::bath
