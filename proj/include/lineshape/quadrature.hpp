// quadrature.hpp: Adaptive Gauss-Kronrod wrappers with explicit failure reporting

#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lineshape::quad {

struct Options {
    double abs_tol{1e-14};    // targets handed to the adaptive rule
    double rel_tol{1e-12};
    double accept_rel{1e-8};  // a run that stops early is still accepted when its error estimate
    double accept_abs{1e-10}; // is below max(accept_abs, accept_rel * |value|)
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved, double target)
        : std::runtime_error(what), achieved_error(achieved), target_error(target) {}
    double achieved_error;
    double target_error;
};

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<std::complex<double>(double)>;

// Integral over [a, b] split at every breakpoint lying strictly inside the interval.
double integrate(const RealFn& f, double a, double b, const std::vector<double>& breakpoints = {},
                 const Options& opts = {});
std::complex<double> integrate(const ComplexFn& f, double a, double b,
                               const std::vector<double>& breakpoints = {}, const Options& opts = {});

// Fixed Gauss-Legendre rule on [a, b] with `n` nodes.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n, double a, double b);

} // namespace lineshape::quad
