// quadrature.cpp: Adaptive Gauss-Kronrod wrappers with explicit failure reporting

#include "lineshape/quadrature.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace lineshape::quad {

namespace {

constexpr std::size_t kWorkspaceLimit = 4000;

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

gsl_integration_workspace* thread_workspace() {
    thread_local std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(kWorkspaceLimit));
    return ws.get();
}

struct ErrorHandlerGuard {
    ErrorHandlerGuard() { gsl_set_error_handler_off(); }
};

std::vector<double> segment_points(double a, double b, const std::vector<double>& breakpoints) {
    std::vector<double> pts{a};
    for (double x : breakpoints)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double trampoline(double x, void* params) {
    return (*static_cast<const RealFn*>(params))(x);
}

struct Segment {
    double value;
    double error;
};

Segment qag(const RealFn& f, double a, double b, const Options& opts) {
    static ErrorHandlerGuard guard;
    gsl_function F;
    F.function = &trampoline;
    F.params = const_cast<RealFn*>(&f);
    double value = 0.0;
    double error = 0.0;
    const int status = gsl_integration_qag(&F, a, b, opts.abs_tol, opts.rel_tol, kWorkspaceLimit,
                                           GSL_INTEG_GAUSS31, thread_workspace(), &value, &error);
    const double target = std::max(opts.accept_abs, opts.accept_rel * std::abs(value));
    if (!std::isfinite(value) || (status != GSL_SUCCESS && !(error <= target)))
    {
        char msg[256];
        std::snprintf(msg, sizeof msg, "adaptive quadrature failed on [%.17g, %.17g]: %s (value %.6e, error %.3e, target %.3e)",
                      a, b, gsl_strerror(status), value, error, target);
        throw QuadratureError(msg, error, target);
    }
    return {value, error};
}

} // namespace

double integrate(const RealFn& f, double a, double b, const std::vector<double>& breakpoints, const Options& opts) {
    if (!(a <= b)) throw std::invalid_argument("integrate: require a <= b");
    if (a == b) return 0.0;
    const auto pts = segment_points(a, b, breakpoints);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) total += qag(f, pts[k], pts[k + 1], opts).value;
    return total;
}

std::complex<double> integrate(const ComplexFn& f, double a, double b, const std::vector<double>& breakpoints,
                               const Options& opts) {
    const RealFn re = [&](double x) { return f(x).real(); };
    const RealFn im = [&](double x) { return f(x).imag(); };
    return {integrate(re, a, b, breakpoints, opts), integrate(im, a, b, breakpoints, opts)};
}

GaussLegendre gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)), &gsl_integration_glfixed_table_free);
    GaussLegendre rule;
    for (int i = 0; i < n; ++i) {
        double x = 0.0;
        double w = 0.0;
        gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &x, &w, table.get());
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
    }
    return rule;
}

} // namespace lineshape::quad
