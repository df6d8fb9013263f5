// acceptance.cpp: End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lineshape/config.hpp"
#include "lineshape/hamiltonian.hpp"
#include "lineshape/runner.hpp"
#include "lineshape/susceptibility.hpp"
#include "lineshape/validate.hpp"

using namespace lineshape;

namespace {

struct Outcome {
    bool passed{false};
    std::string detail;
};

std::string presets;

cli::RunConfig preset(const std::string& name) { return cli::parse_config(presets + "/" + name + ".ini"); }

std::vector<double> chi_pp(const cli::ResultTable& t) {
    std::vector<double> y;
    y.reserve(t.chi.size());
    for (const auto& c : t.chi) y.push_back(-c.imag());
    return y;
}

double argmax_x(const cli::ResultTable& t) {
    const auto y = chi_pp(t);
    std::size_t best = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if (y[i] > y[best]) best = i;
    return t.x[best];
}

const chi::Peak& tallest(const std::vector<chi::Peak>& peaks) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < peaks.size(); ++i)
        if (peaks[i].height > peaks[best].height) best = i;
    return peaks[best];
}

std::vector<chi::Peak> peaks_of(const cli::ResultTable& t) { return chi::peak_analysis(t.x, chi_pp(t)); }

std::string positions(const std::vector<chi::Peak>& peaks) {
    std::ostringstream o;
    o << "[";
    for (std::size_t i = 0; i < peaks.size(); ++i) o << (i ? " " : "") << peaks[i].position;
    o << "]";
    return o.str();
}

std::string num(double v, int digits = 4) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

Outcome kernel_oracle() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> w(0.2, 2.0), L(0.0, M_PI / 2), beta(0.5, 10.0), s(0.01, 0.3), wc(0.2, 2.0);
    double worst_k = 0.0, worst_s = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double omega = w(rng), Lambda = L(rng);
        const bath::BathSpec b{s(rng), wc(rng), beta(rng)};
        const auto [ek, es] = validation::single_spin_oracle(omega, Lambda, b);
        worst_k = std::max(worst_k, ek);
        worst_s = std::max(worst_s, es);
    }
    return {worst_k <= 1e-8 && worst_s <= 1e-8,
            "kernel " + num(worst_k) + ", source " + num(worst_s) + " (limit 1e-8)"};
}

Outcome bath_triangle() {
    const bath::BathSpec b{0.1, 0.5, 5.0};
    const double phi = validation::phi_route_error(b, 81, 20.0 / b.omega_c);
    const double hf = validation::half_fourier_route_error(b, {0.6, 0.9, 1.0, 1.1, 1.4}, 1.0);
    return {phi <= 1e-6 && hf <= 1e-4, "Phi routes " + num(phi) + " (limit 1e-6), F/Fs routes " + num(hf) + " (limit 1e-4)"};
}

Outcome kms() {
    double worst = 0.0;
    for (const auto& b : {bath::BathSpec{0.1, 0.5, 5.0}, bath::BathSpec{0.02, 0.5, 1.0}, bath::BathSpec{0.3, 2.0, 0.3}})
        worst = std::max(worst, validation::kms_error(b, 100));
    return {worst <= 1e-12, "max relative deviation " + num(worst) + " (limit 1e-12)"};
}

Outcome born_markov() {
    const bath::BathSpec b{0.1, 0.5, 5.0};
    kernel::KernelToggles t;
    t.mode = kernel::Mode::BornMarkov;
    const chi::Solver solver(ham::SpinSystemSpec{}, ham::CouplingSpec{}, b, chi::make_response_pair("+-", 1), t);
    const auto phi = kernel::single_spin_phi(0.0, 0.0, b, true);
    const double hwhm = 0.5 * phi.phi4_zero.real();
    double worst = 0.0;
    for (double w : {0.9, 0.95, 0.99, 1.0, 1.01, 1.05, 1.1}) {
        const cplx closed = -std::tanh(0.5 * b.beta) / (w - 1.0 - I_unit * hwhm);
        worst = std::max(worst, std::abs(solver.chi_at(w) - closed) / std::abs(closed));
    }
    const double pv = std::abs(phi.phi4_zero.imag());
    return {worst <= 1e-8 && pv <= 1e-10,
            "Lorentzian deviation " + num(worst) + " (HWHM " + num(hwhm, 6) + "), |Im phi4| " + num(pv)};
}

Outcome toggle_behavior() {
    double off_dev = 0.0;
    double shift[3] = {0.0, 0.0, 0.0};
    const char* names[3] = {"fig2", "fig3", "fig4"};
    std::string detail;
    for (int k = 0; k < 3; ++k) {
        const auto tables = cli::run_compare(preset(names[k]));
        // order: on/on, ic off, fs off, off/off
        const double on = argmax_x(tables[0]);
        const double off = argmax_x(tables[3]);
        off_dev = std::max(off_dev, std::abs(off - 1.0));
        shift[k] = on - 1.0;
        detail += std::string(names[k]) + " on/on " + num(on, 6) + " off/off " + num(off, 6) + "; ";
    }
    const bool ok = off_dev <= 0.005 && shift[0] > 0.0 && std::abs(shift[0]) > std::abs(shift[2]);
    return {ok, detail + "shift(0) " + num(shift[0]) + " vs shift(pi/2) " + num(shift[2])};
}

Outcome width_ordering() {
    const auto tables = cli::run_spectrum(preset("fig1"));
    double fwhm[3];
    for (int k = 0; k < 3; ++k) fwhm[k] = tallest(peaks_of(tables[k])).fwhm;
    return {fwhm[0] > fwhm[1] && fwhm[1] > fwhm[2],
            "FWHM " + num(fwhm[0]) + " > " + num(fwhm[1]) + " > " + num(fwhm[2])};
}

Outcome two_spin_eigen() {
    double worst = 0.0;
    double gap[2];
    int idx = 0;
    for (double theta : {0.0, M_PI / 2}) {
        ham::SpinSystemSpec s;
        s.num_spins = 2;
        s.J = -1.0;
        s.D0 = 0.1;
        s.pairs = ham::two_spin_geometry(theta);
        const auto j = ham::effective_exchange(s.J, s.anisotropy_A, s.D0, theta);
        const auto an = ham::two_spin_analytic_eigensystem(0.5 * j[0], 0.5 * j[1], 0.5 * j[2], s.omega0);
        const auto eig = ham::eigendecompose(ham::build_system_hamiltonian(s));
        std::array<double, 4> sorted = an.energies;
        std::sort(sorted.begin(), sorted.end());
        for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(eig.energies(k) - sorted[k]));
        gap[idx++] = an.energies[1] - an.energies[2];
    }
    return {worst <= 1e-12 && gap[1] > gap[0],
            "energy deviation " + num(worst) + "; E_b - E_c = " + num(gap[0], 6) + " (theta 0), " + num(gap[1], 6) +
                " (theta pi/2), expected longer at pi/2"};
}

Outcome two_spin_peaks() {
    const auto a = cli::run_spectrum(preset("fig6a"));
    double pos[3];
    for (int k = 0; k < 3; ++k) pos[k] = tallest(peaks_of(a[k])).position;
    const bool shift_ok = pos[0] > pos[1] && pos[1] > pos[2];
    const auto b = cli::run_spectrum(preset("fig6b"));
    const auto p0 = peaks_of(b[0]), p2 = peaks_of(b[2]);
    const bool extra_ok = p0.size() >= 2 && p2.size() >= 2;
    return {shift_ok && extra_ok, "(a) peaks " + num(pos[0], 5) + " > " + num(pos[1], 5) + " > " + num(pos[2], 5) +
                                      "; (b) theta 0 peaks " + positions(p0) + ", theta pi/2 peaks " + positions(p2)};
}

Outcome three_spin_peaks() {
    const auto t = cli::run_spectrum(preset("fig9"));
    const auto p0 = peaks_of(t[0]), p2 = peaks_of(t[2]);
    const double h0 = tallest(p0).position, h2 = tallest(p2).position;
    return {p0.size() == 3 && p2.size() == 3 && h2 < h0,
            "theta 0 peaks " + positions(p0) + ", theta pi/2 peaks " + positions(p2) + "; highest " + num(h0, 5) +
                " -> " + num(h2, 5)};
}

Outcome field_sweep() {
    const auto cfg = preset("fig11");
    const auto t = cli::run_field_sweep(cfg);
    const double r = cfg.drive;
    const double h0 = tallest(peaks_of(t[0])).position, h2 = tallest(peaks_of(t[2])).position;
    return {(h0 - r) * (h2 - r) < 0.0 && h0 < h2,
            "peak H0 " + num(h0, 5) + " (theta 0), " + num(h2, 5) + " (theta pi/2), free-spin resonance " + num(r)};
}

Outcome dual_route() {
    const bath::BathSpec b{0.1, 0.5, 5.0};
    const chi::Solver one(ham::SpinSystemSpec{}, ham::CouplingSpec{}, b, chi::make_response_pair("+-", 1),
                          kernel::KernelToggles{});
    const double e1 = validation::dual_route_error(one, {0.95, 0.98, 1.0145, 1.05, 1.08});
    ham::SpinSystemSpec pair;
    pair.num_spins = 2;
    pair.J = -1.0;
    pair.D0 = 0.1;
    pair.pairs = ham::two_spin_geometry(0.0);
    const chi::Solver two(pair, ham::CouplingSpec{}, bath::BathSpec{0.1, 0.5, 1.0}, chi::make_response_pair("xx", 2),
                          kernel::KernelToggles{});
    const double e2 = validation::dual_route_error(two, {0.8, 0.9, 1.0, 1.1, 1.2});
    return {e1 <= 0.02 && e2 <= 0.05, "one spin " + num(e1) + " (limit 0.02), two spins " + num(e2) + " (limit 0.05)"};
}

Outcome structural() {
    const auto report = validation::run_validate(validation::Level::Quick);
    std::string failed;
    for (const auto& c : report.checks)
        if (!c.passed) failed += " " + c.name;
    return {report.passed(), std::to_string(report.checks.size()) + " checks" +
                                 (failed.empty() ? ", all passed" : ", failed:" + failed)};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lineshape acceptance run"};
    presets = "presets";
    std::vector<int> only;
    app.add_option("--presets", presets, "directory holding the preset .ini files")->check(CLI::ExistingDirectory);
    app.add_option("--only", only, "run only these criterion numbers");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "single-spin kernel and source oracle", 60, kernel_oracle},
        {2, "bath consistency across routes", 60, bath_triangle},
        {3, "detailed balance of the spectrum", 60, kms},
        {4, "Born-Markov closed form and PV cancellation", 60, born_markov},
        {5, "toggle behavior of the single-spin line", 300, toggle_behavior},
        {6, "width ordering in the coupling angle", 300, width_ordering},
        {7, "two-spin eigen-energies and gap ordering", 60, two_spin_eigen},
        {8, "two-spin peak shift and extra high-temperature peak", 600, two_spin_peaks},
        {9, "three-spin peaks and shift of the highest peak", 1800, three_spin_peaks},
        {10, "field sweep on opposite sides of resonance", 600, field_sweep},
        {11, "time-domain route reproduces the frequency route", 900, dual_route},
        {12, "structural invariants in quick validation", 30, structural},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.passed = false;
            o.detail += "; over time budget " + num(c.budget_s) + " s";
        }
        if (!o.passed) ++failures;
        std::printf("%s %2d %s: %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
