// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Exit status is 0 only when every criterion passes.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nsv/bounds.hpp"
#include "nsv/dynamics.hpp"
#include "nsv/inequality.hpp"
#include "nsv/lyapunov.hpp"

using namespace nsv;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> lines;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void note(const std::string& what) { lines.push_back("     " + what); }
};

std::string num(double x, int digits = 6) {
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    return os.str();
}

bool within_rel(double value, double target, double tol) { return std::abs(value - target) <= tol * std::abs(target); }

Outcome constants() {
    Outcome o;
    struct Row {
        const char* name;
        double value;
        double printed;
    };
    const Row rows[] = {
        {"classical domain", ConstantsTable::classical_domain(), 0.055},
        {"linear domain", ConstantsTable::linear_domain(), 0.109},
        {"linear torus", ConstantsTable::linear_torus(), 0.039},
        {"classical torus", ConstantsTable::classical_torus(), 0.028},
        {"log factor", ConstantsTable::log_factor(), 7.46},
        {"log shift", ConstantsTable::log_shift(), 5.74},
        {"classical log factor", ConstantsTable::classical_log_factor(), 4.7},
        {"classical log shift", ConstantsTable::classical_log_shift(), 5.56},
    };
    for (const auto& r : rows)
        o.require(std::abs(r.value - r.printed) <= 0.005,
                  std::string(r.name) + " = " + num(r.value) + " vs " + num(r.printed) + " (+-0.005)");
    return o;
}

Outcome threshold_values() {
    Outcome o;
    const auto t = thresholds(ConstantSet::printed);
    const auto x = thresholds(ConstantSet::exact);
    o.require(within_rel(t.g0, 6000.0, 0.05), "G0 = " + num(t.g0) + " vs 6000 (+-5%)");
    o.note("G0 with shift 5.24 = " + num(t.g0_alt) + ", exact constants: " + num(x.g0) + " / " + num(x.g0_alt));
    o.require(within_rel(t.crossover_log, 2.6e8, 0.05),
              "log vs linear crossover = " + num(t.crossover_log) + " vs 2.6e8 (+-5%)");
    o.require(within_rel(t.crossover_classical, 1.14e8, 0.05),
              "classical crossover = " + num(t.crossover_classical) + " vs 1.14e8 (+-5%)");
    o.note("exact constants: log crossover " + num(x.crossover_log) + ", classical crossover " +
           num(x.crossover_classical));
    return o;
}

Outcome spectrum() {
    Outcome o;
    const auto eig = verify_eigenvalue_bounds(100000, 10000);
    for (const char* key : {"lambda_j >= j/4", "lambda_j <= j/2", "N(E) <= 4E", "pi (sqrt E - sqrt2/2)^2 <= N(E) + 1",
                            "N(E) + 1 <= pi (sqrt E + sqrt2/2)^2"}) {
        const double w = eig.details.at(key).at("worst_ratio").get<double>();
        o.require(w <= 1.0, std::string(key) + ": worst ratio " + num(w, 8));
    }
    o.require(eig.violations == 0, std::to_string(eig.checked) + " eigenvalue checks, " +
                                       std::to_string(eig.violations) + " violations");
    const auto ly = verify_liyau(10000);
    o.require(ly.pass(), "Li-Yau sums m <= 10^4: " + std::to_string(ly.violations) + " violations, min sum/bound " +
                             num(ly.details.at("min_sum_over_bound").get<double>(), 8));
    return o;
}

SimConfig shear(double alpha) {
    SimConfig cfg;
    cfg.grid = SpectralGrid(64);
    cfg.alpha = alpha;
    cfg.initial.kind = InitialSpec::Kind::shear;
    cfg.scheme = Scheme::rk4;
    return cfg;
}

Outcome analytic_dynamics() {
    Outcome o;
    for (double alpha : {0.0, 1.0}) {
        SimConfig cfg = shear(alpha);
        cfg.nu = 1.0;
        cfg.dt = 1e-3;
        cfg.t_end = 1.0;
        const auto u0 = build_initial(cfg);
        const auto res = integrate(cfg);
        const auto exact = std::exp(-cfg.nu * cfg.t_end / (1.0 + alpha)) * u0;
        const double err = std::sqrt(l2_norm2(res.final_velocity - exact) / l2_norm2(exact));
        o.require(err <= 1e-6, "free decay alpha = " + num(alpha) + ": relative error " + num(err, 3) + " (<= 1e-6)");
        const auto b = check_dissipative_bound(res.series, cfg);
        o.require(b.pass, "free decay bound at " + std::to_string(b.samples) + " samples, max violation " +
                              num(b.max_violation, 3));
    }
    for (double alpha : {0.0, 1.0}) {
        SimConfig cfg = shear(alpha);
        cfg.nu = 0.5;
        cfg.forcing.kind = ForcingSpec::Kind::shear;
        cfg.forcing.amplitude = cfg.nu;
        cfg.dt = 1e-2;
        cfg.t_end = 1.0;
        const auto u0 = build_initial(cfg);
        const auto res = integrate(cfg);
        const double drift = std::sqrt(l2_norm2(res.final_velocity - u0) / l2_norm2(u0)) / cfg.t_end;
        o.require(drift <= 1e-10, "steady shear alpha = " + num(alpha) + ": drift " + num(drift, 3) +
                                      " per unit time (<= 1e-10)");
        const auto b = check_dissipative_bound(res.series, cfg);
        o.require(b.pass, "steady shear bound at " + std::to_string(b.samples) + " samples, max violation " +
                              num(b.max_violation, 3));
    }
    return o;
}

Outcome zero_attractor() {
    Outcome o;
    LyapunovConfig cfg;
    cfg.sim.grid = SpectralGrid(32);
    cfg.sim.nu = 1.0;
    cfg.sim.alpha = 1.0;
    cfg.sim.dt = 0.05;
    cfg.burn_in = 80.0;
    cfg.sim.t_end = 100.0;
    cfg.n = 8;
    const auto s = q_n_estimate(cfg);
    for (std::size_t j = 0; j < s.exponents.size(); ++j) {
        const double expected = j < 4 ? -0.5 : -2.0 / 3.0;
        o.require(std::abs(s.exponents[j] - expected) <= 1e-6,
                  "exponent " + std::to_string(j + 1) + " = " + num(s.exponents[j], 10) + " vs " + num(expected, 10));
    }
    o.require(s.exponents.size() == 8, std::to_string(s.exponents.size()) + " exponents computed");
    const double q4 = s.q_hat.size() >= 4 ? s.q_hat[3] : NAN;
    o.require(std::abs(q4 + 2.0) <= 1e-6, "q_hat(4) = " + num(q4, 10) + " vs -2");
    return o;
}

Outcome inequalities() {
    Outcome o;
    SweepConfig cfg;
    cfg.grid = SpectralGrid(64);
    cfg.families = 100;
    cfg.seed = 1;
    cfg.alphas = {0.01, 0.1, 1.0};
    cfg.lambda_max = 64;
    for (const auto& r : {sweep_lieb_thirring(cfg), sweep_rho_l2(cfg), sweep_rho_linf(cfg)}) {
        o.require(r.pass() && r.checked >= 100, r.target + ": worst ratio " + num(r.worst_ratio, 8) + " over " +
                                                    std::to_string(r.checked) + " checks, " +
                                                    std::to_string(r.violations) + " violations");
    }
    const auto lt = verify_lt_closed_form(cfg.grid);
    const double err = lt.details.at("relative_error").get<double>();
    o.require(err <= 1e-8, "single-mode int rho^2 = " + num(lt.details.at("int_rho_sq").get<double>(), 12) +
                               " vs 3/(8 pi^2), relative error " + num(err, 3));
    return o;
}

Outcome end_to_end() {
    Outcome o;
    const double calG = 1000.0;
    const double nu = 0.05;
    const double g_norm = calG * nu * nu / (4.0 * pi * pi);

    LyapunovConfig cfg;
    cfg.sim.grid = SpectralGrid(32);
    cfg.sim.nu = nu;
    cfg.sim.alpha = 0.002;
    cfg.sim.dt = 0.05;
    cfg.sim.form = Form::vorticity;
    cfg.sim.forcing.kind = ForcingSpec::Kind::two_mode;
    cfg.sim.forcing.amplitude = g_norm / (2.0 * pi);  // ||(sin x2, 0) + (0, sin 2x1)|| = 2 pi
    cfg.sim.initial.kind = InitialSpec::Kind::random;
    cfg.sim.initial.amplitude = 1.0;
    cfg.sim.seed = 1;
    cfg.spinup = 100.0;
    cfg.burn_in = 50.0;
    cfg.sim.t_end = 250.0;
    cfg.n = 1;

    BoundsInput in;
    in.nu = nu;
    in.alpha = cfg.sim.alpha;
    in.g_norm = NsvModel(cfg.sim).forcing_norm();
    const double a0 = alpha0(in);
    const auto bound = bound_2d_log(in);
    o.note("calG = " + num(in.calG()) + ", alpha0 = " + num(a0) + ", log bound = " + num(bound.value) + " (" +
           bound.branch + " branch)");
    o.require(in.alpha <= a0, "alpha = " + num(in.alpha) + " <= alpha0");

    const auto n_max = static_cast<std::size_t>(std::floor(bound.value));
    const auto scan = scan_n_star(cfg, n_max);
    std::string sizes;
    for (auto m : scan.frame_sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(m);
    o.note("frame sizes run: " + sizes + ", q_hat(1) = " +
           (scan.last.q_hat.empty() ? std::string("n/a") : num(scan.last.q_hat.front())));
    o.require(scan.n_star.has_value() && static_cast<double>(*scan.n_star) <= bound.value,
              "n* = " + (scan.n_star ? std::to_string(*scan.n_star) : std::string("none")) + " <= " + num(bound.value));
    return o;
}

double residual(SimConfig cfg, double dt, double t_end) {
    cfg.dt = dt;
    cfg.t_end = t_end;
    return std::abs(integrate(cfg).energy_residual);
}

Outcome energy_balance() {
    Outcome o;
    for (auto [alpha, dt] : {std::pair{0.5, 0.1}, std::pair{0.0, 0.05}}) {
        SimConfig cfg = shear(alpha);
        cfg.grid = SpectralGrid(32);
        cfg.scheme.reset();
        cfg.nu = 0.02;
        cfg.forcing.kind = ForcingSpec::Kind::shear;
        cfg.forcing.amplitude = cfg.nu;
        cfg.initial.perturbation = 6.0;
        cfg.seed = 2;
        const double coarse = residual(cfg, dt, dt);
        const double fine = residual(cfg, dt / 2, dt / 2);
        o.require(coarse / fine >= 16.0, "alpha = " + num(alpha) + " " + std::string(to_string(cfg.effective_scheme())) +
                                             ", one step dt = " + num(dt) + " -> " + num(dt / 2) + ": residual " +
                                             num(coarse, 3) + " -> " + num(fine, 3) + ", ratio " + num(coarse / fine, 4));
        const double coarse_w = residual(cfg, dt, 20 * dt);
        const double fine_w = residual(cfg, dt / 2, 20 * dt);
        o.note("fixed window t = " + num(20 * dt) + ": residual " + num(coarse_w, 3) + " -> " + num(fine_w, 3) +
               ", ratio " + num(coarse_w / fine_w, 4));
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"constants regression", constants},
        {"thresholds", threshold_values},
        {"spectrum verification", spectrum},
        {"analytic dynamics", analytic_dynamics},
        {"zero-attractor Lyapunov spectrum", zero_attractor},
        {"inequality sampling", inequalities},
        {"end-to-end dimension property", end_to_end},
        {"energy-balance convergence", energy_balance},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first << '\n';
        for (const auto& line : o.lines) std::cout << "    " << line << '\n';
        std::cout.flush();
    }
    std::cout << failed << " criteria failed\n";
    return failed == 0 ? 0 : 1;
}
