#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "nsv/dynamics.hpp"
#include "nsv/random_field.hpp"

using namespace nsv;

namespace {

double rel_diff(const SpectralField& a, const SpectralField& b) {
    return std::sqrt(l2_norm2(a - b) / l2_norm2(b));
}

SimConfig shear_config(double alpha, int n = 32) {
    SimConfig cfg;
    cfg.alpha = alpha;
    cfg.grid = SpectralGrid(n);
    cfg.initial.kind = InitialSpec::Kind::shear;
    return cfg;
}

SpectralField random_velocity(const SpectralGrid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_field(grid, Role::velocity, rng, 3.0);
}

}  // namespace

TEST_CASE("rhs on the shear mode and with zero state") {
    for (double alpha : {0.0, 1.0, 0.25}) {
        SimConfig cfg = shear_config(alpha);
        cfg.nu = 0.7;
        const auto u = 2.0 * build_initial(cfg);
        const auto r = rhs_velocity(u, cfg);
        CHECK(rel_diff(r, (-cfg.nu / (1.0 + alpha)) * u) < 1e-14);

        const auto w = rot(u);
        CHECK(rel_diff(rhs_vorticity(w, cfg), (-cfg.nu / (1.0 + alpha)) * w) < 1e-14);
    }

    SimConfig cfg = shear_config(0.5);
    cfg.forcing.kind = ForcingSpec::Kind::two_mode;
    const NsvModel model(cfg);
    const SpectralField zero(cfg.grid, Role::velocity);
    CHECK(rel_diff(model.rhs_velocity(zero), helmholtz_solve(model.forcing(), AlphaMetric(0.5))) == 0.0);
}

TEST_CASE("rhs: single vorticity mode multiplier and alpha = 0 reduction") {
    SimConfig cfg = shear_config(0.3);
    cfg.nu = 1.3;
    SpectralField w(cfg.grid, Role::vorticity);
    w.set_mode(0, {2, 3}, Complex{0.2, 0.1});
    const double lam = 13.0;
    CHECK(rel_diff(rhs_vorticity(w, cfg), (-cfg.nu * lam / (1.0 + cfg.alpha * lam)) * w) < 1e-14);

    cfg.alpha = 0.0;
    cfg.forcing.kind = ForcingSpec::Kind::two_mode;
    const auto u = random_velocity(cfg.grid, 4);
    const NsvModel model(cfg);
    SpectralField classical = model.forcing();
    classical -= bilinear_B(u, u);
    classical.axpy(-cfg.nu, stokes_apply(u, 2.0));
    CHECK(rel_diff(rhs_velocity(u, cfg), classical) < 1e-13);
}

TEST_CASE("rot intertwines the velocity and vorticity right-hand sides") {
    SimConfig cfg = shear_config(0.2);
    cfg.forcing.kind = ForcingSpec::Kind::two_mode;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto u = random_velocity(cfg.grid, seed);
        const auto lhs = rot(rhs_velocity(u, cfg));
        const auto rhs = rhs_vorticity(rot(u), cfg);
        CHECK(rel_diff(lhs, rhs) < 1e-10);
    }
    SpectralField w(cfg.grid, Role::vorticity);
    CHECK_THROWS_AS(rhs_velocity(w, cfg), RoleMismatch);
}

TEST_CASE("single-mode free decay matches the closed form") {
    for (auto scheme : {Scheme::rk4, Scheme::integrating_factor_rk4}) {
        SimConfig cfg = shear_config(1.0);
        cfg.dt = 1e-3;
        cfg.t_end = 1.0;
        cfg.scheme = scheme;
        const auto res = integrate(cfg);
        const auto exact = std::exp(-0.5) * build_initial(cfg);
        CHECK(rel_diff(res.final_velocity, exact) < 1e-6);
        CHECK(check_dissipative_bound(res.series, cfg).pass);
    }
}

TEST_CASE("steady shear is a fixed point") {
    for (double alpha : {0.0, 1.0}) {
        SimConfig cfg = shear_config(alpha);
        cfg.nu = 0.5;
        cfg.forcing.kind = ForcingSpec::Kind::shear;
        cfg.forcing.amplitude = cfg.nu;
        cfg.t_end = 1.0;
        const auto u0 = build_initial(cfg);
        const auto res = integrate(cfg);
        CHECK(std::sqrt(l2_norm2(res.final_velocity - u0)) / std::sqrt(l2_norm2(u0)) <= 1e-10);
        const auto bound = check_dissipative_bound(res.series, cfg);
        CHECK(bound.pass);

        // averages saturate ||g||^2 / nu^2 exactly
        cfg.t_end = 0.2;
        cfg.burn_in = 0.0;
        const auto avg = check_time_averages(integrate(cfg).series);
        CHECK(avg.pass);
        CHECK(avg.avg_enstrophy == doctest::Approx(avg.enstrophy_bound).epsilon(1e-12));
        CHECK(avg.avg_grad == doctest::Approx(avg.grad_bound).epsilon(1e-12));
        CHECK_FALSE(avg.warnings.empty());
    }
}

TEST_CASE("zero data stays zero") {
    SimConfig cfg;
    cfg.grid = SpectralGrid(16);
    cfg.t_end = 0.05;
    const auto res = integrate(cfg);
    CHECK(res.final_velocity.max_abs() == 0.0);
    CHECK(res.energy_residual == 0.0);
}

TEST_CASE("dissipative bound from rest and time averages for two-mode forcing") {
    SimConfig cfg;
    cfg.grid = SpectralGrid(32);
    cfg.nu = 0.2;
    cfg.alpha = 0.5;
    cfg.dt = 5e-3;
    cfg.forcing.kind = ForcingSpec::Kind::two_mode;
    cfg.forcing.amplitude = 0.1;
    cfg.t_end = 120.0;
    cfg.sample_every = 20;
    const auto res = integrate(cfg);
    CHECK(check_dissipative_bound(res.series, cfg).pass);
    const auto avg = check_time_averages(res.series);
    CHECK(avg.pass);
    CHECK(avg.avg_enstrophy < 0.99 * avg.enstrophy_bound);
    CHECK(avg.window > 10.0 / cfg.gamma());
    CHECK(avg.warnings.empty());
}

TEST_CASE("invariants hold along a random trajectory") {
    SimConfig cfg;
    cfg.grid = SpectralGrid(32);
    cfg.alpha = 0.1;
    cfg.nu = 0.05;
    cfg.dt = 2e-3;
    cfg.forcing.kind = ForcingSpec::Kind::two_mode;
    cfg.initial.kind = InitialSpec::Kind::random;
    cfg.seed = 17;
    Integrator integ(cfg, build_initial(cfg));
    for (int s = 0; s < 100; ++s) {
        integ.step();
        CHECK(divergence_defect(integ.state()) < 1e-12);
        CHECK(symmetry_defect(integ.state()) < 1e-12);
    }
}

TEST_CASE("velocity and vorticity trajectories agree under rot") {
    for (double alpha : {0.0, 0.5}) {
        SimConfig cfg;
        cfg.grid = SpectralGrid(32);
        cfg.alpha = alpha;
        cfg.nu = 0.05;
        cfg.dt = 2e-3;
        cfg.forcing.kind = ForcingSpec::Kind::two_mode;
        cfg.initial.kind = InitialSpec::Kind::random;
        cfg.seed = 3;
        const auto a = integrate(cfg).final_velocity;
        cfg.form = Form::vorticity;
        const auto b = integrate(cfg).final_velocity;
        CHECK(rel_diff(rot(b), rot(a)) < 1e-8);
    }
}

TEST_CASE("NSV trajectories converge to Navier-Stokes as alpha decreases") {
    SimConfig cfg = shear_config(0.0);
    cfg.nu = 0.1;
    cfg.forcing.kind = ForcingSpec::Kind::shear;
    cfg.forcing.amplitude = cfg.nu;
    cfg.initial.perturbation = 0.5;
    cfg.seed = 8;
    cfg.dt = 2e-3;
    const auto reference = integrate(cfg).final_velocity;
    double previous = std::numeric_limits<double>::infinity();
    for (double alpha : {0.1, 0.01, 0.001, 0.0001}) {
        cfg.alpha = alpha;
        cfg.scheme = Scheme::integrating_factor_rk4;
        const double dev = rel_diff(integrate(cfg).final_velocity, reference);
        CHECK(dev < previous);
        previous = dev;
    }
    CHECK(previous < 1e-3);
}

TEST_CASE("energy balance residual shrinks at fourth order") {
    // One-step residual is O(dt^5): halving dt divides it by ~32.
    for (auto [alpha, dt] : {std::pair{0.5, 0.1}, std::pair{0.0, 0.05}}) {
        SimConfig cfg = shear_config(alpha);
        cfg.nu = 0.02;
        cfg.forcing.kind = ForcingSpec::Kind::shear;
        cfg.forcing.amplitude = cfg.nu;
        cfg.initial.perturbation = 6.0;
        cfg.seed = 2;
        cfg.dt = dt;
        cfg.t_end = dt;
        const double coarse = std::abs(integrate(cfg).energy_residual);
        cfg.dt = cfg.t_end = dt / 2;
        const double fine = std::abs(integrate(cfg).energy_residual);
        CHECK(coarse / fine > 24.0);
    }

    // Over a fixed window the accumulated residual is O(dt^4).
    SimConfig cfg = shear_config(0.0);
    cfg.nu = 0.02;
    cfg.forcing.kind = ForcingSpec::Kind::shear;
    cfg.forcing.amplitude = cfg.nu;
    cfg.initial.perturbation = 3.0;
    cfg.seed = 2;
    cfg.t_end = 2.0;
    cfg.dt = 0.05;
    const double coarse = std::abs(integrate(cfg).energy_residual);
    cfg.dt = 0.025;
    CHECK(coarse / std::abs(integrate(cfg).energy_residual) > 16.0);
}

TEST_CASE("configuration validation aggregates problems") {
    SimConfig cfg;
    cfg.nu = -1.0;
    cfg.dt = 0.0;
    cfg.sample_every = 0;
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.problems().size() == 3);
    }
}

TEST_CASE("runs are deterministic and blow-ups are reported") {
    SimConfig cfg;
    cfg.grid = SpectralGrid(16);
    cfg.initial.kind = InitialSpec::Kind::random;
    cfg.seed = 5;
    cfg.t_end = 0.1;
    const auto a = integrate(cfg), b = integrate(cfg);
    CHECK(rel_diff(a.final_velocity, b.final_velocity) == 0.0);

    cfg.nu = 1e-3;
    cfg.initial.amplitude = 1e4;
    cfg.dt = 0.5;
    cfg.t_end = 200.0;
    CHECK_THROWS_AS(integrate(cfg), IntegrationDiverged);
}

TEST_CASE("diagnostics CSV header") {
    SimConfig cfg = shear_config(1.0, 16);
    cfg.t_end = 0.01;
    std::ostringstream os;
    write_diagnostics_csv(os, integrate(cfg).series);
    CHECK(os.str().rfind("t,energy_l2,enstrophy,energy_alpha,avg_enstrophy,avg_grad_l1,grashof_G,grashof_calG\n", 0) == 0);
}
