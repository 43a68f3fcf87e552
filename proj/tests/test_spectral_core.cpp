#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "nsv/field_io.hpp"
#include "nsv/random_field.hpp"
#include "nsv/spectral_ops.hpp"

using namespace nsv;

namespace {

constexpr Complex I{0.0, 1.0};

SpectralField random_velocity(const SpectralGrid& grid, std::uint64_t seed, double decay = 2.0) {
    std::mt19937_64 rng(seed);
    return random_field(grid, Role::velocity, rng, decay);
}

double max_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

// Direct evaluation of sum_k c(k) e^{ik.x}, independent of FFTW.
double direct_eval(std::span<const Complex> c, const SpectralGrid& grid, double x1, double x2) {
    double s = 0.0;
    for (int idx : grid.active()) {
        const WaveVector k = grid.wave(idx);
        s += (c[idx] * std::exp(I * (k.k1 * x1 + k.k2 * x2))).real();
    }
    return s;
}

// P((u . grad) v) by explicit convolution over retained modes.
SpectralField convolution_B(const SpectralField& u, const SpectralField& v) {
    const auto& grid = u.grid();
    SpectralField out(grid, Role::velocity);
    for (int ip : grid.active()) {
        for (int iq : grid.active()) {
            const WaveVector p = grid.wave(ip), q = grid.wave(iq);
            const WaveVector k{p.k1 + q.k1, p.k2 + q.k2};
            if (k.is_zero() || !grid.retained(k)) continue;
            const Complex udotq = u(0, p) * static_cast<double>(q.k1) + u(1, p) * static_cast<double>(q.k2);
            for (int c = 0; c < 2; ++c) out(c, k) += I * udotq * v(c, q);
        }
    }
    return leray_project(out);
}

}  // namespace

TEST_CASE("grid rejects bad resolutions and cutoffs") {
    CHECK_THROWS_AS(SpectralGrid(6), InvalidParameter);
    CHECK_THROWS_AS(SpectralGrid(15), InvalidParameter);
    CHECK_THROWS_AS(SpectralGrid(32, 11), InvalidParameter);
    CHECK_THROWS_AS(SpectralGrid(32, 0), InvalidParameter);
    const SpectralGrid g(32);
    CHECK(g.cutoff() == 10);
    CHECK(g.retained(WaveVector{10, -10}));
    CHECK_FALSE(g.retained(WaveVector{11, 0}));
    for (int idx = 0; idx < g.size(); ++idx) CHECK(g.index(g.wave(idx)) == idx);
}

TEST_CASE("leray projection examples") {
    const SpectralGrid grid(16);
    SpectralField f(grid, Role::velocity);
    f.set_mode(0, {1, 0}, 1.0);
    f.set_mode(1, {1, 0}, 1.0);
    const auto p = leray_project(f);
    CHECK(std::abs(p(0, {1, 0})) < 1e-15);
    CHECK(std::abs(p(1, {1, 0}) - 1.0) < 1e-15);

    SpectralField grad(grid, Role::velocity);
    grad.set_mode(0, {2, 3}, 2.0 * I);
    grad.set_mode(1, {2, 3}, 3.0 * I);
    CHECK(leray_project(grad).max_abs() < 1e-15);

    const auto u = random_velocity(grid, 7);
    CHECK(max_diff(leray_project(u), u) <= 1e-14 * u.max_abs());
    CHECK(divergence_defect(u) < 1e-14);

    SpectralField w(grid, Role::vorticity);
    CHECK_THROWS_AS(leray_project(w), RoleMismatch);
}

TEST_CASE("leray projection is idempotent and preserves reality") {
    const SpectralGrid grid(16);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        SpectralField f(grid, Role::velocity);
        std::normal_distribution<double> n01;
        for (int idx : grid.active()) {
            const WaveVector k = grid.wave(idx);
            if (k.k1 < 0 || (k.k1 == 0 && k.k2 < 0)) continue;
            f.set_mode(0, k, {n01(rng), n01(rng)});
            f.set_mode(1, k, {n01(rng), n01(rng)});
        }
        const auto p1 = leray_project(f);
        const auto p2 = leray_project(p1);
        CHECK(max_diff(p1, p2) <= 1e-14 * p1.max_abs());
        CHECK(symmetry_defect(p1) <= 1e-14);
    }
}

TEST_CASE("stokes and helmholtz multipliers") {
    const SpectralGrid grid(16);
    SpectralField u(grid, Role::velocity);
    u.set_mode(0, {0, 1}, 1.0);
    CHECK(max_diff(stokes_apply(u, 2.0), u) < 1e-15);
    CHECK(max_diff(stokes_apply(u, 0.0), u) < 1e-15);

    SpectralField v(grid, Role::velocity);
    v.set_mode(0, {1, 2}, Complex{2.0, -2.0});
    v.set_mode(1, {1, 2}, Complex{-1.0, 1.0});
    const auto s = stokes_apply(v, 2.0);
    CHECK(std::abs(s(0, {1, 2}) - 5.0 * v(0, {1, 2})) < 1e-14);
    CHECK(std::abs(s(1, {-1, -2}) - 5.0 * v(1, {-1, -2})) < 1e-14);

    CHECK(max_diff(helmholtz_solve(v, AlphaMetric(0.0)), v) == 0.0);
    CHECK(std::abs(helmholtz_solve(u, AlphaMetric(1.0))(0, {0, 1}) - 0.5) < 1e-16);
    SpectralField w(grid, Role::velocity);
    w.set_mode(1, {2, 0}, 3.0);
    CHECK(std::abs(helmholtz_solve(w, AlphaMetric(0.5))(1, {2, 0}) - 1.0) < 1e-15);
    CHECK_THROWS_AS(AlphaMetric(-1.0), InvalidParameter);

    const auto r = random_velocity(grid, 11);
    const AlphaMetric m(0.37);
    CHECK(max_diff(helmholtz_solve(helmholtz_apply(r, m), m), r) <= 1e-12 * r.max_abs());
}

TEST_CASE("synthesis matches a direct trigonometric sum") {
    const SpectralGrid grid(16);
    const auto u = random_velocity(grid, 5);
    for (int m : {16, 32}) {
        const auto phys = to_physical(u, m);
        double worst = 0.0;
        for (int i = 0; i < m; i += 3) {
            for (int j = 0; j < m; j += 5) {
                const double x1 = 2.0 * kPi * i / m, x2 = 2.0 * kPi * j / m;
                worst = std::max(worst, std::abs(phys[0](i, j) - direct_eval(u.component(0), grid, x1, x2)));
                worst = std::max(worst, std::abs(phys[1](i, j) - direct_eval(u.component(1), grid, x1, x2)));
            }
        }
        CHECK(worst < 1e-12);
    }
    const auto back = from_physical(to_physical(u), grid, Role::velocity);
    CHECK(max_diff(back, u) < 1e-14);
}

TEST_CASE("bilinear term: shear flow, skew symmetry, convolution oracle") {
    const SpectralGrid grid(16);
    SpectralField shear(grid, Role::velocity);
    shear.set_mode(0, {0, 1}, Complex{0.0, -0.5});
    CHECK(bilinear_B(shear, shear).max_abs() < 1e-15);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto u = random_velocity(grid, seed);
        const auto b = bilinear_B(u, u);
        const double scale = std::sqrt(l2_norm2(u)) * grad_norm2(u);
        CHECK(std::abs(l2_inner(b, u)) <= 1e-10 * scale);
        CHECK(divergence_defect(b) < 1e-12);
        CHECK(symmetry_defect(b) < 1e-12);
        CHECK(std::abs(b(0, {0, 0})) == 0.0);
    }

    SpectralField u(grid, Role::velocity);
    u.set_mode(1, {1, 0}, Complex{0.3, 0.2});
    u.set_mode(0, {0, 1}, Complex{-0.1, 0.7});
    const auto b = bilinear_B(u, u);
    const auto oracle = convolution_B(u, u);
    CHECK(max_diff(b, oracle) < 1e-14);
    for (int idx = 0; idx < grid.size(); ++idx) {
        const int n2 = grid.norm2(idx);
        if (n2 != 0 && n2 != 2 && n2 != 4) {
            CHECK(std::abs(b.component(0)[idx]) < 1e-15);
            CHECK(std::abs(b.component(1)[idx]) < 1e-15);
        }
    }

    // Random smooth fields truncated to a quarter band are aliasing-free too.
    std::mt19937_64 rng(9);
    const auto p = random_field(grid, Role::velocity, rng, 2.0, 2);
    const auto q = random_field(grid, Role::velocity, rng, 2.0, 3);
    CHECK(max_diff(bilinear_B(p, q), convolution_B(p, q)) < 1e-13);

    CHECK_THROWS_AS(bilinear_B(u, random_velocity(SpectralGrid(32), 1)), GridMismatch);
}

TEST_CASE("alpha inner product") {
    const SpectralGrid grid(16);
    SpectralField u(grid, Role::velocity);
    u.set_mode(0, {0, 1}, Complex{0.0, -0.5} / (std::sqrt(2.0) * kPi));
    CHECK(std::abs(l2_norm2(u) - 1.0) < 1e-14);
    for (double a : {0.0, 0.5, 3.0}) CHECK(std::abs(alpha_inner(u, u, AlphaMetric(a)) - (1.0 + a)) < 1e-14);

    SpectralField v(grid, Role::velocity);
    v.set_mode(1, {1, 0}, 1.0);
    CHECK(alpha_inner(u, v, AlphaMetric(2.0)) == 0.0);

    SpectralField w(grid, Role::vorticity);
    CHECK_THROWS_AS(alpha_inner(u, w, AlphaMetric(0.0)), RoleMismatch);
}

TEST_CASE("Parseval against physical-space quadrature") {
    const SpectralGrid grid(16);
    const double alpha = 0.3;
    const auto u = random_velocity(grid, 21);
    const auto v = random_velocity(grid, 22);
    const int m = 32;
    const auto pu = to_physical(u, m), pv = to_physical(v, m);
    const auto d1u = to_physical(partial(u, 0), m), d2u = to_physical(partial(u, 1), m);
    const auto d1v = to_physical(partial(v, 0), m), d2v = to_physical(partial(v, 1), m);
    double quad = 0.0;
    for (std::size_t p = 0; p < pu[0].values.size(); ++p) {
        for (int c = 0; c < 2; ++c) {
            quad += pu[c].values[p] * pv[c].values[p];
            quad += alpha * (d1u[c].values[p] * d1v[c].values[p] + d2u[c].values[p] * d2v[c].values[p]);
        }
    }
    quad *= kTorusArea / (m * m);
    const double spectral = alpha_inner(u, v, AlphaMetric(alpha));
    CHECK(std::abs(quad - spectral) <= 1e-8 * std::abs(spectral));
}

TEST_CASE("curl and stream function") {
    const SpectralGrid grid(16);
    SpectralField u(grid, Role::velocity);
    u.set_mode(0, {0, 1}, Complex{0.0, -0.5});  // (sin x2, 0)
    const auto w = rot(u);
    // rot (sin x2, 0) = -cos x2
    CHECK(std::abs(w(0, {0, 1}) - Complex{-0.5, 0.0}) < 1e-15);
    CHECK(max_diff(curl_and_stream(w), u) < 1e-15);

    SpectralField om(grid, Role::vorticity);
    om.set_mode(0, {1, 1}, Complex{0.4, -0.3});
    const auto v = curl_and_stream(om);
    const double mag = std::hypot(std::abs(v(0, {1, 1})), std::abs(v(1, {1, 1})));
    CHECK(std::abs(mag - std::abs(om(0, {1, 1})) / std::sqrt(2.0)) < 1e-15);
    CHECK(divergence_defect(v) < 1e-15);

    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        std::mt19937_64 rng(seed);
        const auto s = random_field(grid, Role::vorticity, rng, 1.0);
        CHECK(max_diff(rot(curl_and_stream(s)), s) <= 1e-12 * s.max_abs());
        const auto r = random_velocity(grid, seed);
        CHECK(max_diff(curl_and_stream(rot(r)), r) <= 1e-12 * r.max_abs());
        CHECK(std::abs(l2_norm2(rot(r)) - grad_norm2(r)) <= 1e-12 * grad_norm2(r));
    }
}

TEST_CASE("snapshot text format round-trips bit-exactly") {
    const SpectralGrid grid(16, 4);
    const auto u = random_velocity(grid, 99);
    std::stringstream ss;
    write_snapshot(ss, {u, 0.25, 1.5});
    const Snapshot back = read_snapshot(ss);
    CHECK(back.field.grid() == grid);
    CHECK(back.field.role() == Role::velocity);
    CHECK(back.alpha == 0.25);
    REQUIRE(back.time.has_value());
    CHECK(*back.time == 1.5);
    CHECK(max_diff(back.field, u) == 0.0);

    std::stringstream bad("nsv-field 1\nresolution_n 16\ndealias_cutoff 4\nrole velocity\nalpha x\n");
    CHECK_THROWS_AS(read_snapshot(bad), FormatError);
    std::stringstream wrong_version("nsv-field 2\n");
    CHECK_THROWS_AS(read_snapshot(wrong_version), FormatError);
}
