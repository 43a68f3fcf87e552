#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "nsv/inequality.hpp"

using namespace nsv;
using std::numbers::pi;

namespace {

// Independent oracle: every lattice point of the bounding square.
std::int64_t brute_count(double E) {
    const int r = static_cast<int>(std::ceil(std::sqrt(std::max(E, 0.0)))) + 1;
    std::int64_t n = 0;
    for (int a = -r; a <= r; ++a)
        for (int b = -r; b <= r; ++b)
            if ((a != 0 || b != 0) && a * a + b * b <= E) ++n;
    return n;
}

}  // namespace

TEST_CASE("lattice counting") {
    CHECK(lattice_count(1) == 4);
    CHECK(lattice_count(2) == 8);
    CHECK(lattice_count(5) == 20);
    CHECK(lattice_count(0.5) == 0);
    CHECK(lattice_count(0) == 0);
    CHECK(lattice_count(-3) == 0);
    for (double E : {0.99, 1.0, 1.5, 3.999, 25.0, 99.5, 1000.0, 4097.3}) CHECK(lattice_count(E) == brute_count(E));
    for (int E = 0; E <= 2000; ++E) REQUIRE(lattice_count(E) == brute_count(E));

    // radial enumeration for E <= 10^4: sum of multiplicities per level
    std::map<int, std::int64_t> levels;
    for (int a = -100; a <= 100; ++a)
        for (int b = -100; b <= 100; ++b)
            if (a * a + b * b <= 10000 && (a || b)) ++levels[a * a + b * b];
    std::int64_t c = 0;
    auto it = levels.begin();
    for (int E = 0; E <= 10000; ++E) {
        while (it != levels.end() && it->first <= E) c += (it++)->second;
        REQUIRE(lattice_count(E) == c);
    }
}

TEST_CASE("lattice spectrum") {
    const LatticeSpectrum s(50);
    CHECK(s.multiplicity(1) == 4);
    CHECK(s.multiplicity(2) == 4);
    CHECK(s.multiplicity(3) == 0);
    CHECK(s.multiplicity(25) == 12);
    CHECK(s.count(5) == 20);
    CHECK(s.eigenvalue(1) == 1);
    CHECK(s.eigenvalue(4) == 1);
    CHECK(s.eigenvalue(5) == 2);
    CHECK(s.eigenvalue(9) == 4);
    const auto ev = s.eigenvalues(s.count(50));
    CHECK(std::is_sorted(ev.begin(), ev.end()));
    for (int E = 0; E <= 50; ++E) CHECK(s.count(E) == lattice_count(E));
    CHECK_THROWS_AS(s.eigenvalue(0), InvalidParameter);

    const auto cover = LatticeSpectrum::covering(100000);
    CHECK(cover.count(static_cast<double>(cover.max_E())) >= 100000);

    // spectral sums at Lambda = 1: four unit vectors; tail encloses 4 zeta(2) beta(2) - 4
    const LatticeSpectrum big(200000);
    CHECK(big.inverse_sum(1) == 4.0);
    const double catalan = 0.91596559417721901505;
    const double total = 4.0 * (pi * pi / 6.0) * catalan;
    const auto t = big.inverse_square_tail(1);
    CHECK(t.lower <= total - 4.0);
    CHECK(t.upper >= total - 4.0);
    CHECK(t.upper - t.lower < 1e-5);
}

TEST_CASE("eigenvalue bounds and Li-Yau sums") {
    const auto r = verify_eigenvalue_bounds(2000, 1000);
    CHECK(r.pass());
    CHECK(r.worst_ratio == doctest::Approx(1.0));  // lambda_4 = 1 = 4/4 and lambda_2 = 1 = 2/2
    CHECK_FALSE(r.near_saturation.empty());
    CHECK(r.details["printed_N_lt_2E_failures"].get<std::size_t>() == 999);

    const auto l = verify_liyau(2000);
    CHECK(l.pass());
    CHECK(l.details["min_sum_over_bound"].get<double>() > 1.0);
    CHECK_THROWS_AS(verify_liyau(0), InvalidParameter);

    const auto s = verify_spectral_sums(200);
    CHECK(s.pass());
    CHECK(s.details["sum_inverse_at_1"].get<double>() == 4.0);
}

TEST_CASE("suborthonormal families") {
    const SpectralGrid grid(32);
    const auto a = sample_suborthonormal(grid, Role::velocity, 8, FamilyKind::alpha_orthonormal, 0.3, 5);
    CHECK(a.certificate <= 1.0);
    CHECK(a.certificate < 1.0 / (1.0 + 0.3) + 1e-12);  // (u,u) <= (u,u)_a / (1 + a lambda1)
    const auto g = sample_suborthonormal(grid, Role::velocity, 8, FamilyKind::gram_scaled, 0.0, 5);
    CHECK(g.certificate == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.certificate <= 1.0 + 1e-12);
    const auto b = sample_suborthonormal(grid, Role::velocity, 8, FamilyKind::gram_scaled, 0.0, 5);
    CHECK(l2_norm2(b.vectors[3] - g.vectors[3]) == 0.0);

    const auto eig = eigenmode_frame(grid, Role::velocity, 1, AlphaMetric(0.0));
    CHECK(l2_gram_max_eigenvalue(eig.vectors) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rho profile quadrature") {
    const SpectralGrid grid(16);
    const auto fam = sample_suborthonormal(grid, Role::velocity, 5, FamilyKind::alpha_orthonormal, 0.0, 9);
    const auto p = rho_profile(fam.vectors);
    CHECK(p.m == 32);
    double norms = 0.0;
    for (const auto& v : fam.vectors) norms += l2_norm2(v);
    CHECK(p.integral == doctest::Approx(norms).epsilon(1e-12));
    CHECK(p.integral == doctest::Approx(5.0).epsilon(1e-12));
    for (double x : p.values) CHECK(x >= 0.0);
    CHECK(rho_profile(fam.vectors, 64).integral_sq == doctest::Approx(p.integral_sq).epsilon(1e-12));
}

TEST_CASE("Lieb-Thirring closed form and checks") {
    const auto r = verify_lt_closed_form(SpectralGrid(16));
    CHECK(r.pass());
    CHECK(r.details["int_rho_sq"].get<double>() == doctest::Approx(3.0 / (8 * pi * pi)).epsilon(1e-12));

    SuborthonormalFamily empty{{}, AlphaMetric(0.0), FamilyKind::alpha_orthonormal, 0.0, 0};
    CHECK(check_lieb_thirring(empty).ratio == 0.0);

    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto fam = sample_suborthonormal(SpectralGrid(32), Role::velocity, 1 + seed % 16,
                                               FamilyKind::gram_scaled, 0.0, seed);
        const auto c = check_lieb_thirring(fam);
        CHECK(c.ratio < 1.0);
        CHECK(c.refinement < 1e-10);
        CHECK(c.warnings.empty());
    }
    const auto w = sample_suborthonormal(SpectralGrid(16), Role::vorticity, 2, FamilyKind::gram_scaled, 0.0, 1);
    CHECK_THROWS_AS(check_lieb_thirring(w), RoleMismatch);
}

TEST_CASE("rho L2 bound") {
    // one alpha-normalised ground mode at alpha = 1: ||rho|| = sqrt(3 / (32 pi^2))
    const SpectralGrid grid(16);
    SuborthonormalFamily fam{eigenmode_frame(grid, Role::velocity, 1, AlphaMetric(1.0)).vectors, AlphaMetric(1.0),
                             FamilyKind::alpha_orthonormal, 0.0, 0};
    const auto c = check_rho_l2(fam);
    CHECK(c.lhs == doctest::Approx(std::sqrt(3.0 / (32 * pi * pi))).epsilon(1e-12));
    CHECK(c.rhs == doctest::Approx(1.0 / (2 * std::sqrt(pi))).epsilon(1e-14));
    CHECK(c.ratio < 1.0);

    fam.metric = AlphaMetric(0.0);
    CHECK_THROWS_AS(check_rho_l2(fam), InvalidParameter);

    SweepConfig cfg;
    cfg.grid = SpectralGrid(32);
    cfg.families = 10;
    const auto r = sweep_rho_l2(cfg);
    CHECK(r.pass());
    CHECK(r.checked == 30);
}

TEST_CASE("rho L-infinity bound") {
    const SpectralGrid grid(16);
    SuborthonormalFamily fam{eigenmode_frame(grid, Role::vorticity, 1, AlphaMetric(0.5)).vectors, AlphaMetric(0.5),
                             FamilyKind::alpha_orthonormal, 0.0, 0};
    const auto c = check_rho_linf(fam, 1);
    // phi = c cos(x1): v = grad^perp Delta^{-1} phi has |v| <= c, attained on the grid
    const double amp = 1.0 / std::sqrt(1.5 * 2 * pi * pi);
    CHECK(c.lhs == doctest::Approx(amp).epsilon(1e-12));
    CHECK(c.rhs == doctest::Approx(4 * std::sqrt(2.0) * pi * std::sqrt(std::log(4 * std::numbers::e)) +
                                   4 * std::sqrt(4 * pi * pi * amp * amp * 2 * pi * pi))
                       .epsilon(1e-12));
    CHECK(c.ratio < 1.0);
    CHECK_THROWS_AS(check_rho_linf(fam, 0), InvalidParameter);

    SweepConfig cfg;
    cfg.grid = SpectralGrid(32);
    cfg.families = 5;
    cfg.lambda_max = 16;
    const auto r = sweep_rho_linf(cfg);
    CHECK(r.pass());
    CHECK(r.checked == 3 * 5 * 16);
    CHECK_FALSE(r.details["argmin_lambda_histogram"].empty());
}

TEST_CASE("reports serialise") {
    const auto r = verify_liyau(10);
    const auto j = to_json(r);
    CHECK(j["target"] == "liyau");
    CHECK(j["pass"] == true);
    CHECK(j.contains("worst_ratio"));
}
