#include "nsv/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsv/fft.hpp"

namespace nsv {

namespace {

constexpr Complex kI{0.0, 1.0};

int wrap_index(int k, int m) { return k < 0 ? k + m : k; }

// Writes i*k_axis * src into dst (same grid layout).
void derivative_into(std::span<const Complex> src, const SpectralGrid& grid, int axis,
                     std::span<Complex> dst) {
    for (int idx = 0; idx < grid.size(); ++idx) {
        const WaveVector k = grid.wave(idx);
        dst[idx] = kI * static_cast<double>(axis == 0 ? k.k1 : k.k2) * src[idx];
    }
}

}  // namespace

AlphaMetric::AlphaMetric(double alpha) : alpha_(alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw InvalidParameter("alpha must be finite and >= 0, got " + std::to_string(alpha));
    }
}

GridFunction synthesize(std::span<const Complex> coeffs, const SpectralGrid& grid, int m) {
    const int n = grid.resolution();
    if (m < n) {
        throw InvalidParameter("quadrature grid " + std::to_string(m) +
                               " is coarser than the field grid " + std::to_string(n));
    }
    GridFunction out{m, std::vector<double>(static_cast<std::size_t>(m) * m)};
    auto& tf = transform_for(m);
    if (m == n) {
        tf.to_physical(coeffs, out.values);
        return out;
    }
    std::vector<Complex> padded(static_cast<std::size_t>(m) * m);
    for (int idx = 0; idx < grid.size(); ++idx) {
        if (coeffs[idx] == Complex{}) continue;
        const WaveVector k = grid.wave(idx);
        padded[static_cast<std::size_t>(wrap_index(k.k1, m)) * m + wrap_index(k.k2, m)] =
            coeffs[idx];
    }
    tf.to_physical(padded, out.values);
    return out;
}

std::vector<GridFunction> to_physical(const SpectralField& f, int m) {
    const int size = m == 0 ? f.grid().resolution() : m;
    std::vector<GridFunction> out;
    out.reserve(f.components());
    for (int c = 0; c < f.components(); ++c) out.push_back(synthesize(f.component(c), f.grid(), size));
    return out;
}

SpectralField from_physical(std::span<const GridFunction> values, const SpectralGrid& grid,
                            Role role) {
    SpectralField out(grid, role);
    if (static_cast<int>(values.size()) != out.components()) {
        throw InvalidParameter("from_physical: component count does not match role");
    }
    auto& tf = transform_for(grid.resolution());
    for (int c = 0; c < out.components(); ++c) {
        if (values[c].m != grid.resolution()) {
            throw GridMismatch("from_physical: samples are not on the native grid");
        }
        tf.to_spectral(values[c].values, out.component(c));
    }
    return dealias(std::move(out));
}

SpectralField leray_project(const SpectralField& f) {
    require_role(f, Role::velocity, "leray_project");
    SpectralField out = f;
    const auto& grid = f.grid();
    auto u1 = out.component(0);
    auto u2 = out.component(1);
    for (int idx = 0; idx < grid.size(); ++idx) {
        const int k2 = grid.norm2(idx);
        if (k2 == 0) {
            u1[idx] = u2[idx] = Complex{};
            continue;
        }
        const WaveVector k = grid.wave(idx);
        const Complex kdotu = static_cast<double>(k.k1) * u1[idx] + static_cast<double>(k.k2) * u2[idx];
        const Complex s = kdotu / static_cast<double>(k2);
        u1[idx] -= static_cast<double>(k.k1) * s;
        u2[idx] -= static_cast<double>(k.k2) * s;
    }
    return out;
}

SpectralField stokes_apply(const SpectralField& u, double s) {
    SpectralField out = u;
    const auto& grid = u.grid();
    for (int c = 0; c < u.components(); ++c) {
        auto comp = out.component(c);
        for (int idx = 0; idx < grid.size(); ++idx) {
            const int k2 = grid.norm2(idx);
            comp[idx] = k2 == 0 ? Complex{} : comp[idx] * std::pow(static_cast<double>(k2), 0.5 * s);
        }
    }
    return out;
}

SpectralField helmholtz_solve(const SpectralField& f, const AlphaMetric& metric) {
    SpectralField out = f;
    const auto& grid = f.grid();
    for (int c = 0; c < f.components(); ++c) {
        auto comp = out.component(c);
        for (int idx = 0; idx < grid.size(); ++idx) comp[idx] /= metric.weight(grid.norm2(idx));
    }
    return out;
}

SpectralField helmholtz_apply(const SpectralField& f, const AlphaMetric& metric) {
    SpectralField out = f;
    const auto& grid = f.grid();
    for (int c = 0; c < f.components(); ++c) {
        auto comp = out.component(c);
        for (int idx = 0; idx < grid.size(); ++idx) comp[idx] *= metric.weight(grid.norm2(idx));
    }
    return out;
}

SpectralField dealias(SpectralField f) {
    const auto& grid = f.grid();
    for (int c = 0; c < f.components(); ++c) {
        auto comp = f.component(c);
        comp[0] = Complex{};
        for (int idx = 1; idx < grid.size(); ++idx) {
            if (!grid.retained(idx)) comp[idx] = Complex{};
        }
    }
    return f;
}

SpectralField partial(const SpectralField& f, int axis) {
    SpectralField out(f.grid(), f.role());
    for (int c = 0; c < f.components(); ++c) derivative_into(f.component(c), f.grid(), axis, out.component(c));
    return out;
}

SpectralField bilinear_B(const SpectralField& u, const SpectralField& v) {
    require_role(u, Role::velocity, "bilinear_B");
    require_role(v, Role::velocity, "bilinear_B");
    require_same_grid(u, v, "bilinear_B");
    const auto& grid = u.grid();
    const int n = grid.resolution();
    const std::size_t size = static_cast<std::size_t>(grid.size());
    auto& tf = transform_for(n);

    std::vector<double> u1(size), u2(size), d1(size), d2(size), w(size);
    std::vector<Complex> scratch(size);
    tf.to_physical(u.component(0), u1);
    tf.to_physical(u.component(1), u2);

    SpectralField out(grid, Role::velocity);
    for (int c = 0; c < 2; ++c) {
        derivative_into(v.component(c), grid, 0, scratch);
        tf.to_physical(scratch, d1);
        derivative_into(v.component(c), grid, 1, scratch);
        tf.to_physical(scratch, d2);
        for (std::size_t p = 0; p < size; ++p) w[p] = u1[p] * d1[p] + u2[p] * d2[p];
        tf.to_spectral(w, out.component(c));
    }
    return leray_project(dealias(std::move(out)));
}

SpectralField advect_scalar(const SpectralField& u, const SpectralField& s) {
    require_role(u, Role::velocity, "advect_scalar");
    require_role(s, Role::vorticity, "advect_scalar");
    require_same_grid(u, s, "advect_scalar");
    const auto& grid = u.grid();
    const std::size_t size = static_cast<std::size_t>(grid.size());
    auto& tf = transform_for(grid.resolution());

    std::vector<double> u1(size), u2(size), d1(size), d2(size);
    std::vector<Complex> scratch(size);
    tf.to_physical(u.component(0), u1);
    tf.to_physical(u.component(1), u2);
    derivative_into(s.component(0), grid, 0, scratch);
    tf.to_physical(scratch, d1);
    derivative_into(s.component(0), grid, 1, scratch);
    tf.to_physical(scratch, d2);
    for (std::size_t p = 0; p < size; ++p) d1[p] = u1[p] * d1[p] + u2[p] * d2[p];

    SpectralField out(grid, Role::vorticity);
    tf.to_spectral(d1, out.component(0));
    return dealias(std::move(out));
}

double alpha_inner(const SpectralField& u, const SpectralField& v, const AlphaMetric& metric) {
    require_same_grid(u, v, "alpha_inner");
    require_role(v, u.role(), "alpha_inner");
    const auto& grid = u.grid();
    double sum = 0.0;
    for (int c = 0; c < u.components(); ++c) {
        const auto a = u.component(c);
        const auto b = v.component(c);
        for (int idx = 0; idx < grid.size(); ++idx) {
            const double w = metric.weight(grid.norm2(idx));
            sum += w * (a[idx].real() * b[idx].real() + a[idx].imag() * b[idx].imag());
        }
    }
    return kTorusArea * sum;
}

double l2_inner(const SpectralField& u, const SpectralField& v) {
    return alpha_inner(u, v, AlphaMetric(0.0));
}

double l2_norm2(const SpectralField& u) { return l2_inner(u, u); }

double grad_norm2(const SpectralField& u) {
    const auto& grid = u.grid();
    double sum = 0.0;
    for (int c = 0; c < u.components(); ++c) {
        const auto a = u.component(c);
        for (int idx = 0; idx < grid.size(); ++idx) sum += grid.norm2(idx) * std::norm(a[idx]);
    }
    return kTorusArea * sum;
}

SpectralField curl_and_stream(const SpectralField& omega) {
    require_role(omega, Role::vorticity, "curl_and_stream");
    const auto& grid = omega.grid();
    SpectralField u(grid, Role::velocity);
    const auto w = omega.component(0);
    auto u1 = u.component(0);
    auto u2 = u.component(1);
    for (int idx = 0; idx < grid.size(); ++idx) {
        const int k2 = grid.norm2(idx);
        if (k2 == 0) continue;
        const WaveVector k = grid.wave(idx);
        const Complex s = kI * w[idx] / static_cast<double>(k2);
        u1[idx] = static_cast<double>(k.k2) * s;
        u2[idx] = -static_cast<double>(k.k1) * s;
    }
    return u;
}

SpectralField rot(const SpectralField& u) {
    require_role(u, Role::velocity, "rot");
    const auto& grid = u.grid();
    SpectralField omega(grid, Role::vorticity);
    const auto u1 = u.component(0);
    const auto u2 = u.component(1);
    auto w = omega.component(0);
    for (int idx = 0; idx < grid.size(); ++idx) {
        const WaveVector k = grid.wave(idx);
        w[idx] = kI * (static_cast<double>(k.k1) * u2[idx] - static_cast<double>(k.k2) * u1[idx]);
    }
    return omega;
}

double divergence_defect(const SpectralField& u) {
    require_role(u, Role::velocity, "divergence_defect");
    const double scale = u.max_abs();
    if (scale == 0.0) return 0.0;
    const auto& grid = u.grid();
    const auto u1 = u.component(0);
    const auto u2 = u.component(1);
    double worst = 0.0;
    for (int idx = 1; idx < grid.size(); ++idx) {
        const WaveVector k = grid.wave(idx);
        const Complex d = static_cast<double>(k.k1) * u1[idx] + static_cast<double>(k.k2) * u2[idx];
        worst = std::max(worst, std::abs(d) / std::sqrt(static_cast<double>(grid.norm2(idx))));
    }
    return worst / scale;
}

double symmetry_defect(const SpectralField& f) {
    const double scale = f.max_abs();
    if (scale == 0.0) return 0.0;
    const auto& grid = f.grid();
    const int half = grid.resolution() / 2;
    double worst = 0.0;
    for (int c = 0; c < f.components(); ++c) {
        for (int idx = 0; idx < grid.size(); ++idx) {
            const WaveVector k = grid.wave(idx);
            // The Nyquist row/column has no partner inside the array.
            if (k.k1 == -half || k.k2 == -half) continue;
            worst = std::max(worst, std::abs(f(c, -k) - std::conj(f(c, k))));
        }
    }
    return worst / scale;
}

}  // namespace nsv
