#pragma once

#include <span>
#include <vector>

#include "nsv/field.hpp"

namespace nsv {

inline constexpr double kPi = 3.14159265358979323846;
/// |T^2| for the torus [0, 2*pi]^2.
inline constexpr double kTorusArea = 4.0 * kPi * kPi;

/// Weight of the alpha-inner product (u, v)_a = (u, v) + alpha (grad u, grad v).
class AlphaMetric {
public:
    explicit AlphaMetric(double alpha = 0.0);
    double alpha() const noexcept { return alpha_; }
    /// 1 + alpha |k|^2
    double weight(int norm2) const noexcept { return 1.0 + alpha_ * norm2; }

private:
    double alpha_;
};

/// Real samples on an m x m grid, index i * m + j with x = 2*pi*(i, j)/m.
struct GridFunction {
    int m = 0;
    std::vector<double> values;

    double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * m + j]; }
};

/// Evaluates one component on an m x m grid (m >= grid resolution) by zero padding.
GridFunction synthesize(std::span<const Complex> coeffs, const SpectralGrid& grid, int m);
/// All components on an m x m grid; m = 0 selects the field's own resolution.
std::vector<GridFunction> to_physical(const SpectralField& f, int m = 0);
/// Inverse of to_physical on the native grid; truncates to the cutoff and removes the mean.
SpectralField from_physical(std::span<const GridFunction> values, const SpectralGrid& grid,
                            Role role);

/// u -> u - k (k.u)/|k|^2 per mode.
SpectralField leray_project(const SpectralField& f);
/// Multiplies every mode by |k|^s, i.e. applies A^{s/2}.
SpectralField stokes_apply(const SpectralField& u, double s);
/// (1 + alpha A)^{-1} f
SpectralField helmholtz_solve(const SpectralField& f, const AlphaMetric& metric);
/// (1 + alpha A) f
SpectralField helmholtz_apply(const SpectralField& f, const AlphaMetric& metric);
/// Zeroes every mode outside the dealiasing cutoff and the mean.
SpectralField dealias(SpectralField f);
/// Spectral derivative d/dx_axis (axis 0 or 1) of every component.
SpectralField partial(const SpectralField& f, int axis);

/// B(u, v) = P((u . grad) v), pseudo-spectral with 2/3-rule truncation.
SpectralField bilinear_B(const SpectralField& u, const SpectralField& v);
/// Truncated u . grad s for a scalar s; the mean is removed.
SpectralField advect_scalar(const SpectralField& u, const SpectralField& s);

/// (u, v)_alpha by Parseval, including the |T^2| factor.
double alpha_inner(const SpectralField& u, const SpectralField& v, const AlphaMetric& metric);
double l2_inner(const SpectralField& u, const SpectralField& v);
double l2_norm2(const SpectralField& u);
/// ||grad u||^2
double grad_norm2(const SpectralField& u);

/// Velocity u = grad^perp Delta^{-1} omega with grad^perp = (-d2, d1), i.e.
/// u_hat = i (k2, -k1) omega_hat / |k|^2, so that rot(curl_and_stream(w)) = w.
SpectralField curl_and_stream(const SpectralField& omega);
/// Scalar vorticity rot u = d1 u2 - d2 u1.
SpectralField rot(const SpectralField& u);

/// max_k |k . u_hat(k)| / |k|, relative to the largest coefficient magnitude.
double divergence_defect(const SpectralField& u);
/// max_k |coeff(-k) - conj(coeff(k))|, relative to the largest coefficient magnitude.
double symmetry_defect(const SpectralField& f);

}  // namespace nsv
