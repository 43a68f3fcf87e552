#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "nsv/error.hpp"
#include "nsv/grid.hpp"

namespace nsv {

using Complex = std::complex<double>;

enum class Role { velocity, vorticity };

std::string_view to_string(Role role) noexcept;
Role role_from_string(std::string_view name);

/// Fourier coefficients of a real, zero-mean field on the 2D torus.
///
/// Velocity fields carry two components, vorticity (scalar) fields one. The
/// physical field is u(x) = sum_k coeff(k) exp(i k.x), so the L2 norm on
/// [0, 2*pi]^2 is 4*pi^2 * sum_k |coeff(k)|^2.
class SpectralField {
public:
    SpectralField(SpectralGrid grid, Role role);

    const SpectralGrid& grid() const noexcept { return grid_; }
    Role role() const noexcept { return role_; }
    int components() const noexcept { return role_ == Role::velocity ? 2 : 1; }

    Complex& operator()(int component, WaveVector k) {
        return data_[component * grid_.size() + grid_.index(k)];
    }
    const Complex& operator()(int component, WaveVector k) const {
        return data_[component * grid_.size() + grid_.index(k)];
    }

    std::span<Complex> component(int c) {
        return {data_.data() + static_cast<std::size_t>(c) * grid_.size(),
                static_cast<std::size_t>(grid_.size())};
    }
    std::span<const Complex> component(int c) const {
        return {data_.data() + static_cast<std::size_t>(c) * grid_.size(),
                static_cast<std::size_t>(grid_.size())};
    }
    std::span<Complex> data() noexcept { return data_; }
    std::span<const Complex> data() const noexcept { return data_; }

    /// Sets coeff(k) = value and coeff(-k) = conj(value) on one component.
    void set_mode(int component, WaveVector k, Complex value);

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double a) noexcept;
    /// this += a * x
    void axpy(double a, const SpectralField& x);
    void set_zero() noexcept;

    double max_abs() const noexcept;
    bool is_finite() const noexcept;

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
    friend SpectralField operator*(SpectralField a, double s) { return a *= s; }

private:
    SpectralGrid grid_;
    Role role_;
    std::vector<Complex> data_;
};

void require_same_grid(const SpectralField& a, const SpectralField& b, std::string_view where);
void require_role(const SpectralField& f, Role role, std::string_view where);

}  // namespace nsv
