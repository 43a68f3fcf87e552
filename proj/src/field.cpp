#include "nsv/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nsv {

std::string_view to_string(Role role) noexcept {
    return role == Role::velocity ? "velocity" : "vorticity";
}

Role role_from_string(std::string_view name) {
    if (name == "velocity") return Role::velocity;
    if (name == "vorticity") return Role::vorticity;
    throw InvalidParameter("unknown field role '" + std::string(name) + "'");
}

SpectralField::SpectralField(SpectralGrid grid, Role role)
    : grid_(std::move(grid)),
      role_(role),
      data_(static_cast<std::size_t>(components()) * grid_.size()) {}

void SpectralField::set_mode(int component, WaveVector k, Complex value) {
    if (!grid_.retained(k)) {
        throw InvalidParameter("mode (" + std::to_string(k.k1) + ", " + std::to_string(k.k2) +
                               ") lies outside the dealiasing cutoff");
    }
    if (k.is_zero()) {
        throw InvalidParameter("the (0, 0) mode is excluded from zero-mean fields");
    }
    (*this)(component, k) = value;
    (*this)(component, -k) = std::conj(value);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_grid(*this, other, "operator+=");
    require_role(other, role_, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_grid(*this, other, "operator-=");
    require_role(other, role_, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double a) noexcept {
    for (auto& c : data_) c *= a;
    return *this;
}

void SpectralField::axpy(double a, const SpectralField& x) {
    require_same_grid(*this, x, "axpy");
    require_role(x, role_, "axpy");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
}

void SpectralField::set_zero() noexcept { std::fill(data_.begin(), data_.end(), Complex{}); }

double SpectralField::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& c : data_) m = std::max(m, std::abs(c));
    return m;
}

bool SpectralField::is_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

void require_same_grid(const SpectralField& a, const SpectralField& b, std::string_view where) {
    if (!(a.grid() == b.grid())) {
        throw GridMismatch(std::string(where) + ": fields live on different grids (" +
                           std::to_string(a.grid().resolution()) + " vs " +
                           std::to_string(b.grid().resolution()) + ")");
    }
}

void require_role(const SpectralField& f, Role role, std::string_view where) {
    if (f.role() != role) {
        throw RoleMismatch(std::string(where) + ": expected a " + std::string(to_string(role)) +
                           " field, got " + std::string(to_string(f.role())));
    }
}

}  // namespace nsv
