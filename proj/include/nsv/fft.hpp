#pragma once

#include <complex>
#include <span>

namespace nsv {

/// FFTW plan pair for an m x m periodic grid with its own work buffer.
///
/// Not thread-safe; use transform_for() to get a per-thread instance.
class Transform {
public:
    explicit Transform(int m);
    ~Transform();
    Transform(const Transform&) = delete;
    Transform& operator=(const Transform&) = delete;

    int size() const noexcept { return m_; }

    /// coeffs (FFT order, m*m) -> real grid values at x = 2*pi*(i, j)/m.
    void to_physical(std::span<const std::complex<double>> coeffs, std::span<double> values);
    /// Real grid values -> coefficients, normalised so that to_physical inverts it.
    void to_spectral(std::span<const double> values, std::span<std::complex<double>> coeffs);

private:
    int m_;
    void* buffer_;
    void* forward_;
    void* backward_;
};

/// Per-thread cached transform for an m x m grid.
Transform& transform_for(int m);

}  // namespace nsv
