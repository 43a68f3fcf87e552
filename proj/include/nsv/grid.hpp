#pragma once

#include <cstdlib>
#include <memory>
#include <vector>

namespace nsv {

/// Integer wave vector on Z^2. |k|^2 is an eigenvalue of the torus Laplacian.
struct WaveVector {
    int k1 = 0;
    int k2 = 0;

    constexpr int norm2() const noexcept { return k1 * k1 + k2 * k2; }
    constexpr bool is_zero() const noexcept { return k1 == 0 && k2 == 0; }
    constexpr WaveVector operator-() const noexcept { return {-k1, -k2}; }
    friend constexpr bool operator==(WaveVector, WaveVector) = default;
};

/// Square Fourier grid on [0, 2*pi]^2 with a 2/3-rule truncation.
///
/// Coefficients are stored in FFT order: index = i * n + j, where i carries
/// k1 and j carries k2, and an index m maps to the wavenumber m for m < n/2
/// and m - n otherwise. Only modes with max(|k1|, |k2|) <= cutoff are
/// retained; everything else (including the Nyquist row/column) is zero.
class SpectralGrid {
public:
    /// cutoff < 0 selects the largest exact-dealiasing value (n - 1) / 3.
    explicit SpectralGrid(int resolution = 64, int dealias_cutoff = -1);

    int resolution() const noexcept { return n_; }
    int cutoff() const noexcept { return cutoff_; }
    int size() const noexcept { return n_ * n_; }

    int index(WaveVector k) const noexcept {
        const int i = k.k1 < 0 ? k.k1 + n_ : k.k1;
        const int j = k.k2 < 0 ? k.k2 + n_ : k.k2;
        return i * n_ + j;
    }
    WaveVector wave(int idx) const noexcept { return {tables_->k1[idx], tables_->k2[idx]}; }
    int norm2(int idx) const noexcept { return tables_->norm2[idx]; }
    bool retained(int idx) const noexcept { return tables_->retained[idx] != 0; }
    bool retained(WaveVector k) const noexcept {
        return std::abs(k.k1) <= cutoff_ && std::abs(k.k2) <= cutoff_;
    }
    /// Flat indices of the retained nonzero modes, in FFT order.
    const std::vector<int>& active() const noexcept { return tables_->active; }

    friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) noexcept {
        return a.n_ == b.n_ && a.cutoff_ == b.cutoff_;
    }

private:
    struct Tables {
        std::vector<int> k1, k2, norm2;
        std::vector<char> retained;
        std::vector<int> active;
    };

    int n_;
    int cutoff_;
    std::shared_ptr<const Tables> tables_;
};

}  // namespace nsv
