#include "nsv/random_field.hpp"

#include <cmath>

#include "nsv/spectral_ops.hpp"

namespace nsv {

SpectralField random_field(const SpectralGrid& grid, Role role, std::mt19937_64& rng,
                           double decay, int max_wavenumber) {
    const int kmax = max_wavenumber < 0 ? grid.cutoff() : std::min(max_wavenumber, grid.cutoff());
    std::normal_distribution<double> normal(0.0, 1.0);
    SpectralField f(grid, role);
    // Walk the upper half plane in a fixed order so the draw is reproducible.
    for (int k1 = 0; k1 <= kmax; ++k1) {
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;
            const WaveVector k{k1, k2};
            const double amp = std::pow(static_cast<double>(k.norm2()), -0.5 * decay);
            for (int c = 0; c < f.components(); ++c) {
                const double re = normal(rng);
                const double im = normal(rng);
                f.set_mode(c, k, amp * Complex{re, im});
            }
        }
    }
    return role == Role::velocity ? leray_project(f) : f;
}

}  // namespace nsv
