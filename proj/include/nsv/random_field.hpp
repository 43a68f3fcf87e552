#pragma once

#include <random>

#include "nsv/field.hpp"

namespace nsv {

/// Gaussian random field with coefficient amplitudes ~ |k|^{-decay}.
///
/// Only retained modes with |k|_inf <= max_wavenumber (all retained modes if
/// max_wavenumber < 0) are populated. The result is real, zero mean and, for
/// the velocity role, divergence-free.
SpectralField random_field(const SpectralGrid& grid, Role role, std::mt19937_64& rng,
                           double decay, int max_wavenumber = -1);

}  // namespace nsv
