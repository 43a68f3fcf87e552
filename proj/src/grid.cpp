#include "nsv/grid.hpp"

#include <string>

#include "nsv/error.hpp"

namespace nsv {

SpectralGrid::SpectralGrid(int resolution, int dealias_cutoff) : n_(resolution) {
    if (resolution < 8 || resolution % 2 != 0) {
        throw InvalidParameter("grid resolution must be even and >= 8, got " +
                               std::to_string(resolution));
    }
    // Products of two retained modes alias back onto retained modes unless
    // 3 * cutoff < n.
    const int max_cutoff = (resolution - 1) / 3;
    cutoff_ = dealias_cutoff < 0 ? max_cutoff : dealias_cutoff;
    if (cutoff_ < 1 || cutoff_ > max_cutoff) {
        throw InvalidParameter("dealias cutoff must lie in [1, " + std::to_string(max_cutoff) +
                               "] for resolution " + std::to_string(resolution) + ", got " +
                               std::to_string(dealias_cutoff));
    }

    auto tables = std::make_shared<Tables>();
    const int size = n_ * n_;
    tables->k1.resize(size);
    tables->k2.resize(size);
    tables->norm2.resize(size);
    tables->retained.resize(size);
    for (int i = 0; i < n_; ++i) {
        const int k1 = i < n_ / 2 ? i : i - n_;
        for (int j = 0; j < n_; ++j) {
            const int k2 = j < n_ / 2 ? j : j - n_;
            const int idx = i * n_ + j;
            tables->k1[idx] = k1;
            tables->k2[idx] = k2;
            tables->norm2[idx] = k1 * k1 + k2 * k2;
            const bool keep = std::abs(k1) <= cutoff_ && std::abs(k2) <= cutoff_;
            tables->retained[idx] = keep ? 1 : 0;
            if (keep && idx != 0) tables->active.push_back(idx);
        }
    }
    tables_ = std::move(tables);
}

}  // namespace nsv
