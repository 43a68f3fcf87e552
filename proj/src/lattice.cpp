#include "nsv/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nsv/error.hpp"

namespace nsv {

namespace {

std::int64_t isqrt(std::int64_t n) {
    if (n < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::int64_t floor_level(double E) {
    if (!(E >= 0.0)) return -1;
    return static_cast<std::int64_t>(std::floor(E));
}

}  // namespace

std::int64_t lattice_count(double E) {
    const std::int64_t n = floor_level(E);
    if (n < 0) return 0;
    const std::int64_t r = isqrt(n);
    std::int64_t points = 0;
    for (std::int64_t k1 = -r; k1 <= r; ++k1) points += 2 * isqrt(n - k1 * k1) + 1;
    return points - 1;
}

LatticeSpectrum::LatticeSpectrum(std::int64_t max_E) {
    if (max_E < 1) throw InvalidParameter("lattice spectrum needs max_E >= 1 (got " + std::to_string(max_E) + ")");
    mult_.assign(static_cast<std::size_t>(max_E) + 1, 0);
    const std::int64_t r = isqrt(max_E);
    for (std::int64_t k1 = -r; k1 <= r; ++k1) {
        const std::int64_t rest = isqrt(max_E - k1 * k1);
        for (std::int64_t k2 = -rest; k2 <= rest; ++k2) ++mult_[static_cast<std::size_t>(k1 * k1 + k2 * k2)];
    }
    mult_[0] = 0;

    cum_.resize(mult_.size());
    inv_.resize(mult_.size());
    std::int64_t c = 0;
    double s = 0.0;
    for (std::size_t e = 0; e < mult_.size(); ++e) {
        c += mult_[e];
        if (e > 0) s += static_cast<double>(mult_[e]) / static_cast<double>(e);
        cum_[e] = c;
        inv_[e] = s;
    }
    // Summed from the top so that small terms are added first.
    inv_sq_.assign(mult_.size() + 1, 0.0);
    for (std::size_t e = mult_.size() - 1; e > 0; --e) {
        const double de = static_cast<double>(e);
        inv_sq_[e] = inv_sq_[e + 1] + static_cast<double>(mult_[e]) / (de * de);
    }
}

LatticeSpectrum LatticeSpectrum::covering(std::int64_t j_max) {
    if (j_max < 1) throw InvalidParameter("j_max must be >= 1");
    // N(E) + 1 >= pi (sqrt E - sqrt2/2)^2 guarantees coverage for this E.
    const double root = std::sqrt((static_cast<double>(j_max) + 1.0) / std::numbers::pi) + std::sqrt(0.5);
    return LatticeSpectrum(static_cast<std::int64_t>(std::ceil(root * root)) + 1);
}

std::int64_t LatticeSpectrum::multiplicity(std::int64_t E) const {
    if (E < 0 || E > max_E()) throw InvalidParameter("level " + std::to_string(E) + " outside the spectrum");
    return mult_[static_cast<std::size_t>(E)];
}

std::int64_t LatticeSpectrum::count(double E) const {
    const std::int64_t n = floor_level(E);
    if (n < 0) return 0;
    if (n > max_E()) throw InvalidParameter("E = " + std::to_string(E) + " beyond max_E = " + std::to_string(max_E()));
    return cum_[static_cast<std::size_t>(n)];
}

std::int64_t LatticeSpectrum::eigenvalue(std::int64_t j) const {
    if (j < 1 || j > cum_.back())
        throw InvalidParameter("eigenvalue index " + std::to_string(j) + " outside 1.." + std::to_string(cum_.back()));
    return std::lower_bound(cum_.begin(), cum_.end(), j) - cum_.begin();
}

std::vector<std::int64_t> LatticeSpectrum::eigenvalues(std::int64_t j_max) const {
    if (j_max > cum_.back()) throw InvalidParameter("spectrum holds only " + std::to_string(cum_.back()) + " eigenvalues");
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(j_max, 0)));
    for (std::size_t e = 1; e < mult_.size() && static_cast<std::int64_t>(out.size()) < j_max; ++e)
        for (std::int64_t m = 0; m < mult_[e] && static_cast<std::int64_t>(out.size()) < j_max; ++m)
            out.push_back(static_cast<std::int64_t>(e));
    return out;
}

double LatticeSpectrum::inverse_sum(std::int64_t Lambda) const {
    if (Lambda < 0 || Lambda > max_E()) throw InvalidParameter("Lambda outside the spectrum");
    return inv_[static_cast<std::size_t>(Lambda)];
}

LatticeSpectrum::Bracket LatticeSpectrum::inverse_square_tail(std::int64_t Lambda) const {
    if (Lambda < 0 || Lambda >= max_E()) throw InvalidParameter("Lambda must lie below max_E");
    const double M = static_cast<double>(max_E());
    const double pi = std::numbers::pi;
    // sum_{lambda > M} lambda^{-2} = -N(M)/M^2 + 2 int_M^inf N(E) E^{-3} dE with
    // pi E -+ sqrt2 pi sqrt E + pi/2 - 1 enclosing N(E).
    const double base = -static_cast<double>(cum_.back()) / (M * M) + 2.0 * pi / M + (pi / 2.0 - 1.0) / (M * M);
    const double spread = 4.0 * std::sqrt(2.0) * pi / 3.0 * std::pow(M, -1.5);
    const double exact = inv_sq_[static_cast<std::size_t>(Lambda) + 1];
    return {exact + std::max(0.0, base - spread), exact + base + spread};
}

}  // namespace nsv
