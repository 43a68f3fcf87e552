#pragma once

#include <cstdint>
#include <vector>

namespace nsv {

/// N(E) = #{k in Z^2 \ {0} : |k|^2 <= E}, exact. E < 0 counts nothing.
std::int64_t lattice_count(double E);

/// Eigenvalues |k|^2, k in Z^2 \ {0}, of the Laplacian on [0, 2 pi]^2 up to max_E,
/// stored as multiplicities per integer level.
class LatticeSpectrum {
public:
    explicit LatticeSpectrum(std::int64_t max_E);

    /// Smallest spectrum holding at least j_max eigenvalues.
    static LatticeSpectrum covering(std::int64_t j_max);

    std::int64_t max_E() const noexcept { return static_cast<std::int64_t>(mult_.size()) - 1; }
    /// Number of k with |k|^2 = E.
    std::int64_t multiplicity(std::int64_t E) const;
    /// N(E) for 0 <= E <= max_E (floor taken for non-integer E).
    std::int64_t count(double E) const;
    /// lambda_j counted with multiplicity, 1 <= j <= count(max_E).
    std::int64_t eigenvalue(std::int64_t j) const;
    /// lambda_1..lambda_{j_max}, sorted.
    std::vector<std::int64_t> eigenvalues(std::int64_t j_max) const;

    /// sum over lambda <= Lambda of lambda^{-1}; needs Lambda <= max_E.
    double inverse_sum(std::int64_t Lambda) const;
    /// Bracket of sum over lambda > Lambda of lambda^{-2}: levels up to max_E are summed
    /// exactly, the rest is enclosed through the geometric bounds on N(E).
    struct Bracket {
        double lower = 0.0;
        double upper = 0.0;
    };
    Bracket inverse_square_tail(std::int64_t Lambda) const;

private:
    std::vector<std::int64_t> mult_;
    std::vector<std::int64_t> cum_;
    std::vector<double> inv_;      ///< prefix sums of mult/E
    std::vector<double> inv_sq_;   ///< suffix sums of mult/E^2 above each level
};

}  // namespace nsv
