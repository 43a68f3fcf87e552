#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsv/lattice.hpp"
#include "nsv/lyapunov.hpp"

namespace nsv {

/// Outcome of one verification target. Ratios are lhs / rhs, so pass means every ratio <= 1.
struct InequalityReport {
    std::string target;
    std::string range;
    double worst_ratio = 0.0;
    std::optional<std::uint64_t> witness_seed;  ///< family attaining worst_ratio
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::vector<std::string> counterexamples;   ///< first few violations, human readable
    std::vector<std::string> near_saturation;   ///< ratios in (1 - 1e-3, 1]
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
    nlohmann::json details = nlohmann::json::object();

    bool pass() const noexcept { return violations == 0 && checked > 0; }
    /// Folds one ratio in; `what` describes the instance for counterexamples.
    void record(double ratio, const std::string& what, std::optional<std::uint64_t> seed = std::nullopt);
};

nlohmann::json to_json(const InequalityReport& report);

/// lambda_j >= j/4 (1 <= j <= j_max), lambda_j <= j/2 (2 <= j <= j_max), N(E) <= 4E and
/// pi (sqrt E - sqrt2/2)^2 <= N(E) + 1 <= pi (sqrt E + sqrt2/2)^2 for integer 1 <= E <= E_max.
InequalityReport verify_eigenvalue_bounds(std::int64_t j_max, std::int64_t E_max);

/// sum_{j<=m} lambda_j >= m^2/(2 pi) and lambda_m >= m/(2 pi) for 1 <= m <= m_max.
InequalityReport verify_liyau(std::int64_t m_max);

/// sum_{lambda<=L} 1/lambda < 4 ln(4 e L) and sum_{lambda>L} 1/lambda^2 < 8/L for 1 <= L <= L_max.
InequalityReport verify_spectral_sums(std::int64_t L_max);

enum class FamilyKind { alpha_orthonormal, gram_scaled };

std::string_view to_string(FamilyKind k) noexcept;

/// Fields whose L2 Gram matrix has spectrum in [0, certificate], certificate <= 1.
struct SuborthonormalFamily {
    std::vector<SpectralField> vectors;
    AlphaMetric metric;
    FamilyKind kind = FamilyKind::alpha_orthonormal;
    double certificate = 0.0;
    std::uint64_t seed = 0;
};

/// Largest eigenvalue of the L2 Gram matrix.
double l2_gram_max_eigenvalue(const std::vector<SpectralField>& vectors);

/// Random |k|^{-2} fields, either alpha-orthonormalised or scaled by the inverse
/// square root of their largest Gram eigenvalue. Deterministic in seed.
SuborthonormalFamily sample_suborthonormal(const SpectralGrid& grid, Role role, std::size_t n, FamilyKind kind,
                                           double alpha, std::uint64_t seed);

/// rho(x) = sum_j |u_j(x)|^2 sampled on an m x m grid.
struct RhoProfile {
    int m = 0;
    std::vector<double> values;
    double integral = 0.0;     ///< int rho
    double integral_sq = 0.0;  ///< int rho^2 = ||rho||^2
    double max = 0.0;
};

/// m = 0 selects twice the field resolution, where int rho and int rho^2 are exact.
RhoProfile rho_profile(const std::vector<SpectralField>& vectors, int m = 0);

/// One instance of an inequality: lhs <= rhs.
struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double refinement = 0.0;  ///< relative change of lhs from m = 2N to 4N
    std::vector<std::string> warnings;
};

/// int rho^2 <= (3 pi / 32) sum ||grad u_j||^2 for a divergence-free family.
InequalityCheck check_lieb_thirring(const SuborthonormalFamily& fam);
/// ||rho|| <= n^{1/2} / (2 sqrt(pi) alpha^{1/2}); family alpha-orthonormal, alpha > 0.
InequalityCheck check_rho_l2(const SuborthonormalFamily& fam);
/// ||rho||_inf^{1/2} <= 4 sqrt2 pi (ln 4eL)^{1/2} + 4 L^{-1/2} (|T^2| sum ||grad phi_j||^2)^{1/2}
/// with rho = sum |grad^perp Delta^{-1} phi_j|^2 for a scalar family.
InequalityCheck check_rho_linf(const SuborthonormalFamily& fam, std::int64_t Lambda);

struct SweepConfig {
    SpectralGrid grid{64};
    std::size_t families = 100;  ///< per alpha (or per Lambda range)
    std::uint64_t seed = 1;
    std::vector<double> alphas{0.01, 0.1, 1.0};
    std::int64_t lambda_max = 64;
};

/// Family sizes follow n = 1 + seed mod 16.
InequalityReport sweep_lieb_thirring(const SweepConfig& cfg);
InequalityReport sweep_rho_l2(const SweepConfig& cfg);
/// Every Lambda in 1..lambda_max on every family; details carry the minimising Lambda.
InequalityReport sweep_rho_linf(const SweepConfig& cfg);

/// Single shear mode (sin x2, 0) / (sqrt2 pi): int rho^2 against 3/(8 pi^2).
InequalityReport verify_lt_closed_form(const SpectralGrid& grid);

}  // namespace nsv
