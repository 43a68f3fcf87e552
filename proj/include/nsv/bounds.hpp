#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace nsv {

enum class Geometry { torus, bounded_domain };

std::string_view to_string(Geometry g) noexcept;
Geometry geometry_from_string(std::string_view name);

/// Physical parameters of one dimension estimate. Defaults describe the
/// 2D torus [0, 2 pi]^2.
struct BoundsInput {
    int d = 2;
    double nu = 1.0;
    double alpha = 0.0;
    double g_norm = 1.0;
    double lambda1 = 1.0;
    double domain_measure = 39.47841760435743;  // 4 pi^2
    Geometry geometry = Geometry::torus;

    /// Throws ConfigError listing every problem.
    void validate() const;

    /// ||g|| / (lambda1 nu^2) for d = 2, ||g|| / (lambda1^{3/4} nu^2) for d = 3.
    double G() const noexcept;
    /// ||g|| |Omega| / nu^2
    double calG() const noexcept;
    double alpha_lambda1() const noexcept { return alpha * lambda1; }
};

/// Lieb-Thirring and related constants.
struct ConstantsTable {
    static double c_lt(int d, Geometry g);
    /// sqrt(1/2) for d = 2, sqrt(2/3) for d = 3.
    static double c_d(int d);
    static double k1() noexcept;        ///< 16 sqrt(pi)
    static double k1_prime() noexcept;  ///< 2^{15/4} sqrt(pi)
    static double k2() noexcept;        ///< 3 ln 2 + 2

    /// c_LT(R^2)^{1/2} / (2 sqrt 2 pi), printed as 0.055
    static double classical_domain() noexcept;
    /// c_LT(R^2)^{1/2} / (sqrt 2 pi), printed as 0.109
    static double linear_domain() noexcept;
    /// 3^{1/2} / (8 pi^{3/2}), printed as 0.039
    static double linear_torus() noexcept;
    /// sqrt(c_LT(T^2)) / (2 pi^2), printed as 0.028
    static double classical_torus() noexcept;
    /// (2/pi)(sqrt 2 k1)^{2/3}, printed as 7.46
    static double log_factor() noexcept;
    /// k2/2 + ln(sqrt 2 k1), printed as 5.74
    static double log_shift() noexcept;
    /// 2^{10/3} / pi^{2/3}, printed as 4.7
    static double classical_log_factor() noexcept;
    /// (1/2) ln pi + (23/4) ln 2 + 1, printed as 5.56
    static double classical_log_shift() noexcept;
};

enum class Validity { ok, out_of_range, modulo_constant };

std::string_view to_string(Validity v) noexcept;

struct BoundEntry {
    std::string name;
    std::string formula;  ///< short identifier of the estimate
    double value = 0.0;
    Validity validity = Validity::ok;
    std::string reason;   ///< why out_of_range / modulo_constant
    std::string branch;   ///< active argument of a min, if any
};

/// (a+1)^2 / (8 pi a) G^2 in 2D, (a+1)^2 / (6 pi a^{3/2}) G^2 in 3D, a = alpha lambda1.
/// alpha = 0 gives +inf flagged out_of_range.
BoundEntry bound_thm23(const BoundsInput& in);
/// C(1+a)G^{5/2}((1+a)a^{-3/4}G^{3/2}+1) with a = alpha lambda1; d = 3 only.
BoundEntry bound_thm27_3d(const BoundsInput& in, double C = 1.0);
/// a^{-3/4} G^2 min[a^{-3/4}, G^2]; d = 3 only.
BoundEntry symmetric_form(const BoundsInput& in);
/// (a+1) c_LT / 2 G^2; d = 2 only.
BoundEntry bound_2d_quadratic(const BoundsInput& in);
/// constant * calG, valid for alpha <= alpha0; d = 2 only.
BoundEntry bound_2d_linear(const BoundsInput& in);
/// min[linear torus constant * calG, (2/pi)(sqrt2 k1)^{2/3} calG^{2/3} (ln calG + shift)^{1/3}]
/// with exact constants; d = 2 torus only.
BoundEntry bound_2d_log(const BoundsInput& in);

/// alpha0 of the linear estimate: |Omega|/(2 pi calG) (domain), |Omega|/(pi^2 calG) (torus).
double alpha0(const BoundsInput& in);

struct ClassicalBounds {
    BoundEntry lieb;                   ///< c_LT^{1/2}/(2 sqrt2 pi) calG
    std::optional<BoundEntry> torus;   ///< sqrt(c_LT(T^2))/(2 pi^2) calG
    std::optional<BoundEntry> log_min; ///< min of the linear and logarithmic torus branches
    double min = 0.0;
};

/// Bounds for the classical Navier-Stokes system; throws WrongRegime unless alpha = 0.
ClassicalBounds classical_ns_bounds(const BoundsInput& in);

/// Which constants a root equation uses.
enum class ConstantSet { printed, exact };

struct Thresholds {
    double g0 = 0.0;               ///< root of x = 7.46 x^{2/3}(ln x + 5.74)^{1/3}
    double g0_alt = 0.0;           ///< same with 5.24
    double crossover_log = 0.0;    ///< where the log branch drops below the linear one
    double crossover_classical = 0.0;
    ConstantSet constants = ConstantSet::printed;
};

/// Root finding by bisection; NumericalError carries the bracket on failure.
Thresholds thresholds(ConstantSet constants = ConstantSet::printed);

/// Bisection for a sign change of f on [lo, hi].
double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol = 1e-12,
              int max_iter = 400);

struct DimBoundReport {
    BoundsInput input;
    double G = 0.0;
    double calG = 0.0;
    double alpha_lambda1 = 0.0;
    std::optional<double> alpha0;
    std::vector<BoundEntry> entries;
};

/// Every estimate applicable to the input's dimension, geometry and regime.
DimBoundReport evaluate_bounds(const BoundsInput& in);

nlohmann::json to_json(const DimBoundReport& report);
nlohmann::json constants_json();
nlohmann::json to_json(const Thresholds& t);
void write_bounds_table(std::ostream& os, const DimBoundReport& report);

}  // namespace nsv
