#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nsv/dynamics.hpp"

namespace nsv {

/// n tangent vectors kept orthonormal in (., .)_alpha. Velocity vectors for the
/// velocity form, scalar (vorticity) vectors for the vorticity form.
struct TangentFrame {
    std::vector<SpectralField> vectors;
    AlphaMetric metric;

    std::size_t size() const noexcept { return vectors.size(); }
};

/// Number of real tangent directions the grid can hold for a role.
std::size_t available_directions(const SpectralGrid& grid, Role role);

/// Random vectors with |k|^{-2} spectra, orthonormalised. Deterministic in seed.
TangentFrame random_frame(const SpectralGrid& grid, Role role, std::size_t n,
                          const AlphaMetric& metric, std::uint64_t seed);

/// The first n real eigenmodes (cos and sin of k.x, ordered by |k|^2),
/// normalised in (., .)_alpha.
TangentFrame eigenmode_frame(const SpectralGrid& grid, Role role, std::size_t n,
                             const AlphaMetric& metric);

/// L_u theta = -nu A (1+aA)^{-1} theta - (1+aA)^{-1} (B(theta, u) + B(u, theta))
SpectralField linearized_apply_velocity(const SpectralField& theta, const SpectralField& u,
                                        const SimConfig& cfg);
/// L_w phi = -(1-a Delta)^{-1} [u.grad phi + (grad^perp Delta^{-1} phi).grad w - nu Delta phi]
SpectralField linearized_apply_vorticity(const SpectralField& phi, const SpectralField& omega,
                                         const SimConfig& cfg);

/// Modified Gram-Schmidt in (., .)_alpha, in place. Returns the diagonal of R
/// (the alpha-norm of each vector after removing its predecessors).
/// Throws DegenerateFrame when that norm squared falls below 1e-14 of the
/// vector's original norm squared.
std::vector<double> alpha_gram_schmidt(TangentFrame& frame);

Eigen::MatrixXd gram_matrix(const TangentFrame& frame);
/// max |G_ij - delta_ij|
double gram_deviation(const TangentFrame& frame);

/// Largest distance from a vector of `before` to span(after), relative to its alpha-norm.
double span_residual(const std::vector<SpectralField>& before, const TangentFrame& after);

/// sum_j (L theta_j, theta_j)_alpha via alpha_inner. The form follows the
/// frame's role; base is u (velocity) or omega (vorticity).
/// Throws StaleFrame if the Gram deviation exceeds 1e-6.
double trace_n(const TangentFrame& frame, const SpectralField& base, const SimConfig& cfg);
/// Per-vector terms (L theta_j, theta_j)_alpha.
std::vector<double> rayleigh_quotients(const TangentFrame& frame, const SpectralField& base,
                                       const SimConfig& cfg);

/// The trace after the alpha-weights cancel, evaluated by quadrature:
///   velocity:  -nu sum ||grad theta_j||^2 - sum ((theta_j . grad) u, theta_j)
///   vorticity: -nu sum ||grad phi_j||^2 - sum (v_j . grad omega, phi_j)
double reduced_trace(const TangentFrame& frame, const SpectralField& base, double nu);

struct TraceEstimate {
    double trace = 0.0;
    double grad_sum = 0.0;           ///< sum ||grad theta_j||^2
    double coupling = 0.0;           ///< c_2 int rho |grad u|
    double upper = 0.0;              ///< -nu grad_sum + coupling
    double orthonormality_floor = 0.0;  ///< n / (alpha + 1), lower bound for grad_sum
};

/// Both sides of trace <= -nu sum ||grad theta||^2 + c_2 int rho |grad u| (velocity form).
TraceEstimate trace_upper_estimate(const TangentFrame& frame, const SpectralField& u,
                                   const SimConfig& cfg);

inline constexpr double kC2 = 0.70710678118654752440;  // sqrt(1/2)

struct LyapunovConfig {
    SimConfig sim;              ///< sim.form picks the frame role; sim.t_end is the run length
    std::size_t n = 4;
    int reorth_every = 10;
    /// Base flow integrated alone before the frame is launched.
    double spinup = 0.0;
    /// Start of the averaging window, measured from frame launch; negative selects
    /// sim.effective_burn_in().
    double burn_in = -1.0;
    std::uint64_t frame_seed = 1;

    void validate() const;
    double effective_burn_in() const noexcept { return burn_in < 0.0 ? sim.effective_burn_in() : burn_in; }
};

struct TraceSeries {
    std::size_t n = 0;
    std::vector<double> t;
    std::vector<double> trace_inst;
    std::vector<double> trace_avg;   ///< NaN before the window opens
    double burn_in = 0.0;
    double window = 0.0;
    double spinup = 0.0;
    /// Benettin exponents (log R_jj per unit time over the window), in frame order.
    std::vector<double> exponents;
    /// Window means of (L theta_j, theta_j)_alpha.
    std::vector<double> rayleigh_means;
    /// q_hat(m) for m = 1..n: prefix sums of rayleigh_means. q_hat(n) is the
    /// Cesaro mean of the sampled trace.
    std::vector<double> q_hat;
    std::optional<std::size_t> n_star;
    /// q_hat(m+1) < q_hat(m) for every m >= n_star (vacuous without n_star).
    bool eventually_decreasing = true;
    std::size_t reorthonormalizations = 0;
    std::vector<std::string> warnings;

    double q_hat_n() const { return q_hat.empty() ? 0.0 : q_hat.back(); }
};

/// Co-evolves base flow and frame with the configured stepper, re-orthonormalises
/// every reorth_every steps and samples the trace right after.
TraceSeries q_n_estimate(const LyapunovConfig& cfg);

struct NStarScan {
    std::optional<std::size_t> n_star;
    std::vector<std::size_t> frame_sizes;  ///< frame sizes actually run
    TraceSeries last;                      ///< series of the final run
};

/// Frames are nested, so one run of size m yields q_hat(1..m). The frame size is
/// doubled from cfg.n until a negative prefix appears or n_max is reached.
NStarScan scan_n_star(LyapunovConfig cfg, std::size_t n_max);

/// CSV columns t, trace_inst, trace_avg.
void write_trace_csv(std::ostream& os, const TraceSeries& series);

}  // namespace nsv
