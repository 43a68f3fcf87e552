#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsv/field.hpp"
#include "nsv/spectral_ops.hpp"
#include "nsv/time_stepper.hpp"

namespace nsv {

/// Which prognostic variable the integrator advances.
enum class Form { velocity, vorticity };

std::string_view to_string(Form f) noexcept;
Form form_from_string(std::string_view name);

struct ForcingMode {
    WaveVector k;
    Complex a1;
    Complex a2;
};

/// Right-hand side g. Named cases:
///   none      g = 0
///   shear     g = amplitude * (sin(wavenumber x2), 0)
///   two-mode  g = amplitude * ((sin x2, 0) + (0, sin 2 x1)), |k|^2 in {1, 4}
///   modes     explicit coefficients, Leray-projected and symmetrised
struct ForcingSpec {
    enum class Kind { none, shear, two_mode, modes };
    Kind kind = Kind::none;
    double amplitude = 1.0;
    int wavenumber = 1;
    std::vector<ForcingMode> modes;
};

std::string_view to_string(ForcingSpec::Kind k) noexcept;
ForcingSpec::Kind forcing_kind_from_string(std::string_view name);

/// Initial velocity. `random` draws Gaussian coefficients with |k|^{-3}
/// decay normalised to L2 norm `amplitude`; `perturbation` > 0 adds an
/// independent random field of that L2 norm on top of any kind.
struct InitialSpec {
    enum class Kind { zero, shear, random, file };
    Kind kind = Kind::zero;
    double amplitude = 1.0;
    int wavenumber = 1;
    std::string path;
    double perturbation = 0.0;
};

std::string_view to_string(InitialSpec::Kind k) noexcept;
InitialSpec::Kind initial_kind_from_string(std::string_view name);

struct SimConfig {
    double nu = 1.0;
    double alpha = 0.0;
    SpectralGrid grid{64};
    double dt = 1e-3;
    double t_end = 1.0;
    ForcingSpec forcing;
    InitialSpec initial;
    int sample_every = 10;
    std::uint64_t seed = 0;
    Form form = Form::velocity;
    /// Start of the averaging window; negative selects 5 / gamma.
    double burn_in = -1.0;
    /// Snapshot cadence in steps; 0 disables snapshots.
    int snapshot_every = 0;
    /// Unset selects rk4 for alpha > 0 and the integrating-factor variant for alpha = 0.
    std::optional<Scheme> scheme;

    /// Throws ConfigError listing every violated constraint.
    void validate() const;

    /// Decay rate nu lambda1 / (alpha lambda1 + 1) with lambda1 = 1.
    double gamma() const noexcept { return nu / (alpha + 1.0); }
    Scheme effective_scheme() const noexcept;
    double effective_burn_in() const noexcept { return burn_in < 0.0 ? 5.0 / gamma() : burn_in; }
    long total_steps() const noexcept;
};

SpectralField build_forcing(const ForcingSpec& spec, const SpectralGrid& grid);
/// Initial velocity field; deterministic given cfg (including seed).
SpectralField build_initial(const SimConfig& cfg);

/// The NSV vector field with the forcing and multipliers of one configuration.
class NsvModel {
public:
    explicit NsvModel(SimConfig cfg);

    const SimConfig& config() const noexcept { return cfg_; }
    AlphaMetric metric() const { return AlphaMetric(cfg_.alpha); }
    const SpectralField& forcing() const noexcept { return forcing_; }
    const SpectralField& forcing_rot() const noexcept { return forcing_rot_; }
    double forcing_norm() const noexcept { return forcing_norm_; }

    /// -nu lambda / (1 + alpha lambda): the viscous multiplier on an eigenmode.
    double linear_rate(int norm2) const noexcept {
        return -cfg_.nu * norm2 / (1.0 + cfg_.alpha * norm2);
    }

    /// (1 + alpha A)^{-1} (g - B(u, u))
    SpectralField nonlinear_velocity(const SpectralField& u) const;
    /// (1 - alpha Delta)^{-1} (rot g - u . grad omega)
    SpectralField nonlinear_vorticity(const SpectralField& omega) const;

    SpectralField rhs_velocity(const SpectralField& u) const;
    SpectralField rhs_vorticity(const SpectralField& omega) const;

    /// d/dt ||u||_alpha^2 + 2 nu ||grad u||^2 - 2 (g, u) vanishes; returns
    /// 2 nu ||grad u||^2 - 2 (g, u) for a velocity field.
    double dissipation_rate(const SpectralField& u) const;

private:
    SimConfig cfg_;
    SpectralField forcing_;
    SpectralField forcing_rot_;
    double forcing_norm_;
};

SpectralField rhs_velocity(const SpectralField& u, const SimConfig& cfg);
SpectralField rhs_vorticity(const SpectralField& omega, const SimConfig& cfg);

/// Owns the evolving state of one run. The state is velocity or vorticity
/// according to cfg.form; an auxiliary scalar accumulates the time integral
/// of 2 nu ||grad u||^2 - 2 (g, u) with the same Runge-Kutta stages.
class Integrator {
public:
    /// initial is a velocity field; it is converted when cfg.form is vorticity.
    Integrator(const SimConfig& cfg, const SpectralField& initial);
    Integrator(const Integrator&) = delete;
    Integrator& operator=(const Integrator&) = delete;

    /// Advances one step; throws IntegrationDiverged on a non-finite state.
    void step();
    void advance(long steps);

    double time() const noexcept { return time_; }
    long steps_taken() const noexcept { return steps_; }
    const SpectralField& state() const noexcept { return state_.fields.front(); }
    SpectralField velocity() const;
    const NsvModel& model() const noexcept { return model_; }
    const SplitStepper& stepper() const noexcept { return stepper_; }
    /// integral_0^t (2 nu ||grad u||^2 - 2 (g, u)) ds
    double dissipation_integral() const noexcept { return state_.scalars.front(); }

private:
    NsvModel model_;
    SplitStepper stepper_;
    OdeState state_;
    NonlinearFn nonlinear_;
    double time_ = 0.0;
    long steps_ = 0;
};

struct DiagnosticSample {
    double t = 0.0;
    double energy_l2 = 0.0;
    double enstrophy = 0.0;
    double energy_alpha = 0.0;
};

DiagnosticSample measure(const SpectralField& velocity, double t, const AlphaMetric& metric);

/// Sampled energies with running Cesaro means of ||grad u||^2 and ||grad u||
/// over the samples with t >= burn_in (NaN before the window opens).
struct DiagnosticsSeries {
    std::vector<DiagnosticSample> samples;
    std::vector<double> avg_enstrophy;
    std::vector<double> avg_grad;
    double burn_in = 0.0;
    double gamma = 1.0;
    double nu = 1.0;
    double forcing_norm = 0.0;
    double grashof_G = 0.0;
    double grashof_calG = 0.0;

    void push(const DiagnosticSample& s);
    /// Length of the averaging window covered so far.
    double window() const noexcept;

private:
    std::size_t window_count_ = 0;
    double window_first_t_ = 0.0;
    double sum_enstrophy_ = 0.0;
    double sum_grad_ = 0.0;
};

using SnapshotSink = std::function<void(double t, const SpectralField& velocity)>;

struct SimulationResult {
    SpectralField final_velocity;
    DiagnosticsSeries series;
    std::vector<std::string> warnings;
    long steps = 0;
    /// ||u(T)||_a^2 - ||u(0)||_a^2 + integral of the dissipation rate.
    double energy_residual = 0.0;
};

SimulationResult integrate(const SimConfig& cfg, const SnapshotSink& sink = {});
SimulationResult integrate_from(const SimConfig& cfg, const SpectralField& initial,
                                const SnapshotSink& sink = {});

struct DissipativeBoundReport {
    double max_violation = 0.0;  ///< max (lhs - rhs) / max(rhs, 1), <= tolerance passes
    double worst_time = 0.0;
    double tolerance = 0.0;
    std::size_t samples = 0;
    bool pass = true;
};

/// Checks ||u(t)||_a^2 <= ||u(0)||_a^2 e^{-gamma t} + (alpha+1)/nu^2 ||g||^2 (1 - e^{-gamma t})
/// at every sample (lambda1 = 1).
DissipativeBoundReport check_dissipative_bound(const DiagnosticsSeries& series,
                                               const SimConfig& cfg, double tolerance = 1e-9);

struct TimeAverageReport {
    double avg_enstrophy = 0.0;
    double enstrophy_bound = 0.0;
    double avg_grad = 0.0;
    double grad_bound = 0.0;
    double window = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::vector<std::string> warnings;
};

/// Finite-window surrogate of the limsup bounds on <||grad u||^2> and <||grad u||>.
TimeAverageReport check_time_averages(const DiagnosticsSeries& series, double tolerance = 1e-6);

/// CSV columns: t, energy_l2, enstrophy, energy_alpha, avg_enstrophy, avg_grad_l1,
/// grashof_G, grashof_calG.
void write_diagnostics_csv(std::ostream& os, const DiagnosticsSeries& series);

}  // namespace nsv
