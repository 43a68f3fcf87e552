#include "nsv/dynamics.hpp"

#include <cmath>
#include <random>
#include <string>

#include "nsv/field_io.hpp"
#include "nsv/random_field.hpp"

namespace nsv {

namespace {

constexpr Complex kMinusHalfI{0.0, -0.5};  // Fourier coefficient of sin at +k

// Stream ids keep the initial field and the perturbation statistically independent.
constexpr std::uint64_t kInitialStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kPerturbationStream = 0xc2b2ae3d27d4eb4fULL;

SpectralField random_velocity(const SpectralGrid& grid, std::uint64_t seed, double l2_norm) {
    std::mt19937_64 rng(seed);
    SpectralField u = random_field(grid, Role::velocity, rng, 3.0);
    const double norm = std::sqrt(l2_norm2(u));
    if (norm > 0.0) u *= l2_norm / norm;
    return u;
}

SpectralField shear(const SpectralGrid& grid, double amplitude, int wavenumber) {
    SpectralField u(grid, Role::velocity);
    u.set_mode(0, {0, wavenumber}, amplitude * kMinusHalfI);
    return u;
}

}  // namespace

std::string_view to_string(Form f) noexcept {
    return f == Form::velocity ? "velocity" : "vorticity";
}

Form form_from_string(std::string_view name) {
    if (name == "velocity") return Form::velocity;
    if (name == "vorticity") return Form::vorticity;
    throw InvalidParameter("unknown form '" + std::string(name) + "'");
}

std::string_view to_string(ForcingSpec::Kind k) noexcept {
    switch (k) {
        case ForcingSpec::Kind::none: return "none";
        case ForcingSpec::Kind::shear: return "shear";
        case ForcingSpec::Kind::two_mode: return "two-mode";
        case ForcingSpec::Kind::modes: return "modes";
    }
    return "none";
}

ForcingSpec::Kind forcing_kind_from_string(std::string_view name) {
    if (name == "none") return ForcingSpec::Kind::none;
    if (name == "shear") return ForcingSpec::Kind::shear;
    if (name == "two-mode") return ForcingSpec::Kind::two_mode;
    if (name == "modes") return ForcingSpec::Kind::modes;
    throw InvalidParameter("unknown forcing '" + std::string(name) + "'");
}

std::string_view to_string(InitialSpec::Kind k) noexcept {
    switch (k) {
        case InitialSpec::Kind::zero: return "zero";
        case InitialSpec::Kind::shear: return "shear";
        case InitialSpec::Kind::random: return "random";
        case InitialSpec::Kind::file: return "file";
    }
    return "zero";
}

InitialSpec::Kind initial_kind_from_string(std::string_view name) {
    if (name == "zero") return InitialSpec::Kind::zero;
    if (name == "shear") return InitialSpec::Kind::shear;
    if (name == "random") return InitialSpec::Kind::random;
    if (name == "file") return InitialSpec::Kind::file;
    throw InvalidParameter("unknown initial condition '" + std::string(name) + "'");
}

void SimConfig::validate() const {
    std::vector<std::string> problems;
    if (!(nu > 0.0) || !std::isfinite(nu)) problems.push_back("nu must be > 0");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) problems.push_back("alpha must be >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) problems.push_back("dt must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) problems.push_back("t_end must be >= 0");
    if (sample_every < 1) problems.push_back("sample_every must be >= 1");
    if (snapshot_every < 0) problems.push_back("snapshot_every must be >= 0");
    const int kmax = grid.cutoff();
    if ((forcing.kind == ForcingSpec::Kind::shear && (forcing.wavenumber < 1 || forcing.wavenumber > kmax)) ||
        (forcing.kind == ForcingSpec::Kind::two_mode && kmax < 2)) {
        problems.push_back("forcing wavenumber outside the retained band");
    }
    for (const auto& m : forcing.modes) {
        if (m.k.is_zero() || !grid.retained(m.k)) {
            problems.push_back("forcing mode (" + std::to_string(m.k.k1) + ", " +
                               std::to_string(m.k.k2) + ") outside the retained band");
        }
    }
    if (initial.kind == InitialSpec::Kind::shear &&
        (initial.wavenumber < 1 || initial.wavenumber > kmax)) {
        problems.push_back("initial wavenumber outside the retained band");
    }
    if (initial.kind == InitialSpec::Kind::file && initial.path.empty()) {
        problems.push_back("initial.path is required for a file initial condition");
    }
    if (initial.perturbation < 0.0) problems.push_back("initial.perturbation must be >= 0");
    if (!problems.empty()) throw ConfigError(std::move(problems));
}

Scheme SimConfig::effective_scheme() const noexcept {
    if (scheme) return *scheme;
    return alpha > 0.0 ? Scheme::rk4 : Scheme::integrating_factor_rk4;
}

long SimConfig::total_steps() const noexcept { return std::lround(t_end / dt); }

SpectralField build_forcing(const ForcingSpec& spec, const SpectralGrid& grid) {
    switch (spec.kind) {
        case ForcingSpec::Kind::none:
            return SpectralField(grid, Role::velocity);
        case ForcingSpec::Kind::shear:
            return shear(grid, spec.amplitude, spec.wavenumber);
        case ForcingSpec::Kind::two_mode: {
            SpectralField g = shear(grid, spec.amplitude, 1);
            g.set_mode(1, {2, 0}, spec.amplitude * kMinusHalfI);
            return g;
        }
        case ForcingSpec::Kind::modes: {
            SpectralField g(grid, Role::velocity);
            for (const auto& m : spec.modes) {
                g.set_mode(0, m.k, g(0, m.k) + m.a1);
                g.set_mode(1, m.k, g(1, m.k) + m.a2);
            }
            return leray_project(g);
        }
    }
    return SpectralField(grid, Role::velocity);
}

SpectralField build_initial(const SimConfig& cfg) {
    const auto& spec = cfg.initial;
    SpectralField u(cfg.grid, Role::velocity);
    switch (spec.kind) {
        case InitialSpec::Kind::zero:
            break;
        case InitialSpec::Kind::shear:
            u = shear(cfg.grid, spec.amplitude, spec.wavenumber);
            break;
        case InitialSpec::Kind::random:
            u = random_velocity(cfg.grid, cfg.seed ^ kInitialStream, spec.amplitude);
            break;
        case InitialSpec::Kind::file: {
            Snapshot snap = load_snapshot(spec.path);
            if (!(snap.field.grid() == cfg.grid)) {
                throw GridMismatch("initial snapshot grid does not match the configured grid");
            }
            u = snap.field.role() == Role::velocity ? leray_project(snap.field)
                                                    : curl_and_stream(snap.field);
            break;
        }
    }
    if (spec.perturbation > 0.0) {
        u += random_velocity(cfg.grid, cfg.seed ^ kPerturbationStream, spec.perturbation);
    }
    return u;
}

NsvModel::NsvModel(SimConfig cfg)
    : cfg_(std::move(cfg)),
      forcing_(build_forcing(cfg_.forcing, cfg_.grid)),
      forcing_rot_(rot(forcing_)),
      forcing_norm_(std::sqrt(l2_norm2(forcing_))) {}

SpectralField NsvModel::nonlinear_velocity(const SpectralField& u) const {
    SpectralField out = forcing_;
    out -= bilinear_B(u, u);
    return helmholtz_solve(out, metric());
}

SpectralField NsvModel::nonlinear_vorticity(const SpectralField& omega) const {
    SpectralField out = forcing_rot_;
    out -= advect_scalar(curl_and_stream(omega), omega);
    return helmholtz_solve(out, metric());
}

namespace {

void add_linear_part(const NsvModel& model, const SpectralField& x, SpectralField& out) {
    const auto& grid = x.grid();
    for (int c = 0; c < x.components(); ++c) {
        const auto in = x.component(c);
        auto dst = out.component(c);
        for (int idx = 0; idx < grid.size(); ++idx) dst[idx] += model.linear_rate(grid.norm2(idx)) * in[idx];
    }
}

}  // namespace

SpectralField NsvModel::rhs_velocity(const SpectralField& u) const {
    require_role(u, Role::velocity, "rhs_velocity");
    require_same_grid(u, forcing_, "rhs_velocity");
    SpectralField out = nonlinear_velocity(u);
    add_linear_part(*this, u, out);
    return out;
}

SpectralField NsvModel::rhs_vorticity(const SpectralField& omega) const {
    require_role(omega, Role::vorticity, "rhs_vorticity");
    require_same_grid(omega, forcing_rot_, "rhs_vorticity");
    SpectralField out = nonlinear_vorticity(omega);
    add_linear_part(*this, omega, out);
    return out;
}

double NsvModel::dissipation_rate(const SpectralField& u) const {
    return 2.0 * cfg_.nu * grad_norm2(u) - 2.0 * l2_inner(forcing_, u);
}

SpectralField rhs_velocity(const SpectralField& u, const SimConfig& cfg) {
    return NsvModel(cfg).rhs_velocity(u);
}

SpectralField rhs_vorticity(const SpectralField& omega, const SimConfig& cfg) {
    return NsvModel(cfg).rhs_vorticity(omega);
}

Integrator::Integrator(const SimConfig& cfg, const SpectralField& initial)
    : model_(cfg),
      stepper_(cfg.grid, [this](int k2) { return model_.linear_rate(k2); }, cfg.dt,
               cfg.effective_scheme()) {
    require_role(initial, Role::velocity, "Integrator");
    require_same_grid(initial, model_.forcing(), "Integrator");
    const SpectralField u0 = leray_project(dealias(initial));
    state_.fields.push_back(cfg.form == Form::velocity ? u0 : rot(u0));
    state_.scalars.push_back(0.0);

    if (cfg.form == Form::velocity) {
        nonlinear_ = [this](const OdeState& x, OdeState& dx) {
            const auto& u = x.fields.front();
            dx.fields.front() = model_.nonlinear_velocity(u);
            dx.scalars.front() = model_.dissipation_rate(u);
        };
    } else {
        nonlinear_ = [this](const OdeState& x, OdeState& dx) {
            const auto& omega = x.fields.front();
            dx.fields.front() = model_.nonlinear_vorticity(omega);
            dx.scalars.front() = model_.dissipation_rate(curl_and_stream(omega));
        };
    }
}

void Integrator::step() {
    stepper_.step(state_, nonlinear_);
    ++steps_;
    time_ = static_cast<double>(steps_) * stepper_.dt();
    if (!state_.is_finite()) throw IntegrationDiverged(steps_, time_);
}

void Integrator::advance(long steps) {
    for (long s = 0; s < steps; ++s) step();
}

SpectralField Integrator::velocity() const {
    return model_.config().form == Form::velocity ? state() : curl_and_stream(state());
}

}  // namespace nsv
