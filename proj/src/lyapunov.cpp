#include "nsv/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "nsv/fft.hpp"
#include "nsv/random_field.hpp"

namespace nsv {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kDegenerate = 1e-14;
constexpr double kStaleTolerance = 1e-6;

using Samples = std::vector<double>;

void physical(const SpectralGrid& grid, std::span<const Complex> coeffs, Samples& out) {
    transform_for(grid.resolution()).to_physical(coeffs, out);
}

// i k_axis c(k) written to dst
void derivative(std::span<const Complex> src, const SpectralGrid& grid, int axis, std::vector<Complex>& dst) {
    for (int idx = 0; idx < grid.size(); ++idx) {
        const WaveVector k = grid.wave(idx);
        dst[idx] = kI * static_cast<double>(axis == 0 ? k.k1 : k.k2) * src[idx];
    }
}

// Physical-space data of the base state shared by every tangent vector in one evaluation.
struct BaseSamples {
    Samples u1, u2;
    // velocity form: grad u as d1u1, d2u1, d1u2, d2u2; vorticity form: d1w, d2w
    std::vector<Samples> grad;
};

BaseSamples sample_base(const SpectralField& base) {
    const auto& grid = base.grid();
    const std::size_t size = static_cast<std::size_t>(grid.size());
    std::vector<Complex> scratch(size);
    BaseSamples b;
    b.u1.resize(size);
    b.u2.resize(size);
    if (base.role() == Role::velocity) {
        physical(grid, base.component(0), b.u1);
        physical(grid, base.component(1), b.u2);
        b.grad.assign(4, Samples(size));
        for (int c = 0; c < 2; ++c) {
            for (int axis = 0; axis < 2; ++axis) {
                derivative(base.component(c), grid, axis, scratch);
                physical(grid, scratch, b.grad[2 * c + axis]);
            }
        }
    } else {
        const SpectralField u = curl_and_stream(base);
        physical(grid, u.component(0), b.u1);
        physical(grid, u.component(1), b.u2);
        b.grad.assign(2, Samples(size));
        for (int axis = 0; axis < 2; ++axis) {
            derivative(base.component(0), grid, axis, scratch);
            physical(grid, scratch, b.grad[axis]);
        }
    }
    return b;
}

// Writes the truncated, projected linearised advection of t about the base into out:
//   velocity:  P(t . grad u + u . grad t)
//   vorticity: u . grad t + (grad^perp Delta^{-1} t) . grad w
void linear_advection(const SpectralField& t, const BaseSamples& b, SpectralField& out) {
    const auto& grid = t.grid();
    const std::size_t size = static_cast<std::size_t>(grid.size());
    auto& tf = transform_for(grid.resolution());
    std::vector<Complex> scratch(size);
    Samples t1(size), t2(size), d1(size), d2(size), w(size);
    if (t.role() == Role::velocity) {
        physical(grid, t.component(0), t1);
        physical(grid, t.component(1), t2);
        for (int c = 0; c < 2; ++c) {
            derivative(t.component(c), grid, 0, scratch);
            physical(grid, scratch, d1);
            derivative(t.component(c), grid, 1, scratch);
            physical(grid, scratch, d2);
            const auto& g1 = b.grad[2 * c];
            const auto& g2 = b.grad[2 * c + 1];
            for (std::size_t p = 0; p < size; ++p) {
                w[p] = t1[p] * g1[p] + t2[p] * g2[p] + b.u1[p] * d1[p] + b.u2[p] * d2[p];
            }
            tf.to_spectral(w, out.component(c));
        }
        out = leray_project(dealias(std::move(out)));
    } else {
        const SpectralField v = curl_and_stream(t);
        physical(grid, v.component(0), t1);
        physical(grid, v.component(1), t2);
        derivative(t.component(0), grid, 0, scratch);
        physical(grid, scratch, d1);
        derivative(t.component(0), grid, 1, scratch);
        physical(grid, scratch, d2);
        for (std::size_t p = 0; p < size; ++p) {
            w[p] = b.u1[p] * d1[p] + b.u2[p] * d2[p] + t1[p] * b.grad[0][p] + t2[p] * b.grad[1][p];
        }
        tf.to_spectral(w, out.component(0));
        out = dealias(std::move(out));
    }
}

// Nonlinear-part contribution to d theta / dt: -(1 + aA)^{-1} (linearised advection).
SpectralField tangent_forcing(const SpectralField& t, const BaseSamples& b, const AlphaMetric& metric) {
    SpectralField adv(t.grid(), t.role());
    linear_advection(t, b, adv);
    adv *= -1.0;
    return helmholtz_solve(adv, metric);
}

SpectralField linearized_apply(const SpectralField& t, const SpectralField& base, const SimConfig& cfg) {
    require_same_grid(t, base, "linearized_apply");
    const AlphaMetric metric(cfg.alpha);
    SpectralField out = tangent_forcing(t, sample_base(base), metric);
    const auto& grid = t.grid();
    for (int c = 0; c < t.components(); ++c) {
        const auto in = t.component(c);
        auto dst = out.component(c);
        for (int idx = 0; idx < grid.size(); ++idx) {
            const double k2 = grid.norm2(idx);
            dst[idx] -= cfg.nu * k2 / metric.weight(grid.norm2(idx)) * in[idx];
        }
    }
    return out;
}

void require_frame_role(const TangentFrame& frame, const SpectralField& base, std::string_view where) {
    for (const auto& v : frame.vectors) {
        require_role(v, base.role(), where);
        require_same_grid(v, base, where);
    }
}

// Upper-half-plane retained modes sorted by |k|^2, then lexicographically.
std::vector<WaveVector> half_plane_modes(const SpectralGrid& grid) {
    std::vector<WaveVector> modes;
    for (int idx : grid.active()) {
        const WaveVector k = grid.wave(idx);
        if (k.k1 > 0 || (k.k1 == 0 && k.k2 > 0)) modes.push_back(k);
    }
    std::sort(modes.begin(), modes.end(), [](WaveVector a, WaveVector b) {
        if (a.norm2() != b.norm2()) return a.norm2() < b.norm2();
        if (a.k1 != b.k1) return a.k1 < b.k1;
        return a.k2 < b.k2;
    });
    return modes;
}

}  // namespace

std::size_t available_directions(const SpectralGrid& grid, Role) {
    // One real direction per retained nonzero k (cos and sin pair up k with -k).
    return grid.active().size();
}

TangentFrame random_frame(const SpectralGrid& grid, Role role, std::size_t n,
                          const AlphaMetric& metric, std::uint64_t seed) {
    if (n == 0 || n > available_directions(grid, role)) {
        throw InvalidParameter("frame size " + std::to_string(n) + " outside [1, " +
                               std::to_string(available_directions(grid, role)) + "]");
    }
    constexpr int kRetries = 8;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt) * 0x9e3779b97f4a7c15ULL);
        TangentFrame frame{{}, metric};
        frame.vectors.reserve(n);
        for (std::size_t j = 0; j < n; ++j) frame.vectors.push_back(random_field(grid, role, rng, 2.0));
        try {
            alpha_gram_schmidt(frame);
            return frame;
        } catch (const DegenerateFrame&) {
        }
    }
    throw DegenerateFrame(0, "random draw stayed degenerate after retries");
}

TangentFrame eigenmode_frame(const SpectralGrid& grid, Role role, std::size_t n,
                             const AlphaMetric& metric) {
    if (n == 0 || n > available_directions(grid, role)) {
        throw InvalidParameter("frame size " + std::to_string(n) + " outside the available directions");
    }
    TangentFrame frame{{}, metric};
    for (const WaveVector k : half_plane_modes(grid)) {
        const double lambda = k.norm2();
        // ||cos(k.x) e||^2 = 2 pi^2 for a unit vector e
        const double scale = 1.0 / std::sqrt(metric.weight(k.norm2()) * 0.5 * kTorusArea);
        for (const Complex c : {Complex{0.5, 0.0}, Complex{0.0, -0.5}}) {
            if (frame.size() == n) return frame;
            SpectralField f(grid, role);
            if (role == Role::velocity) {
                const double len = std::sqrt(lambda);
                f.set_mode(0, k, scale * c * (-k.k2 / len));
                f.set_mode(1, k, scale * c * (k.k1 / len));
            } else {
                f.set_mode(0, k, scale * c);
            }
            frame.vectors.push_back(std::move(f));
        }
    }
    return frame;
}

SpectralField linearized_apply_velocity(const SpectralField& theta, const SpectralField& u,
                                        const SimConfig& cfg) {
    require_role(theta, Role::velocity, "linearized_apply_velocity");
    require_role(u, Role::velocity, "linearized_apply_velocity");
    return linearized_apply(theta, u, cfg);
}

SpectralField linearized_apply_vorticity(const SpectralField& phi, const SpectralField& omega,
                                         const SimConfig& cfg) {
    require_role(phi, Role::vorticity, "linearized_apply_vorticity");
    require_role(omega, Role::vorticity, "linearized_apply_vorticity");
    return linearized_apply(phi, omega, cfg);
}

std::vector<double> alpha_gram_schmidt(TangentFrame& frame) {
    std::vector<double> r(frame.size());
    for (std::size_t j = 0; j < frame.size(); ++j) {
        auto& v = frame.vectors[j];
        const double original = alpha_inner(v, v, frame.metric);
        for (std::size_t i = 0; i < j; ++i) {
            v.axpy(-alpha_inner(v, frame.vectors[i], frame.metric), frame.vectors[i]);
        }
        const double norm2 = alpha_inner(v, v, frame.metric);
        if (!(original > 0.0) || !(norm2 > kDegenerate * original) || !std::isfinite(norm2)) {
            throw DegenerateFrame(j);
        }
        r[j] = std::sqrt(norm2);
        v *= 1.0 / r[j];
    }
    return r;
}

Eigen::MatrixXd gram_matrix(const TangentFrame& frame) {
    const auto n = static_cast<Eigen::Index>(frame.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            g(i, j) = g(j, i) = alpha_inner(frame.vectors[i], frame.vectors[j], frame.metric);
        }
    }
    return g;
}

double gram_deviation(const TangentFrame& frame) {
    const auto g = gram_matrix(frame);
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double span_residual(const std::vector<SpectralField>& before, const TangentFrame& after) {
    double worst = 0.0;
    for (const auto& v : before) {
        SpectralField r = v;
        for (const auto& e : after.vectors) r.axpy(-alpha_inner(r, e, after.metric), e);
        const double norm = std::sqrt(alpha_inner(v, v, after.metric));
        if (norm > 0.0) worst = std::max(worst, std::sqrt(alpha_inner(r, r, after.metric)) / norm);
    }
    return worst;
}

std::vector<double> rayleigh_quotients(const TangentFrame& frame, const SpectralField& base,
                                       const SimConfig& cfg) {
    require_frame_role(frame, base, "trace_n");
    const double dev = frame.size() == 0 ? 0.0 : gram_deviation(frame);
    if (dev > kStaleTolerance) {
        throw StaleFrame("frame is not alpha-orthonormal (Gram deviation " + std::to_string(dev) + ")");
    }
    const AlphaMetric metric(cfg.alpha);
    const BaseSamples b = sample_base(base);
    std::vector<double> q;
    q.reserve(frame.size());
    const auto& grid = base.grid();
    for (const auto& t : frame.vectors) {
        SpectralField lt = tangent_forcing(t, b, metric);
        for (int c = 0; c < t.components(); ++c) {
            const auto in = t.component(c);
            auto dst = lt.component(c);
            for (int idx = 0; idx < grid.size(); ++idx) {
                dst[idx] -= cfg.nu * grid.norm2(idx) / metric.weight(grid.norm2(idx)) * in[idx];
            }
        }
        q.push_back(alpha_inner(lt, t, frame.metric));
    }
    return q;
}

double trace_n(const TangentFrame& frame, const SpectralField& base, const SimConfig& cfg) {
    const auto q = rayleigh_quotients(frame, base, cfg);
    return std::accumulate(q.begin(), q.end(), 0.0);
}

double reduced_trace(const TangentFrame& frame, const SpectralField& base, double nu) {
    require_frame_role(frame, base, "reduced_trace");
    const auto& grid = base.grid();
    const std::size_t size = static_cast<std::size_t>(grid.size());
    const BaseSamples b = sample_base(base);
    double dissipation = 0.0;
    double coupling = 0.0;
    Samples t1(size), t2(size);
    for (const auto& t : frame.vectors) {
        dissipation += grad_norm2(t);
        if (t.role() == Role::velocity) {
            physical(grid, t.component(0), t1);
            physical(grid, t.component(1), t2);
            for (std::size_t p = 0; p < size; ++p) {
                // theta_i d_i u_k theta_k
                coupling += t1[p] * (t1[p] * b.grad[0][p] + t2[p] * b.grad[1][p]) +
                            t2[p] * (t1[p] * b.grad[2][p] + t2[p] * b.grad[3][p]);
            }
        } else {
            const SpectralField v = curl_and_stream(t);
            Samples v1(size), v2(size);
            physical(grid, v.component(0), v1);
            physical(grid, v.component(1), v2);
            physical(grid, t.component(0), t1);
            for (std::size_t p = 0; p < size; ++p) {
                coupling += (v1[p] * b.grad[0][p] + v2[p] * b.grad[1][p]) * t1[p];
            }
        }
    }
    // Integrands have bandwidth <= 3 * cutoff < n, so the grid sum is exact.
    coupling *= kTorusArea / static_cast<double>(size);
    return -nu * dissipation - coupling;
}

TraceEstimate trace_upper_estimate(const TangentFrame& frame, const SpectralField& u,
                                   const SimConfig& cfg) {
    require_role(u, Role::velocity, "trace_upper_estimate");
    TraceEstimate e;
    e.trace = trace_n(frame, u, cfg);
    const auto& grid = u.grid();
    const std::size_t size = static_cast<std::size_t>(grid.size());
    const BaseSamples b = sample_base(u);
    Samples rho(size, 0.0), t1(size), t2(size);
    for (const auto& t : frame.vectors) {
        e.grad_sum += grad_norm2(t);
        physical(grid, t.component(0), t1);
        physical(grid, t.component(1), t2);
        for (std::size_t p = 0; p < size; ++p) rho[p] += t1[p] * t1[p] + t2[p] * t2[p];
    }
    double integral = 0.0;
    for (std::size_t p = 0; p < size; ++p) {
        const double g = std::sqrt(b.grad[0][p] * b.grad[0][p] + b.grad[1][p] * b.grad[1][p] +
                                   b.grad[2][p] * b.grad[2][p] + b.grad[3][p] * b.grad[3][p]);
        integral += rho[p] * g;
    }
    e.coupling = kC2 * integral * kTorusArea / static_cast<double>(size);
    e.upper = -cfg.nu * e.grad_sum + e.coupling;
    e.orthonormality_floor = static_cast<double>(frame.size()) / (cfg.alpha + 1.0);
    return e;
}

void LyapunovConfig::validate() const {
    std::vector<std::string> problems;
    try {
        sim.validate();
    } catch (const ConfigError& e) {
        problems = e.problems();
    }
    const Role role = sim.form == Form::velocity ? Role::velocity : Role::vorticity;
    if (n < 1 || n > available_directions(sim.grid, role)) {
        problems.push_back("n must lie in [1, " + std::to_string(available_directions(sim.grid, role)) + "]");
    }
    if (reorth_every < 1) problems.push_back("reorth_every must be >= 1");
    if (!(spinup >= 0.0)) problems.push_back("spinup must be >= 0");
    if (!(effective_burn_in() < sim.t_end)) {
        problems.push_back("burn_in must be shorter than t_end (no averaging window otherwise)");
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
}

TraceSeries q_n_estimate(const LyapunovConfig& cfg) {
    cfg.validate();
    const SimConfig& sim = cfg.sim;
    const NsvModel model(sim);
    const AlphaMetric metric(sim.alpha);
    const SplitStepper stepper(sim.grid, [&model](int k2) { return model.linear_rate(k2); }, sim.dt,
                               sim.effective_scheme());
    const bool velocity = sim.form == Form::velocity;
    const Role role = velocity ? Role::velocity : Role::vorticity;

    OdeState state;
    {
        const SpectralField u0 = leray_project(dealias(build_initial(sim)));
        state.fields.push_back(velocity ? u0 : rot(u0));
    }

    const NonlinearFn rhs = [&](const OdeState& x, OdeState& dx) {
        const auto& base = x.fields.front();
        dx.fields.front() = velocity ? model.nonlinear_velocity(base) : model.nonlinear_vorticity(base);
        if (x.fields.size() == 1) return;
        const BaseSamples b = sample_base(base);
        for (std::size_t j = 1; j < x.fields.size(); ++j) dx.fields[j] = tangent_forcing(x.fields[j], b, metric);
    };

    auto advance = [&](long steps, long& counter) {
        for (long s = 0; s < steps; ++s) {
            stepper.step(state, rhs);
            ++counter;
            if (!state.is_finite()) throw IntegrationDiverged(counter, counter * sim.dt);
        }
    };

    long spin_steps = 0;
    advance(std::lround(cfg.spinup / sim.dt), spin_steps);

    TangentFrame frame = random_frame(sim.grid, role, cfg.n, metric, cfg.frame_seed);
    for (auto& v : frame.vectors) state.fields.push_back(v);

    TraceSeries out;
    out.n = cfg.n;
    out.spinup = spin_steps * sim.dt;
    const double burn_in = cfg.effective_burn_in();
    const long total = sim.total_steps();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> log_r(cfg.n, 0.0);
    std::vector<double> rq_sum(cfg.n, 0.0);
    std::size_t window_samples = 0;
    double trace_sum = 0.0;
    std::optional<double> window_start;
    double window_end = 0.0;

    auto sample = [&](double t) {
        const auto q = rayleigh_quotients(frame, state.fields.front(), sim);
        const double tr = std::accumulate(q.begin(), q.end(), 0.0);
        if (!window_start && t >= burn_in - 1e-9 * sim.dt) window_start = t;
        if (window_start) {
            ++window_samples;
            trace_sum += tr;
            for (std::size_t j = 0; j < cfg.n; ++j) rq_sum[j] += q[j];
            window_end = t;
        }
        out.t.push_back(t);
        out.trace_inst.push_back(tr);
        out.trace_avg.push_back(window_samples == 0 ? nan : trace_sum / static_cast<double>(window_samples));
    };

    auto orthonormalize = [&](double t) {
        for (std::size_t j = 0; j < cfg.n; ++j) frame.vectors[j] = std::move(state.fields[j + 1]);
        std::vector<double> r;
        try {
            r = alpha_gram_schmidt(frame);
        } catch (const DegenerateFrame& e) {
            throw DegenerateFrame(e.index(), "during evolution at t = " + std::to_string(t) +
                                                 " after spin-up " + std::to_string(out.spinup));
        }
        ++out.reorthonormalizations;
        // log R_jj accrues once the window is open; the interval ending at t lies inside it.
        if (window_start && t > *window_start) {
            for (std::size_t j = 0; j < cfg.n; ++j) log_r[j] += std::log(r[j]);
        }
        for (std::size_t j = 0; j < cfg.n; ++j) state.fields[j + 1] = frame.vectors[j];
    };

    auto norms_spread = [&]() {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (std::size_t j = 1; j < state.fields.size(); ++j) {
            const double v = alpha_inner(state.fields[j], state.fields[j], metric);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi / lo;
    };

    sample(0.0);
    long steps = 0;
    for (long s = 1; s <= total; ++s) {
        advance(1, steps);
        const double t = s * sim.dt;
        if (s % cfg.reorth_every == 0) {
            orthonormalize(t);
            sample(t);
        } else if (norms_spread() > 1e12) {
            // Early barrier against loss of independence; the interval is kept in log R.
            orthonormalize(t);
        }
    }

    out.burn_in = burn_in;
    if (!window_start || window_samples < 2) {
        out.warnings.push_back("averaging window is empty; increase t_end beyond burn_in");
        out.exponents.assign(cfg.n, nan);
        out.rayleigh_means.assign(cfg.n, nan);
        out.q_hat.assign(cfg.n, nan);
        return out;
    }
    out.window = window_end - *window_start;
    for (std::size_t j = 0; j < cfg.n; ++j) {
        out.exponents.push_back(log_r[j] / out.window);
        out.rayleigh_means.push_back(rq_sum[j] / static_cast<double>(window_samples));
    }
    std::partial_sum(out.rayleigh_means.begin(), out.rayleigh_means.end(), std::back_inserter(out.q_hat));
    for (std::size_t m = 0; m < out.q_hat.size(); ++m) {
        if (out.q_hat[m] < 0.0) {
            out.n_star = m + 1;
            break;
        }
    }
    if (out.n_star) {
        for (std::size_t m = *out.n_star; m < out.q_hat.size(); ++m) {
            if (!(out.q_hat[m] < out.q_hat[m - 1])) out.eventually_decreasing = false;
        }
    }
    if (out.window < 10.0 / sim.gamma()) {
        out.warnings.push_back("averaging window " + std::to_string(out.window) + " is shorter than 10/gamma = " +
                               std::to_string(10.0 / sim.gamma()));
    }
    return out;
}

NStarScan scan_n_star(LyapunovConfig cfg, std::size_t n_max) {
    const Role role = cfg.sim.form == Form::velocity ? Role::velocity : Role::vorticity;
    n_max = std::min(n_max, available_directions(cfg.sim.grid, role));
    if (cfg.n < 1) cfg.n = 1;
    NStarScan scan;
    while (true) {
        cfg.n = std::min(cfg.n, n_max);
        scan.last = q_n_estimate(cfg);
        scan.frame_sizes.push_back(cfg.n);
        if (scan.last.n_star || cfg.n >= n_max) break;
        cfg.n *= 2;
    }
    scan.n_star = scan.last.n_star;
    return scan;
}

void write_trace_csv(std::ostream& os, const TraceSeries& series) {
    os << "t,trace_inst,trace_avg\n";
    os.precision(17);
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        os << series.t[i] << ',' << series.trace_inst[i] << ',' << series.trace_avg[i] << '\n';
    }
}

}  // namespace nsv
