#include "nsv/time_stepper.hpp"

#include <cmath>

namespace nsv {

std::string_view to_string(Scheme s) noexcept {
    return s == Scheme::rk4 ? "rk4" : "integrating-factor-rk4";
}

void OdeState::axpy(double a, const OdeState& x) {
    for (std::size_t i = 0; i < fields.size(); ++i) fields[i].axpy(a, x.fields[i]);
    for (std::size_t i = 0; i < scalars.size(); ++i) scalars[i] += a * x.scalars[i];
}

bool OdeState::is_finite() const noexcept {
    for (const auto& f : fields) {
        if (!f.is_finite()) return false;
    }
    for (double s : scalars) {
        if (!std::isfinite(s)) return false;
    }
    return true;
}

SplitStepper::SplitStepper(const SpectralGrid& grid, const std::function<double(int)>& rate,
                           double dt, Scheme scheme)
    : dt_(dt), scheme_(scheme) {
    const auto size = static_cast<std::size_t>(grid.size());
    rate_.resize(size);
    full_.resize(size);
    half_.resize(size);
    for (std::size_t idx = 0; idx < size; ++idx) {
        rate_[idx] = rate(grid.norm2(static_cast<int>(idx)));
        full_[idx] = std::exp(rate_[idx] * dt);
        half_[idx] = std::exp(rate_[idx] * 0.5 * dt);
    }
}

void SplitStepper::step(OdeState& x, const NonlinearFn& nonlinear) const {
    if (scheme_ == Scheme::rk4) {
        step_rk4(x, nonlinear);
    } else {
        step_lawson(x, nonlinear);
    }
}

void SplitStepper::add_linear(const OdeState& x, OdeState& dxdt) const {
    for (std::size_t f = 0; f < x.fields.size(); ++f) {
        for (int c = 0; c < x.fields[f].components(); ++c) {
            const auto in = x.fields[f].component(c);
            auto out = dxdt.fields[f].component(c);
            for (std::size_t idx = 0; idx < rate_.size(); ++idx) out[idx] += rate_[idx] * in[idx];
        }
    }
}

void SplitStepper::propagate(OdeState& x, const std::vector<double>& factor) const {
    for (auto& field : x.fields) {
        for (int c = 0; c < field.components(); ++c) {
            auto comp = field.component(c);
            for (std::size_t idx = 0; idx < factor.size(); ++idx) comp[idx] *= factor[idx];
        }
    }
}

void SplitStepper::step_rk4(OdeState& x, const NonlinearFn& nonlinear) const {
    const double h = dt_;
    auto eval = [&](const OdeState& at, OdeState& out) {
        for (auto& f : out.fields) f.set_zero();
        for (auto& s : out.scalars) s = 0.0;
        nonlinear(at, out);
        add_linear(at, out);
    };

    OdeState k1 = x, k2 = x, k3 = x, k4 = x;
    eval(x, k1);
    OdeState stage = x;
    stage.axpy(0.5 * h, k1);
    eval(stage, k2);
    stage = x;
    stage.axpy(0.5 * h, k2);
    eval(stage, k3);
    stage = x;
    stage.axpy(h, k3);
    eval(stage, k4);

    x.axpy(h / 6.0, k1);
    x.axpy(h / 3.0, k2);
    x.axpy(h / 3.0, k3);
    x.axpy(h / 6.0, k4);
}

void SplitStepper::step_lawson(OdeState& x, const NonlinearFn& nonlinear) const {
    const double h = dt_;
    auto eval = [&](const OdeState& at, OdeState& out) {
        for (auto& f : out.fields) f.set_zero();
        for (auto& s : out.scalars) s = 0.0;
        nonlinear(at, out);
    };

    // Stage values in the original variables:
    //   a = E(h/2) (x + h/2 N(x)),   b = E(h/2) x + h/2 N(a),
    //   c = E(h) x + h E(h/2) N(b),
    //   x' = E(h) x + h/6 (E(h) N(x) + 2 E(h/2) (N(a) + N(b)) + N(c)).
    OdeState n0 = x, na = x, nb = x, nc = x;
    eval(x, n0);

    OdeState a = x;
    a.axpy(0.5 * h, n0);
    propagate(a, half_);
    eval(a, na);

    OdeState b = x;
    propagate(b, half_);
    b.axpy(0.5 * h, na);
    eval(b, nb);

    OdeState c = x;
    propagate(c, full_);
    OdeState nb_half = nb;
    propagate(nb_half, half_);
    c.axpy(h, nb_half);
    eval(c, nc);

    OdeState mid = na;
    mid.axpy(1.0, nb);
    propagate(mid, half_);
    propagate(n0, full_);
    propagate(x, full_);
    x.axpy(h / 6.0, n0);
    x.axpy(h / 3.0, mid);
    x.axpy(h / 6.0, nc);
}

}  // namespace nsv
