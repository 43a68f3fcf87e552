#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "nsv/field.hpp"

namespace nsv {

enum class Scheme { rk4, integrating_factor_rk4 };

std::string_view to_string(Scheme s) noexcept;

/// A block of coupled fields plus auxiliary scalar channels.
struct OdeState {
    std::vector<SpectralField> fields;
    std::vector<double> scalars;

    void axpy(double a, const OdeState& x);
    bool is_finite() const noexcept;
};

/// Writes the nonlinear part N(x) of dx/dt = L x + N(x) into dxdt.
/// dxdt arrives with the same shape as x.
using NonlinearFn = std::function<void(const OdeState& x, OdeState& dxdt)>;

/// Fixed-step fourth order stepper for dx/dt = L x + N(x) with L diagonal in
/// Fourier space (the same multiplier on every field, none on the scalars).
///
/// Scheme::rk4 is the classical Runge-Kutta method on the full right-hand
/// side. Scheme::integrating_factor_rk4 is Lawson's method: RK4 applied to
/// exp(-L t) x, so L is integrated exactly.
class SplitStepper {
public:
    SplitStepper(const SpectralGrid& grid, const std::function<double(int norm2)>& rate, double dt,
                 Scheme scheme);

    void step(OdeState& x, const NonlinearFn& nonlinear) const;

    double dt() const noexcept { return dt_; }
    Scheme scheme() const noexcept { return scheme_; }

private:
    void add_linear(const OdeState& x, OdeState& dxdt) const;
    void propagate(OdeState& x, const std::vector<double>& factor) const;
    void step_rk4(OdeState& x, const NonlinearFn& nonlinear) const;
    void step_lawson(OdeState& x, const NonlinearFn& nonlinear) const;

    double dt_;
    Scheme scheme_;
    std::vector<double> rate_;
    std::vector<double> full_;
    std::vector<double> half_;
};

}  // namespace nsv
