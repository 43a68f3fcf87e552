#include "nsv/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace nsv {

namespace {

// The FFTW planner is not re-entrant; plan execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

Transform::Transform(int m) : m_(m) {
    auto* buf = fftw_alloc_complex(static_cast<std::size_t>(m) * m);
    buffer_ = buf;
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_2d(m, m, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_2d(m, m, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Transform::~Transform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_));
    fftw_free(buffer_);
}

void Transform::to_physical(std::span<const std::complex<double>> coeffs,
                            std::span<double> values) {
    auto* buf = static_cast<fftw_complex*>(buffer_);
    const std::size_t total = static_cast<std::size_t>(m_) * m_;
    for (std::size_t i = 0; i < total; ++i) {
        buf[i][0] = coeffs[i].real();
        buf[i][1] = coeffs[i].imag();
    }
    fftw_execute(static_cast<fftw_plan>(backward_));
    for (std::size_t i = 0; i < total; ++i) values[i] = buf[i][0];
}

void Transform::to_spectral(std::span<const double> values,
                            std::span<std::complex<double>> coeffs) {
    auto* buf = static_cast<fftw_complex*>(buffer_);
    const std::size_t total = static_cast<std::size_t>(m_) * m_;
    for (std::size_t i = 0; i < total; ++i) {
        buf[i][0] = values[i];
        buf[i][1] = 0.0;
    }
    fftw_execute(static_cast<fftw_plan>(forward_));
    const double scale = 1.0 / static_cast<double>(total);
    for (std::size_t i = 0; i < total; ++i) coeffs[i] = {buf[i][0] * scale, buf[i][1] * scale};
}

Transform& transform_for(int m) {
    thread_local std::map<int, std::unique_ptr<Transform>> cache;
    auto& slot = cache[m];
    if (!slot) slot = std::make_unique<Transform>(m);
    return *slot;
}

}  // namespace nsv
