#pragma once

// Thin wrapper over FFTW for in-place one-dimensional transforms of any length.

#include <complex>
#include <mutex>
#include <span>

#include <fftw3.h>

namespace tlfft {

using Complex = std::complex<double>;

namespace detail {

// FFTW planning is not thread safe; execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

inline void fft_inplace(std::span<Complex> data, int sign) {
  if (data.size() <= 1) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace detail

/// g_l = sum_j h_j exp(-2 pi i l j / M), unnormalized.
inline void fft_forward(std::span<Complex> data) { detail::fft_inplace(data, FFTW_FORWARD); }

/// h_j = sum_l g_l exp(+2 pi i l j / M), unnormalized.
inline void fft_backward(std::span<Complex> data) { detail::fft_inplace(data, FFTW_BACKWARD); }

}  // namespace tlfft
