#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace toalab {

using cdouble = std::complex<double>;

namespace detail {

// FFTW's planner is not thread safe; execution of an existing plan is.
// Plans are created with FFTW_UNALIGNED so they can run on any buffer of the
// right length via the new-array execute interface.
inline void dft_inplace(std::vector<cdouble> &a, int sign) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(a.size(), sign);
    auto it = cache.find(key);
    if (it == cache.end()) {
      std::vector<cdouble> scratch(a.size());
      plan = fftw_plan_dft_1d(static_cast<int>(a.size()),
                              reinterpret_cast<fftw_complex *>(scratch.data()),
                              reinterpret_cast<fftw_complex *>(scratch.data()),
                              sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
      cache.emplace(key, plan);
    } else {
      plan = it->second;
    }
  }
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex *>(a.data()),
                   reinterpret_cast<fftw_complex *>(a.data()));
}

} // namespace detail

/// Unnormalized DFT, a_m = sum_j a_j exp(-2*pi*i*j*m/n).
inline void fft_forward(std::vector<cdouble> &a) {
  detail::dft_inplace(a, FFTW_FORWARD);
}

/// Unnormalized inverse DFT (no 1/n factor).
inline void fft_backward(std::vector<cdouble> &a) {
  detail::dft_inplace(a, FFTW_BACKWARD);
}

} // namespace toalab
