#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

#include "patcs/grid.hpp"
#include "patcs/util.hpp"

namespace patcs {

// FFTW planning is not thread-safe; execution on distinct buffers is.
inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

/// Forward/backward real 3D transforms for one grid size. Plans are created
/// with FFTW_ESTIMATE so that plan selection (and therefore rounding) is
/// reproducible across runs.
class SpectralGrid3 {
 public:
  explicit SpectralGrid3(const Grid3& g) : grid_(g), nc_(g.n * g.n * (g.n / 2 + 1)) {
    real_ = fftw_alloc_real(g.size());
    cplx_ = fftw_alloc_complex(nc_);
    std::lock_guard<std::mutex> lk(fftw_plan_mutex());
    fwd_ = fftw_plan_dft_r2c_3d(g.n, g.n, g.n, real_, cplx_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_3d(g.n, g.n, g.n, cplx_, real_, FFTW_ESTIMATE);
  }
  ~SpectralGrid3() {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(cplx_);
  }
  SpectralGrid3(const SpectralGrid3&) = delete;
  SpectralGrid3& operator=(const SpectralGrid3&) = delete;

  const Grid3& grid() const { return grid_; }
  std::size_t spectrum_size() const { return nc_; }

  std::vector<std::complex<double>> forward(const std::vector<double>& v) {
    std::copy(v.begin(), v.end(), real_);
    fftw_execute(fwd_);
    std::vector<std::complex<double>> out(nc_);
    for (std::size_t i = 0; i < nc_; ++i) out[i] = {cplx_[i][0], cplx_[i][1]};
    return out;
  }

  std::vector<double> backward(const std::vector<std::complex<double>>& spec) {
    for (std::size_t i = 0; i < nc_; ++i) {
      cplx_[i][0] = spec[i].real();
      cplx_[i][1] = spec[i].imag();
    }
    fftw_execute(bwd_);
    std::vector<double> out(grid_.size());
    double inv = 1.0 / static_cast<double>(grid_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = real_[i] * inv;
    return out;
  }

  /// Frequency vector (cycles per unit length) of r2c spectrum entry (i,j,k).
  Vec3 freq(int i, int j, int k) const {
    int n = grid_.n;
    auto wrap = [n](int m) { return m <= n / 2 ? m : m - n; };
    double f = 1.0 / (2.0 * grid_.half_width);
    return {wrap(i) * f, wrap(j) * f, k * f};
  }
  std::size_t spec_index(int i, int j, int k) const {
    int nk = grid_.n / 2 + 1;
    return (static_cast<std::size_t>(i) * grid_.n + j) * nk + k;
  }
  /// r2c entries with 0 < k < n/2 represent a conjugate pair.
  double hermitian_multiplicity(int k) const {
    return (k == 0 || k == grid_.n / 2) ? 1.0 : 2.0;
  }

 private:
  Grid3 grid_;
  std::size_t nc_;
  double* real_;
  fftw_complex* cplx_;
  fftw_plan fwd_, bwd_;
};

/// 1D complex FFT of real input (returns full complex spectrum), used for the
/// projection-profile convolutions and 1D energy spectra.
inline std::vector<std::complex<double>> fft_real_1d(const std::vector<double>& v) {
  std::size_t n = v.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  double* in = fftw_alloc_real(n);
  fftw_complex* sp = fftw_alloc_complex(n / 2 + 1);
  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex());
    fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, sp, FFTW_ESTIMATE);
    std::copy(v.begin(), v.end(), in);
    fftw_execute(p);
    fftw_destroy_plan(p);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {sp[i][0], sp[i][1]};
  fftw_free(in);
  fftw_free(sp);
  return out;
}

inline std::vector<double> ifft_real_1d(const std::vector<std::complex<double>>& sp,
                                        std::size_t n) {
  std::vector<double> out(n);
  fftw_complex* in = fftw_alloc_complex(n / 2 + 1);
  double* re = fftw_alloc_real(n);
  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex());
    fftw_plan p = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, re, FFTW_ESTIMATE);
    for (std::size_t i = 0; i < sp.size(); ++i) {
      in[i][0] = sp[i].real();
      in[i][1] = sp[i].imag();
    }
    fftw_execute(p);
    fftw_destroy_plan(p);
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = re[i] / static_cast<double>(n);
  fftw_free(in);
  fftw_free(re);
  return out;
}

}  // namespace patcs
