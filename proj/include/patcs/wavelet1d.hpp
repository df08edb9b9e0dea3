#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "patcs/filters.hpp"
#include "patcs/util.hpp"

namespace patcs {

/// Values of the scaling function and mother wavelet of a Filter1D on the
/// dyadic grid k 2^-level over their common support [0, W], produced by the
/// cascade refinement. Daubechies pairs have no closed form; everything
/// downstream samples these tables.
class DyadicTable {
 public:
  DyadicTable() = default;

  DyadicTable(const Filter1D& f, int level) : level_(level), width_(f.support_width()) {
    f.validate();
    if (level < 1) throw ConfigError("dyadic table level must be >= 1");
    const int W = width_;
    const auto& h = f.lowpass;

    // scaling-function values at integers: fixed point of the two-scale matrix,
    // normalized by partition of unity (sum over integers = 1)
    std::vector<double> v0(W + 1, 0.0);
    if (W == 1) {
      v0[0] = 1.0;  // Haar
    } else {
      int n = W - 1;
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
      const double r2 = std::sqrt(2.0);
      for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) {
          int k = 2 * j - i;
          if (k >= 0 && k < f.taps()) M(j - 1, i - 1) = r2 * h[k];
        }
      Eigen::EigenSolver<Eigen::MatrixXd> es(M);
      int best = 0;
      double bestdist = 1e300;
      for (int i = 0; i < n; ++i) {
        double d = std::abs(es.eigenvalues()(i) - std::complex<double>(1.0, 0.0));
        if (d < bestdist) {
          bestdist = d;
          best = i;
        }
      }
      if (bestdist > 1e-8) throw ConfigError("two-scale matrix has no eigenvalue 1");
      double sum = 0;
      for (int i = 0; i < n; ++i) sum += es.eigenvectors().col(best)(i).real();
      for (int i = 0; i < n; ++i) v0[i + 1] = es.eigenvectors().col(best)(i).real() / sum;
    }

    // cascade: level l -> l+1 via v(x) = sqrt2 sum_m h_m v(2x - m)
    const double r2 = std::sqrt(2.0);
    std::vector<double> cur = v0;
    for (int l = 0; l < level; ++l) {
      std::size_t nl = static_cast<std::size_t>(W) << l;
      std::vector<double> nxt((static_cast<std::size_t>(W) << (l + 1)) + 1, 0.0);
      for (std::size_t k = 0; k < nxt.size(); ++k) {
        double s = 0;
        for (int m = 0; m < f.taps(); ++m) {
          long idx = static_cast<long>(k) - (static_cast<long>(m) << l);
          if (idx >= 0 && idx <= static_cast<long>(nl)) s += h[m] * cur[idx];
        }
        nxt[k] = r2 * s;
      }
      cur = std::move(nxt);
    }
    scaling_ = cur;

    // mother wavelet on the same grid: w(x) = sqrt2 sum_m g_m v(2x - m); for
    // x = k 2^-L the argument lands back on the level-L grid, so the exact
    // scaling values feed the two-scale sum directly.
    {
      std::size_t nl = static_cast<std::size_t>(W) << level;
      auto g = f.highpass();
      wavelet_.assign(nl + 1, 0.0);
      for (std::size_t k = 0; k <= nl; ++k) {
        double s = 0;
        for (int m = 0; m < f.taps(); ++m) {
          long idx = 2 * static_cast<long>(k) - (static_cast<long>(m) << level);
          if (idx >= 0 && idx <= static_cast<long>(nl)) s += g[m] * scaling_[idx];
        }
        wavelet_[k] = r2 * s;
      }
    }

    spacing_ = std::ldexp(1.0, -level);
    scaling_deriv_ = central_diff(scaling_, spacing_);
    wavelet_deriv_ = central_diff(wavelet_, spacing_);
  }

  int level() const { return level_; }
  int width() const { return width_; }
  double spacing() const { return spacing_; }
  std::size_t samples() const { return scaling_.size(); }
  const std::vector<double>& scaling_samples() const { return scaling_; }
  const std::vector<double>& wavelet_samples() const { return wavelet_; }

  /// Linear interpolation on [0, W]; zero outside.
  double eval(bool wavelet, double x) const {
    if (x <= 0.0 || x >= width_) return 0.0;
    const auto& v = wavelet ? wavelet_ : scaling_;
    double u = x / spacing_;
    auto i = static_cast<std::size_t>(u);
    double fr = u - static_cast<double>(i);
    return v[i] * (1.0 - fr) + v[i + 1] * fr;
  }

  double eval_deriv(bool wavelet, double x) const {
    if (x <= 0.0 || x >= width_) return 0.0;
    const auto& v = wavelet ? wavelet_deriv_ : scaling_deriv_;
    double u = x / spacing_;
    auto i = static_cast<std::size_t>(u);
    double fr = u - static_cast<double>(i);
    return v[i] * (1.0 - fr) + v[i + 1] * fr;
  }

  /// Grid quadrature of f*g over the support (samples vanish at both ends).
  double inner(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * spacing_;
  }

  /// <f(. - na), g(. - nb)> for same-level translates.
  double translate_inner(bool wa, long na, bool wb, long nb) const {
    const auto& a = wa ? wavelet_ : scaling_;
    const auto& b = wb ? wavelet_ : scaling_;
    long shift = (nb - na) << level_;  // b's samples lag by this many cells
    double s = 0;
    for (long i = 0; i < static_cast<long>(a.size()); ++i) {
      long j = i - shift;
      if (j >= 0 && j < static_cast<long>(b.size())) s += a[i] * b[j];
    }
    return s * spacing_;
  }

 private:
  static std::vector<double> central_diff(const std::vector<double>& v, double h) {
    std::vector<double> d(v.size(), 0.0);
    if (v.size() < 3) return d;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d.front() = (v[1] - v[0]) / h;
    d.back() = (v[v.size() - 1] - v[v.size() - 2]) / h;
    return d;
  }

  int level_ = 0;
  int width_ = 0;
  double spacing_ = 0;
  std::vector<double> scaling_, wavelet_;
  std::vector<double> scaling_deriv_, wavelet_deriv_;
};

}  // namespace patcs
