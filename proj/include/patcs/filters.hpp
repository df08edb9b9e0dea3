#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "patcs/util.hpp"

namespace patcs {

/// Orthonormal two-scale lowpass filter. Taps are normalized so they sum to
/// sqrt(2) and satisfy the quadrature-mirror orthonormality conditions
///   sum_k h_k h_{k+2m} = delta_{m0}.
struct Filter1D {
  std::string name;
  std::vector<double> lowpass;  // h_0 .. h_{L-1}, support [offset, offset+L-1]
  int support_offset = 0;
  int smoothness_order = 0;  // floor of the Hoelder regularity of the scaling pair

  int taps() const { return static_cast<int>(lowpass.size()); }
  /// 1D support length of the scaling function and mother wavelet.
  int support_width() const { return taps() - 1; }

  /// Highpass taps g_m = (-1)^m h_{L-1-m}.
  std::vector<double> highpass() const {
    std::vector<double> g(lowpass.size());
    for (std::size_t m = 0; m < lowpass.size(); ++m)
      g[m] = ((m & 1) ? -1.0 : 1.0) * lowpass[lowpass.size() - 1 - m];
    return g;
  }

  double qmf_defect() const {
    const int L = taps();
    double worst = 0;
    for (int m = 0; 2 * m < L; ++m) {
      double s = 0;
      for (int k = 0; k + 2 * m < L; ++k) s += lowpass[k] * lowpass[k + 2 * m];
      worst = std::max(worst, std::abs(s - (m == 0 ? 1.0 : 0.0)));
    }
    double sum = 0;
    for (double h : lowpass) sum += h;
    worst = std::max(worst, std::abs(sum - std::sqrt(2.0)));
    return worst;
  }

  void validate(double tol = 1e-12) const {
    if (taps() < 2 || taps() % 2 != 0)
      throw ConfigError("filter '" + name + "': tap count must be even and >= 2");
    double d = qmf_defect();
    if (d > tol)
      throw ConfigError("filter '" + name + "' fails quadrature-mirror conditions (defect " +
                        std::to_string(d) + ")");
  }
};

namespace detail {

inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
  // coeffs[k] multiplies y^k; companion-matrix eigenvalues
  int n = static_cast<int>(coeffs.size()) - 1;
  if (n <= 0) return {};
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -coeffs[i] / coeffs[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(C);
  std::vector<std::complex<double>> r(n);
  for (int i = 0; i < n; ++i) r[i] = es.eigenvalues()(i);
  return r;
}

}  // namespace detail

/// Daubechies extremal-phase filter with p vanishing moments (2p taps),
/// computed by spectral factorization of the Daubechies polynomial.
inline Filter1D daubechies_filter(int p) {
  if (p < 1 || p > 12) throw ConfigError("daubechies order out of range [1,12]");
  if (p == 1) {
    double r = 1.0 / std::sqrt(2.0);
    return Filter1D{"db1", {r, r}, 0, 0};
  }

  using cd = std::complex<double>;
  // P(y) = sum_{k<p} binom(p-1+k, k) y^k
  std::vector<double> P(p);
  P[0] = 1.0;
  for (int k = 1; k < p; ++k) P[k] = P[k - 1] * double(p - 1 + k) / double(k);
  auto yroots = detail::poly_roots(P);

  // per root y: z^2 - (2 - 4y) z + 1 = 0, keep |z| < 1
  std::vector<cd> zroots;
  for (const auto& y : yroots) {
    cd b = 2.0 - 4.0 * y;
    cd disc = std::sqrt(b * b - 4.0);
    cd z1 = (b + disc) / 2.0, z2 = (b - disc) / 2.0;
    zroots.push_back(std::abs(z1) < std::abs(z2) ? z1 : z2);
  }

  // H(z) = sqrt2 ((1+z)/2)^p prod (z - z_i), then normalize H(1) = sqrt2
  std::vector<cd> h{1.0};
  auto mul = [&h](cd a0, cd a1) {  // multiply by (a0 + a1 z)
    std::vector<cd> out(h.size() + 1, cd(0));
    for (std::size_t i = 0; i < h.size(); ++i) {
      out[i] += a0 * h[i];
      out[i + 1] += a1 * h[i];
    }
    h = std::move(out);
  };
  for (int i = 0; i < p; ++i) mul(0.5, 0.5);
  for (const auto& z0 : zroots) mul(-z0, 1.0);

  cd at1(0);
  for (const auto& c : h) at1 += c;
  double s = std::sqrt(2.0) / at1.real();

  std::vector<double> taps(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) taps[i] = h[i].real() * s;
  // extremal-phase convention: dominant energy at the front
  if (std::abs(taps.front()) < std::abs(taps.back())) std::reverse(taps.begin(), taps.end());

  // floor of the known Hoelder regularity of the db-p scaling pair
  static const int hoelder_floor[] = {0, 0, 0, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3};
  Filter1D f{"db" + std::to_string(p), std::move(taps), 0, hoelder_floor[p]};
  f.validate();
  return f;
}

inline Filter1D filter_by_name(const std::string& name) {
  if (name.rfind("db", 0) == 0) {
    int p = std::stoi(name.substr(2));
    return daubechies_filter(p);
  }
  throw ConfigError("unknown filter '" + name + "'");
}

}  // namespace patcs
