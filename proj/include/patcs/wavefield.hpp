#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "patcs/fftutil.hpp"
#include "patcs/grid.hpp"
#include "patcs/quadrature.hpp"
#include "patcs/util.hpp"

namespace patcs {

inline double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

/// Free-space wave evolution of an initial datum at rest, realized as the
/// cosine Fourier multiplier on a padded periodic grid. With L >= R + T no
/// periodic image can reach the observation sphere inside the time window,
/// so the restriction to the sphere matches the free-space solution.
class WavePropagator {
 public:
  /// `free_space_guard` enforces that the compact support plus travel time
  /// stays inside the box; disable it only for intentionally periodic fields.
  explicit WavePropagator(const ScalarField3& u0, bool free_space_guard = true)
      : grid_(u0.grid),
        fft_(std::make_unique<SpectralGrid3>(u0.grid)),
        initial_(u0.values),
        guard_(free_space_guard) {
    spectrum_ = fft_->forward(u0.values);
    support_radius_ = guard_ ? u0.support_radius() : 0.0;
    // |freq| table
    int n = grid_.n, nk = n / 2 + 1;
    freq_mag_.resize(fft_->spectrum_size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < nk; ++k) {
          Vec3 f = fft_->freq(i, j, k);
          freq_mag_[fft_->spec_index(i, j, k)] = norm(f);
        }
  }

  const Grid3& grid() const { return grid_; }
  double support_radius() const { return support_radius_; }

  /// Solution at time t. t = 0 returns the initial samples bit-identically
  /// (cos(0) = 1; no transform round trip).
  ScalarField3 at_time(double t) const {
    ScalarField3 out(grid_);
    if (t == 0.0) {
      out.values = initial_;
      return out;
    }
    check_wraparound(t);
    std::vector<std::complex<double>> spec(spectrum_.size());
    const double w = 2.0 * M_PI * t;
    for (std::size_t i = 0; i < spec.size(); ++i)
      spec[i] = spectrum_[i] * std::cos(w * freq_mag_[i]);
    out.values = fft_->backward(spec);
    return out;
  }

  /// Spectrum of the solution at time t (for spectral postprocessing).
  std::vector<std::complex<double>> spectrum_at_time(double t) const {
    if (t != 0.0) check_wraparound(t);
    std::vector<std::complex<double>> spec(spectrum_.size());
    const double w = 2.0 * M_PI * t;
    for (std::size_t i = 0; i < spec.size(); ++i)
      spec[i] = spectrum_[i] * (t == 0.0 ? 1.0 : std::cos(w * freq_mag_[i]));
    return spec;
  }

  /// Spectral spatial gradient of the solution at time t.
  std::array<ScalarField3, 3> gradient_at_time(double t) const {
    if (t != 0.0) check_wraparound(t);
    int n = grid_.n, nk = n / 2 + 1;
    std::array<ScalarField3, 3> out{ScalarField3(grid_), ScalarField3(grid_),
                                    ScalarField3(grid_)};
    const double w = 2.0 * M_PI * t;
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<std::complex<double>> spec(spectrum_.size());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < nk; ++k) {
            std::size_t s = fft_->spec_index(i, j, k);
            Vec3 f = fft_->freq(i, j, k);
            double c = (t == 0.0) ? 1.0 : std::cos(w * freq_mag_[s]);
            spec[s] = spectrum_[s] * c * std::complex<double>(0.0, 2.0 * M_PI * f[axis]);
          }
      out[axis].values = fft_->backward(spec);
    }
    return out;
  }

  /// Integral of the current spectrum's field over the sphere |x| = R,
  /// exact for the trigonometric interpolant: each mode contributes
  /// 4 pi R^2 j0(2 pi |xi| R).
  double surface_integral(const std::vector<std::complex<double>>& spec, double R) const {
    int n = grid_.n, nk = n / 2 + 1;
    double acc = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < nk; ++k) {
          std::size_t s = fft_->spec_index(i, j, k);
          int mi = i <= n / 2 ? i : i - n, mj = j <= n / 2 ? j : j - n;
          double sign = ((mi + mj + k) & 1) ? -1.0 : 1.0;
          double w = fft_->hermitian_multiplicity(k) * sign *
                     sinc(2.0 * M_PI * freq_mag_[s] * R);
          acc += w * spec[s].real();
        }
    return acc * 4.0 * M_PI * R * R / static_cast<double>(grid_.size());
  }

  SpectralGrid3& fft() const { return *fft_; }

 private:
  void check_wraparound(double t) const {
    if (guard_ && support_radius_ + std::abs(t) > grid_.half_width + 1e-12)
      throw ConfigError("propagation to t=" + std::to_string(t) +
                        " would wrap around the periodic box (support radius " +
                        std::to_string(support_radius_) + ", half-width " +
                        std::to_string(grid_.half_width) + ")");
  }

  Grid3 grid_;
  std::unique_ptr<SpectralGrid3> fft_;
  std::vector<double> initial_;
  bool guard_ = true;
  std::vector<std::complex<double>> spectrum_;
  std::vector<double> freq_mag_;
  double support_radius_;
};

/// Trilinear interpolation with periodic wrap.
inline double trilinear(const ScalarField3& u, const Vec3& p) {
  const auto& g = u.grid;
  double h = g.spacing();
  double fx = (p[0] + g.half_width) / h, fy = (p[1] + g.half_width) / h,
         fz = (p[2] + g.half_width) / h;
  int i = static_cast<int>(std::floor(fx)), j = static_cast<int>(std::floor(fy)),
      k = static_cast<int>(std::floor(fz));
  double ax = fx - i, ay = fy - j, az = fz - k;
  auto wrap = [&g](int v) { return ((v % g.n) + g.n) % g.n; };
  double acc = 0;
  for (int di = 0; di < 2; ++di)
    for (int dj = 0; dj < 2; ++dj)
      for (int dk = 0; dk < 2; ++dk) {
        double w = (di ? ax : 1 - ax) * (dj ? ay : 1 - ay) * (dk ? az : 1 - az);
        acc += w * u.at(wrap(i + di), wrap(j + dj), wrap(k + dk));
      }
  return acc;
}

/// Exact trigonometric-interpolant evaluation (slow; for small node sets and
/// cross-checks).
inline std::vector<double> spectral_sample(const SpectralGrid3& fft,
                                           const std::vector<std::complex<double>>& spec,
                                           const std::vector<Vec3>& pts) {
  const auto& g = fft.grid();
  int n = g.n, nk = n / 2 + 1;
  std::vector<double> out(pts.size(), 0.0);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    double acc = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < nk; ++k) {
          Vec3 f = fft.freq(i, j, k);
          // spectrum is stored against the shifted index grid
          double phase = 2.0 * M_PI * (f[0] * (pts[p][0] + g.half_width) +
                                       f[1] * (pts[p][1] + g.half_width) +
                                       f[2] * (pts[p][2] + g.half_width));
          const auto& c = spec[fft.spec_index(i, j, k)];
          acc += fft.hermitian_multiplicity(k) *
                 (c.real() * std::cos(phase) - c.imag() * std::sin(phase));
        }
    out[p] = acc / static_cast<double>(g.size());
  }
  return out;
}

enum class SphereInterp { trilinear, spectral };

/// Restriction of a grid field to points on the sphere |x| = R.
inline std::vector<double> restrict_to_sphere(const ScalarField3& u,
                                              const std::vector<Vec3>& nodes,
                                              SphereInterp method = SphereInterp::trilinear) {
  if (!nodes.empty()) {
    double R = norm(nodes.front());
    for (const auto& p : nodes)
      if (std::abs(norm(p) - R) > 1e-9 * R)
        throw ConfigError("sphere restriction: node off the sphere by more than 1e-9 R");
    if (R >= u.grid.half_width)
      throw ConfigError("sphere radius exceeds the grid box");
  }
  if (method == SphereInterp::trilinear) {
    std::vector<double> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = trilinear(u, nodes[i]);
    return out;
  }
  SpectralGrid3 fft(u.grid);
  auto spec = fft.forward(u.values);
  return spectral_sample(fft, spec, nodes);
}

/// Pointwise-evaluable initial datum for the Kirchhoff oracle.
struct PointField {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
};

/// Spherical-surface-integral form of the solution, evaluated by product
/// Gauss quadrature over the sphere of radius t around x. Independent of the
/// spectral propagator; the quadrature domain makes the support window exact.
inline double kirchhoff_point(const PointField& u0, const Vec3& x, double t, int quad_order) {
  if (quad_order < 4) throw ConfigError("kirchhoff quadrature order must be >= 4");
  if (t <= 0.0) throw ConfigError("kirchhoff evaluation needs t > 0");
  // Gauss-Legendre nodes in z = cos(theta), periodic trapezoid in phi.
  const int nz = quad_order, nphi = 2 * quad_order;
  std::vector<double> zn, zw;
  gauss_legendre(nz, zn, zw);
  double acc = 0;
  for (int i = 0; i < nz; ++i) {
    double z = zn[i], s = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < nphi; ++j) {
      double phi = 2.0 * M_PI * j / nphi;
      Vec3 w{s * std::cos(phi), s * std::sin(phi), z};
      Vec3 y = add(x, scale(w, t));
      Vec3 d = sub(y, x);
      double v = u0.value(y);
      Vec3 gv = u0.gradient(y);
      acc += zw[i] * (v + dot(gv, d));
    }
  }
  return acc / (2.0 * nphi);  // (1/4pi) * sum w_z * (2pi/nphi)
}

/// Full space-time trace table of a grid field on a node set.
struct SphereTimeTable {
  std::vector<Vec3> nodes;
  TimeGrid tg;
  // values[node][time]
  std::vector<std::vector<double>> values;
};

inline SphereTimeTable forward_trace(const WavePropagator& prop, const std::vector<Vec3>& nodes,
                                     const TimeGrid& tg,
                                     SphereInterp method = SphereInterp::trilinear) {
  SphereTimeTable out;
  out.nodes = nodes;
  out.tg = tg;
  out.values.assign(nodes.size(), std::vector<double>(tg.samples(), 0.0));
  for (int it = 0; it < tg.samples(); ++it) {
    auto u = prop.at_time(tg.time(it));
    auto vals = restrict_to_sphere(u, nodes, method);
    for (std::size_t q = 0; q < nodes.size(); ++q) out.values[q][it] = vals[q];
  }
  return out;
}

}  // namespace patcs
