#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "patcs/util.hpp"

namespace patcs {

/// Uniform periodic grid on [-L, L)^3 with a power-of-two point count per axis.
struct Grid3 {
  double half_width = 0;  // L
  int n = 0;              // points per axis

  Grid3() = default;
  Grid3(double L, int points) : half_width(L), n(points) {
    if (L <= 0) throw ConfigError("grid half-width must be positive");
    if (points < 8 || (points & (points - 1)) != 0)
      throw ConfigError("grid points per axis must be a power of two >= 8");
  }

  double spacing() const { return 2.0 * half_width / n; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  double coord(int i) const { return -half_width + i * spacing(); }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  bool operator==(const Grid3& o) const { return half_width == o.half_width && n == o.n; }

  /// Check the padding rule: signals from the configured source region cannot
  /// wrap around and reach the sphere within the observation time.
  void require_padding(double R, double T) const {
    if (half_width < R + T)
      throw ConfigError("grid half-width " + std::to_string(half_width) +
                        " violates L >= R + T = " + std::to_string(R + T));
  }
};

/// Real scalar function sampled on a Grid3 (x-major storage).
struct ScalarField3 {
  Grid3 grid;
  std::vector<double> values;

  ScalarField3() = default;
  explicit ScalarField3(const Grid3& g) : grid(g), values(g.size(), 0.0) {}

  double& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
  double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }

  /// Grid L2 norm (exact for the trigonometric interpolant).
  double l2_norm() const {
    double s = 0;
    for (double v : values) s += v * v;
    double h = grid.spacing();
    return std::sqrt(s * h * h * h);
  }

  /// Radius of the smallest origin-centered ball containing all samples with
  /// |value| > rel_tol * max|value|.
  double support_radius(double rel_tol = 1e-13) const {
    double m = 0;
    for (double v : values) m = std::max(m, std::abs(v));
    if (m == 0) return 0.0;
    double thr = rel_tol * m, r2max = 0;
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        for (int k = 0; k < grid.n; ++k)
          if (std::abs(at(i, j, k)) > thr) {
            double x = grid.coord(i), y = grid.coord(j), z = grid.coord(k);
            r2max = std::max(r2max, x * x + y * y + z * z);
          }
    return std::sqrt(r2max);
  }

  void fill(const std::function<double(double, double, double)>& f) {
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        for (int k = 0; k < grid.n; ++k)
          at(i, j, k) = f(grid.coord(i), grid.coord(j), grid.coord(k));
  }
};

/// Uniform time sampling of [0, T], n_steps intervals (n_steps+1 samples).
struct TimeGrid {
  double t_final = 0;
  int n_steps = 0;

  TimeGrid() = default;
  TimeGrid(double T, int steps) : t_final(T), n_steps(steps) {
    if (T <= 0 || steps < 1) throw ConfigError("invalid time grid");
  }
  double dt() const { return t_final / n_steps; }
  int samples() const { return n_steps + 1; }
  double time(int i) const { return t_final * i / n_steps; }

  void require_observation_window(double R) const {
    if (t_final < 2.0 * R)
      throw ConfigError("observation time T=" + std::to_string(t_final) +
                        " is below 2R=" + std::to_string(2.0 * R));
  }
};

/// Trapezoid L2(0,T) norm of a sampled series.
inline double l2_time_norm(const std::vector<double>& v, double dt) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
    s += w * v[i] * v[i];
  }
  return std::sqrt(s * dt);
}

inline double l2_time_inner(const std::vector<double>& a, const std::vector<double>& b,
                            double dt) {
  double s = 0;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    s += w * a[i] * b[i];
  }
  return s * dt;
}

}  // namespace patcs
