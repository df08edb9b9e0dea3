#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "patcs/fftutil.hpp"
#include "patcs/quadrature.hpp"
#include "patcs/util.hpp"
#include "patcs/wavelet3d.hpp"

namespace patcs {

/// A separable initial datum f1(x1) f2(x2) f3(x3), each factor uniformly
/// sampled on its support.
struct SeparableShape {
  std::array<std::vector<double>, 3> factor;
  std::array<double, 3> lo;  // support start per axis
  double dx = 0;             // common sample spacing
};

/// Evaluates sphere traces of separable initial data without a volume grid.
///
/// The solution of the wave IVP at rest decomposes over plane waves: with
/// E(w, s) the planar integral of u0 over {w.y = s},
///
///   u(x,t) = -1/(16 pi^2) Int_{S^2} [ E''(w, w.x + t) + E''(w, w.x - t) ] dw.
///
/// For separable u0 each E(w, .) is a 1D triple convolution of rescaled
/// factor profiles, computed once per direction node and tabulated. At trace
/// distances the integrand concentrates on a thin moving band of directions
/// (the wavefront), so a pointwise rule in w is useless. Instead the sphere
/// is split into panels; over one panel the projection w.d is close to
/// bilinear in the panel coordinates, so the panel distribution of w.d is the
/// convolution of two uniform densities, and the panel integral of E'' is
/// exactly a four-point combination of E:
///
///   (1/4ab) [ E(s+a+b) - E(s+a-b) - E(s-a+b) + E(s-a-b) ],
///
/// centered on the panel mean projection. Tables vanish identically outside
/// the geometric support, so traces are structurally zero past the outer
/// wavefront (inflated by at most one panel spread).
///
/// A dilated copy 2^{3q/2} F(2^q (x - tau)) reuses the unit tables: the
/// profile argument scales by 2^q and the amplitude by 2^{3q/2}.
class PlaneWaveEngine {
 public:
  PlaneWaveEngine(std::vector<SeparableShape> shapes, int octant_order = 12,
                  int profile_points = 6144)
      : shapes_(std::move(shapes)) {
    build_directions(octant_order);
    profiles_.resize(shapes_.size());
    for (std::size_t s = 0; s < shapes_.size(); ++s) build_profiles(s, profile_points);
  }

  std::size_t omega_count() const { return omega_.size(); }
  const std::vector<Vec3>& omegas() const { return omega_; }

  /// Radius of the unit shape's support about its box center.
  double shape_radius(std::size_t shape) const {
    const auto& sh = shapes_[shape];
    double r2 = 0;
    for (int i = 0; i < 3; ++i) {
      double w = sh.dx * (sh.factor[i].size() - 1);
      r2 += 0.25 * w * w;
    }
    return std::sqrt(r2);
  }

  /// Adds coeff * u(x, t_k) for k in [k0, k1] to out[k], where u is the wave
  /// of shape `shape` dilated by 2^q and translated by tau, and t_k = k * dt.
  void accumulate(std::size_t shape, int q, const Vec3& tau, const Vec3& x, double dt,
                  int k0, int k1, double* out, double coeff = 1.0) const {
    const double sq = std::ldexp(1.0, q);
    const double amp = coeff * sq * std::sqrt(sq);
    const auto& prof = profiles_[shape];
    const Vec3 d = sub(x, tau);
    const double step = sq * dt;
    Cell cell;
    for (std::size_t w = 0; w < omega_.size(); ++w) {
      const Vec3* cr = &corner_[4 * w];
      cell.mc = dot(omega_[w], d);
      cell.mmm = dot(cr[0], d);
      cell.mmp = dot(cr[1], d);
      cell.mpm = dot(cr[2], d);
      cell.mpp = dot(cr[3], d);
      cell.z0 = zlo_[w];
      cell.z1 = zhi_[w];
      cell.p0 = plo_[w];
      cell.p1 = phi_[w];
      panel(prof[w], d, sq, step, k0, k1, out, amp * weight_[w], cell, 0);
    }
  }

  /// Like accumulate, but restricted to the exact causal window of the given
  /// support box: the trace of data supported in `support` vanishes for
  /// t < dist(x, support) and t > max_dist(x, support) (strong Huygens
  /// principle in three dimensions), so samples outside that window are left
  /// untouched rather than carrying direction-quadrature residue.
  void accumulate_windowed(std::size_t shape, int q, const Vec3& tau, const Box3& support,
                           const Vec3& x, double dt, int k0, int k1, double* out,
                           double coeff = 1.0) const {
    double lo = std::sqrt(support.dist2(x)), hi = support.max_dist(x);
    int kb = std::max(k0, static_cast<int>(std::ceil(lo / dt - 1e-9)));
    int ke = std::min(k1, static_cast<int>(std::floor(hi / dt + 1e-9)));
    if (kb > ke) return;
    accumulate(shape, q, tau, x, dt, kb, ke, out, coeff);
  }

  /// Single-point evaluation.
  double eval(std::size_t shape, int q, const Vec3& tau, const Vec3& x, double t) const {
    double out[2] = {0, 0};
    if (t == 0.0) {
      accumulate(shape, q, tau, x, 1.0, 0, 0, out);
      return out[0];
    }
    accumulate(shape, q, tau, x, t, 1, 1, out);
    return out[1];
  }

  /// Exact outer support bound in time for a dilated/translated shape seen
  /// from x: no response after max_y |x - y| over the support.
  double outer_window(std::size_t shape, int q, const Vec3& tau, const Vec3& x) const {
    const auto& sh = shapes_[shape];
    double sc = std::ldexp(1.0, -q), r2 = 0;
    for (int i = 0; i < 3; ++i) {
      double a = tau[i] + sc * sh.lo[i];
      double b = a + sc * sh.dx * (sh.factor[i].size() - 1);
      double m = std::max(std::abs(x[i] - a), std::abs(x[i] - b));
      r2 += m * m;
    }
    return std::sqrt(r2);
  }

  /// Largest panel projection spread for points at distance <= dist
  /// (the amount by which computed windows may exceed the exact ones).
  double panel_spread(double dist) const { return 2.0 * max_cell_angle_ * dist; }

  /// Raw profile table of one direction node (diagnostics).
  void profile_table(std::size_t shape, std::size_t w, double& s0, double& ds,
                     const std::vector<double>*& values) const {
    s0 = profiles_[shape][w].s0;
    ds = profiles_[shape][w].ds;
    values = &profiles_[shape][w].v;
  }

 private:
  struct Profile {
    double s0 = 0, ds = 1;  // sample grid of the planar-integral table
    std::vector<double> v;  // E(w, s); identically zero outside the support
  };

  struct Cell {
    double mc, mmm, mmp, mpm, mpp;  // projections at center and corners
    double z0, z1, p0, p1;          // cell bounds in (z, phi)
  };

  static Vec3 dir(double z, double p) {
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3{s * std::cos(p), s * std::sin(p), z};
  }

  void build_directions(int k) {
    const double c = -1.0 / (16.0 * M_PI * M_PI);
    const double dz = 1.0 / k, dphi = M_PI / (2.0 * k);
    max_cell_angle_ = 0.5 * std::max(dz * 2.0, dphi);  // crude bound, reported only
    for (int oct = 0; oct < 4; ++oct) {
      double p0 = oct * M_PI / 2.0;
      for (int iz = 0; iz < k; ++iz)
        for (int ip = 0; ip < k; ++ip) {
          double z = (iz + 0.5) * dz;
          double phi = p0 + (ip + 0.5) * dphi;
          omega_.push_back(dir(z, phi));
          corner_.push_back(dir(z - 0.5 * dz, phi - 0.5 * dphi));
          corner_.push_back(dir(z - 0.5 * dz, phi + 0.5 * dphi));
          corner_.push_back(dir(z + 0.5 * dz, phi - 0.5 * dphi));
          corner_.push_back(dir(z + 0.5 * dz, phi + 0.5 * dphi));
          zlo_.push_back(z - 0.5 * dz);
          zhi_.push_back(z + 0.5 * dz);
          plo_.push_back(phi - 0.5 * dphi);
          phi_.push_back(phi + 0.5 * dphi);
          // x2: lower hemisphere folded in by the branch symmetry
          weight_.push_back(2.0 * dz * dphi * c);
        }
    }
  }

  /// One panel: either emit the four-tap contribution or subdivide where the
  /// projection is nearly stationary (curvature comparable to the linear
  /// spread, e.g. directions aligned with d).
  void panel(const Profile& P, const Vec3& d, double sq, double step, int k0, int k1,
             double* out, double wgt, const Cell& c, int depth) const {
    double a = 0.25 * (c.mpp + c.mpm - c.mmp - c.mmm);
    double b = 0.25 * (c.mpp - c.mpm + c.mmp - c.mmm);
    double corner_mean = 0.25 * (c.mpp + c.mpm + c.mmp + c.mmm);
    double mbar = (2.0 * c.mc + corner_mean) / 3.0;
    double curv = std::abs(corner_mean - c.mc);
    a = sq * std::abs(a);
    b = sq * std::abs(b);
    double su_curv = sq * curv;
    // active-range precheck with the conservative total spread
    {
      double spread = a + b + 2.0 * su_curv + 2.0 * P.ds;
      double sc = sq * mbar;
      double s_lo = P.s0 + P.ds, s_hi = P.s0 + (static_cast<double>(P.v.size()) - 2) * P.ds;
      double tmin = k0 * std::abs(step), tmax = k1 * std::abs(step);
      // branch +: sc + t; branch -: sc - t, t in [tmin, tmax]
      bool hit = (sc + tmax + spread >= s_lo && sc + tmin - spread <= s_hi) ||
                 (sc - tmin + spread >= s_lo && sc - tmax - spread <= s_hi);
      if (!hit) return;
    }
    if (depth < 3 && su_curv > 0.35 * (a + b)) {
      double zm = 0.5 * (c.z0 + c.z1), pm = 0.5 * (c.p0 + c.p1);
      Vec3 em0 = dir(c.z0, pm), em1 = dir(zm, c.p0), em2 = dir(zm, c.p1), em3 = dir(c.z1, pm);
      double mm0 = dot(em0, d), mm1 = dot(em1, d), mm2 = dot(em2, d), mm3 = dot(em3, d);
      double mcen = c.mc;
      Cell sub;
      double quarter = 0.25 * wgt;
      // (z0..zm, p0..pm)
      sub = {dot(dir(0.5 * (c.z0 + zm), 0.5 * (c.p0 + pm)), d),
             c.mmm, mm0, mm1, mcen, c.z0, zm, c.p0, pm};
      panel(P, d, sq, step, k0, k1, out, quarter, sub, depth + 1);
      // (z0..zm, pm..p1)
      sub = {dot(dir(0.5 * (c.z0 + zm), 0.5 * (pm + c.p1)), d),
             mm0, c.mmp, mcen, mm2, c.z0, zm, pm, c.p1};
      panel(P, d, sq, step, k0, k1, out, quarter, sub, depth + 1);
      // (zm..z1, p0..pm)
      sub = {dot(dir(0.5 * (zm + c.z1), 0.5 * (c.p0 + pm)), d),
             mm1, mcen, c.mpm, mm3, zm, c.z1, c.p0, pm};
      panel(P, d, sq, step, k0, k1, out, quarter, sub, depth + 1);
      // (zm..z1, pm..p1)
      sub = {dot(dir(0.5 * (zm + c.z1), 0.5 * (pm + c.p1)), d),
             mcen, mm2, mm3, c.mpp, zm, c.z1, pm, c.p1};
      panel(P, d, sq, step, k0, k1, out, quarter, sub, depth + 1);
      return;
    }
    if (a < P.ds) a = P.ds;
    if (b < P.ds) b = P.ds;
    const double sdot = sq * mbar;
    const double w4 = wgt / (4.0 * a * b);
    add_branch(P, sdot, step, a, b, k0, k1, w4, out);
    add_branch(P, sdot, -step, a, b, k0, k1, w4, out);
  }

  void build_profiles(std::size_t s, int base_points) {
    const auto& sh = shapes_[s];
    if (sh.dx <= 0) throw ConfigError("separable shape needs positive sample spacing");
    profiles_[s].resize(omega_.size());
    std::array<double, 3> width;
    for (int i = 0; i < 3; ++i) width[i] = sh.dx * (sh.factor[i].size() - 1);

    parallel_for(omega_.size(), default_threads(), [&](std::size_t w) {
      const Vec3& om = omega_[w];
      double lo = 0, hi = 0, min_w = 1e300;
      for (int i = 0; i < 3; ++i) {
        double a = om[i] * sh.lo[i], b = om[i] * (sh.lo[i] + width[i]);
        lo += std::min(a, b);
        hi += std::max(a, b);
        min_w = std::min(min_w, std::abs(om[i]) * width[i]);
      }
      const double span = hi - lo;
      int npt = base_points;
      // keep >= 48 samples across the thinnest factor
      if (min_w / (span / npt) < 48.0)
        npt = std::min(49152, static_cast<int>(48.0 * span / min_w) + 1);
      double ds = span / npt;

      // sample the three rescaled factors f(s/|w_i|)/|w_i| on the ds grid
      std::array<std::vector<double>, 3> g;
      for (int i = 0; i < 3; ++i) {
        double aw = std::abs(om[i]);
        int n = static_cast<int>(std::floor(aw * width[i] / ds)) + 1;
        g[i].resize(n);
        const auto& f = sh.factor[i];
        for (int m = 0; m < n; ++m) {
          double u = (m * ds) / aw;              // coordinate in f's support
          if (om[i] < 0) u = width[i] - u;       // reversed orientation
          double fi = u / sh.dx;
          auto ii = static_cast<std::size_t>(fi);
          if (ii + 1 >= f.size()) {
            g[i][m] = f.back();
          } else {
            double fr = fi - static_cast<double>(ii);
            g[i][m] = f[ii] * (1 - fr) + f[ii + 1] * fr;
          }
          g[i][m] /= aw;
        }
      }

      // triple linear convolution via FFT
      std::size_t need = g[0].size() + g[1].size() + g[2].size() + 16;
      std::size_t M = 1;
      while (M < need) M <<= 1;
      std::vector<std::complex<double>> acc(M / 2 + 1, 1.0);
      for (int i = 0; i < 3; ++i) {
        std::vector<double> buf(M, 0.0);
        std::copy(g[i].begin(), g[i].end(), buf.begin());
        auto sp = fft_real_1d(buf);
        for (std::size_t q2 = 0; q2 < acc.size(); ++q2) acc[q2] *= sp[q2];
      }
      for (std::size_t q2 = 0; q2 < acc.size(); ++q2) acc[q2] *= ds * ds;
      auto conv = ifft_real_1d(acc, M);

      Profile P;
      P.ds = ds;
      P.s0 = lo - ds;  // one pad cell
      P.v.assign(npt + 3, 0.0);
      for (int m = 0; m <= npt; ++m) {
        double sm = lo + m * ds;
        if (sm >= lo - 1e-12 && sm <= hi + 1e-12) P.v[m + 1] = conv[m];
      }
      profiles_[s][w] = std::move(P);
    });
  }

  /// Adds the four-point panel combination over the active k range,
  /// arg = sdot + step * k.
  static void add_branch(const Profile& P, double sdot, double step, double a, double b,
                         int k0, int k1, double wgt, double* out) {
    if (step == 0.0) return;
    const double inv = 1.0 / P.ds;
    const double spread = a + b;
    // index walks for the four taps
    const double i0pp = (sdot + spread - P.s0) * inv;
    const double i0pm = (sdot + (a - b) - P.s0) * inv;
    const double i0mp = (sdot - (a - b) - P.s0) * inv;
    const double i0mm = (sdot - spread - P.s0) * inv;
    const double istep = step * inv;
    // active range: value vanishes once [s-spread, s+spread] clears the support
    const double lo = 1.0, hi = static_cast<double>(P.v.size()) - 2.000001;
    double ka, kb;
    if (istep > 0) {
      ka = (lo - i0pp) / istep;
      kb = (hi - i0mm) / istep;
    } else {
      ka = (hi - i0mm) / istep;
      kb = (lo - i0pp) / istep;
    }
    int kbeg = std::max(k0, static_cast<int>(std::ceil(ka)));
    int kend = std::min(k1, static_cast<int>(std::floor(kb)));
    if (kbeg > kend) return;
    const double* v = P.v.data();
    const double last = hi;
    auto tap = [v, lo, last](double idx) {
      idx = std::min(std::max(idx, lo), last);
      auto ii = static_cast<std::size_t>(idx);
      double fr = idx - static_cast<double>(ii);
      return v[ii] * (1.0 - fr) + v[ii + 1] * fr;
    };
    for (int k = kbeg; k <= kend; ++k) {
      double base = istep * k;
      double val = tap(i0pp + base) - tap(i0pm + base) - tap(i0mp + base) + tap(i0mm + base);
      out[k] += wgt * val;
    }
  }

  std::vector<SeparableShape> shapes_;
  std::vector<Vec3> omega_;
  std::vector<Vec3> corner_;
  std::vector<double> weight_;
  std::vector<double> zlo_, zhi_, plo_, phi_;
  std::vector<std::vector<Profile>> profiles_;
  double max_cell_angle_ = 0;
};

/// The eight unit-scale shapes of a dictionary (eps = 0..7), sampled from its
/// dyadic tables; index eps in the engine equals the DictIndex type bits.
/// Shape coordinates are centered on the support box: the panel rule treats
/// the profile of a direction cell as constant across the cell, so the
/// coordinate origin must not introduce an artificial direction-dependent
/// shift.
inline std::vector<SeparableShape> dictionary_shapes(const Dictionary& dict,
                                                     int sample_level = 10) {
  const auto& base = dict.table();
  int stride = std::max(1, 1 << (base.level() - sample_level));
  // table sizes are W 2^L + 1, so a power-of-two stride lands on the endpoint
  auto sampled = [&](bool wavelet) {
    const auto& v = wavelet ? base.wavelet_samples() : base.scaling_samples();
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); i += stride) out.push_back(v[i]);
    return out;
  };
  std::vector<double> sc = sampled(false), wv = sampled(true);
  double dx = base.spacing() * stride;
  double half = 0.5 * dict.filter().support_width();
  std::vector<SeparableShape> shapes(8);
  for (int eps = 0; eps < 8; ++eps) {
    SeparableShape s;
    s.dx = dx;
    for (int axis = 0; axis < 3; ++axis) {
      s.factor[axis] = ((eps >> axis) & 1) ? wv : sc;
      s.lo[axis] = -half;
    }
    shapes[eps] = std::move(s);
  }
  return shapes;
}

/// Center of an atom's support box (the engine translation for dictionary
/// shapes in centered coordinates).
inline Vec3 atom_center(const DictIndex& idx, int support_width) {
  double step = std::ldexp(1.0, -idx.internal_scale());
  double half = 0.5 * support_width;
  return {(idx.n[0] + half) * step, (idx.n[1] + half) * step, (idx.n[2] + half) * step};
}

}  // namespace patcs
