#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "patcs/fftutil.hpp"
#include "patcs/grid.hpp"
#include "patcs/wavelet1d.hpp"

namespace patcs {

/// Index of one dictionary element. Scale 0 carries the low-frequency
/// (all-scaling) products; scale j >= 1 carries the seven wavelet-type
/// products at dyadic dilation j-1. `eps` packs the per-axis type bits
/// (bit i set = mother-wavelet factor on axis i), so eps == 0 iff j == 0.
struct DictIndex {
  int j = 0;
  std::array<int, 3> n{0, 0, 0};
  std::uint8_t eps = 0;

  int internal_scale() const { return j <= 1 ? 0 : j - 1; }
  bool wavelet_axis(int axis) const { return (eps >> axis) & 1; }

  bool operator==(const DictIndex& o) const { return j == o.j && eps == o.eps && n == o.n; }
  bool operator<(const DictIndex& o) const {
    if (j != o.j) return j < o.j;
    if (eps != o.eps) return eps < o.eps;
    return n < o.n;
  }
};

/// One dictionary element with its geometry.
struct WaveletAtom {
  DictIndex index;
  Box3 support_box;
};

/// Coefficients over the index sets up to max_scale, stored densely in the
/// dictionary's atom order.
struct CoeffVec {
  int max_scale = 0;
  std::vector<double> values;

  double l2_norm() const {
    double s = 0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }
  double l1_norm() const {
    double s = 0;
    for (double v : values) s += std::abs(v);
    return s;
  }
};

/// Sum of the magnitudes beyond the s largest ones (best s-sparse
/// approximation error in l1).
inline double sparse_error(const CoeffVec& x, int s) {
  if (s < 0) throw ConfigError("sparsity level must be >= 0");
  std::vector<double> mags(x.values.size());
  for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(x.values[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double tail = 0;
  for (std::size_t i = s; i < mags.size(); ++i) tail += mags[i];
  return tail;
}

/// Compactly supported separable orthonormal dictionary restricted to the
/// indices whose support meets the unit ball.
class Dictionary {
 public:
  Dictionary(const Filter1D& filter, int j_max, int refinement_level)
      : filter_(filter), j_max_(j_max), refinement_(refinement_level) {
    filter_.validate();
    if (j_max < 0) throw ConfigError("j_max must be >= 0");
    if (refinement_level < j_max + 4)
      throw ConfigError("under-resolved dictionary: refinement_level " +
                        std::to_string(refinement_level) + " < j_max + 4 = " +
                        std::to_string(j_max + 4));
    table_ = DyadicTable(filter_, std::min(refinement_level, 14));

    const int W = filter_.support_width();
    scale_offsets_.push_back(0);
    for (int j = 0; j <= j_max; ++j) {
      const int q = (j <= 1) ? 0 : j - 1;
      const double step = std::ldexp(1.0, -q);
      const int n_lo = -(1 << q) - W, n_hi = 1 << q;
      const int eps_lo = (j == 0) ? 0 : 1;
      const int eps_hi = (j == 0) ? 0 : 7;
      for (int eps = eps_lo; eps <= eps_hi; ++eps) {
        for (int n0 = n_lo; n0 <= n_hi; ++n0)
          for (int n1 = n_lo; n1 <= n_hi; ++n1)
            for (int n2 = n_lo; n2 <= n_hi; ++n2) {
              Box3 box{{n0 * step, n1 * step, n2 * step},
                       {(n0 + W) * step, (n1 + W) * step, (n2 + W) * step}};
              if (!box.intersects_ball({0, 0, 0}, 1.0)) continue;
              DictIndex idx{j, {n0, n1, n2}, static_cast<std::uint8_t>(eps)};
              lookup_[pack(idx)] = atoms_.size();
              atoms_.push_back(WaveletAtom{idx, box});
            }
      }
      scale_offsets_.push_back(atoms_.size());
    }

    k_radius_ = 0;
    for (const auto& a : atoms_) k_radius_ = std::max(k_radius_, a.support_box.max_norm());

    // same-scale 1D inner products depend only on (type, type, shift)
    const int Wd = filter_.support_width();
    for (int wa = 0; wa < 2; ++wa)
      for (int wb = 0; wb < 2; ++wb) {
        shift_inner_[wa][wb].assign(2 * Wd + 1, 0.0);
        for (int s = -Wd; s <= Wd; ++s)
          shift_inner_[wa][wb][s + Wd] = table_.translate_inner(wa, 0, wb, s);
      }
  }

  const Filter1D& filter() const { return filter_; }
  const DyadicTable& table() const { return table_; }
  int j_max() const { return j_max_; }
  int refinement_level() const { return refinement_; }
  const std::vector<WaveletAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  /// Number of atoms with scale <= j0.
  std::size_t count_up_to(int j0) const {
    if (j0 < 0) return 0;
    return scale_offsets_[std::min(j0, j_max_) + 1];
  }
  std::size_t scale_count(int j) const { return scale_offsets_[j + 1] - scale_offsets_[j]; }

  /// Radius of K, the closed union of all atom supports.
  double support_union_radius() const { return k_radius_; }

  long find(const DictIndex& idx) const {
    auto it = lookup_.find(pack(idx));
    return it == lookup_.end() ? -1 : static_cast<long>(it->second);
  }

  /// Point evaluation of atom a.
  double evaluate(std::size_t a, const Vec3& x) const {
    const auto& atom = atoms_[a];
    const int q = atom.index.internal_scale();
    const double sc = std::ldexp(1.0, q);
    double v = std::pow(sc, 1.5);
    for (int i = 0; i < 3; ++i) {
      v *= table_.eval(atom.index.wavelet_axis(i), sc * x[i] - atom.index.n[i]);
      if (v == 0.0) return 0.0;
    }
    return v;
  }

  Vec3 evaluate_gradient(std::size_t a, const Vec3& x) const {
    const auto& atom = atoms_[a];
    const int q = atom.index.internal_scale();
    const double sc = std::ldexp(1.0, q);
    double f[3], d[3];
    for (int i = 0; i < 3; ++i) {
      double u = sc * x[i] - atom.index.n[i];
      bool w = atom.index.wavelet_axis(i);
      f[i] = table_.eval(w, u);
      d[i] = table_.eval_deriv(w, u) * sc;
    }
    double amp = std::pow(sc, 1.5);
    return {amp * d[0] * f[1] * f[2], amp * f[0] * d[1] * f[2], amp * f[0] * f[1] * d[2]};
  }

  /// L2 inner product of two atoms by 1D dyadic-grid quadrature (exact
  /// separability: the 3D grid sum factorizes).
  double atom_inner(std::size_t a, std::size_t b) const {
    const auto& A = atoms_[a].index;
    const auto& B = atoms_[b].index;
    double v = 1.0;
    for (int i = 0; i < 3; ++i) {
      v *= inner_1d(A.internal_scale(), A.wavelet_axis(i), A.n[i], B.internal_scale(),
                    B.wavelet_axis(i), B.n[i]);
      if (v == 0.0) return 0.0;
    }
    return v;
  }

  /// Analysis operator: grid quadrature inner products against all atoms with
  /// scale <= j0. Atoms are independent, so the loop parallelizes with
  /// deterministic output.
  CoeffVec analyze(const ScalarField3& u, int j0, int nthreads = 1) const {
    require_grid(u.grid);
    CoeffVec out{std::min(j0, j_max_), std::vector<double>(count_up_to(j0), 0.0)};
    const double h = u.grid.spacing(), h3 = h * h * h;
    parallel_for(out.values.size(), nthreads, [&](std::size_t a) {
      const auto& box = atoms_[a].support_box;
      int i0, i1, j0i, j1, k0, k1;
      range(u.grid, box.lo[0], box.hi[0], i0, i1);
      range(u.grid, box.lo[1], box.hi[1], j0i, j1);
      range(u.grid, box.lo[2], box.hi[2], k0, k1);
      double s = 0;
      for (int i = i0; i <= i1; ++i)
        for (int j = j0i; j <= j1; ++j)
          for (int k = k0; k <= k1; ++k) {
            double w = evaluate(a, {u.grid.coord(i), u.grid.coord(j), u.grid.coord(k)});
            if (w != 0.0) s += w * u.at(i, j, k);
          }
      out.values[a] = s * h3;
    });
    return out;
  }

  /// Synthesis: linear combination of atoms on the grid.
  ScalarField3 synthesize(const CoeffVec& x, const Grid3& g) const {
    require_grid(g);
    if (x.values.size() > size()) throw ConfigError("coefficient vector larger than dictionary");
    ScalarField3 out(g);
    for (std::size_t a = 0; a < x.values.size(); ++a) {
      if (x.values[a] == 0.0) continue;
      const auto& box = atoms_[a].support_box;
      int i0, i1, j0i, j1, k0, k1;
      range(g, box.lo[0], box.hi[0], i0, i1);
      range(g, box.lo[1], box.hi[1], j0i, j1);
      range(g, box.lo[2], box.hi[2], k0, k1);
      for (int i = i0; i <= i1; ++i)
        for (int j = j0i; j <= j1; ++j)
          for (int k = k0; k <= k1; ++k) {
            double w = evaluate(a, {g.coord(i), g.coord(j), g.coord(k)});
            if (w != 0.0) out.at(i, j, k) += x.values[a] * w;
          }
    }
    return out;
  }

  /// Split into scales <= j0 and the complement. low + high == x exactly.
  std::pair<CoeffVec, CoeffVec> project_scales(const CoeffVec& x, int j0) const {
    if (j0 < 0) throw ConfigError("scale cutoff must be >= 0");
    CoeffVec low{std::min(j0, x.max_scale), std::vector<double>(x.values.size(), 0.0)};
    CoeffVec high{x.max_scale, std::vector<double>(x.values.size(), 0.0)};
    std::size_t cut = count_up_to(j0);
    for (std::size_t a = 0; a < x.values.size(); ++a)
      (a < cut ? low.values[a] : high.values[a]) = x.values[a];
    low.values.resize(std::min<std::size_t>(cut, x.values.size()));
    return {std::move(low), std::move(high)};
  }

  /// Minimal grid spacing accepted by analyze/synthesize for this dictionary.
  double required_spacing() const {
    int q_max = (j_max_ <= 1) ? 0 : j_max_ - 1;
    return std::ldexp(1.0, -(q_max + 2));
  }

  /// 1D energy spectrum |g_hat(sigma)|^2 of a unit-scale factor, sampled on
  /// sigma_k = k / (M * dx). Used by the Sobolev-norm routines.
  std::vector<double> factor_spectrum(bool wavelet, int pad_log2, double& dsigma) const {
    const auto& v = wavelet ? table_.wavelet_samples() : table_.scaling_samples();
    std::size_t m = 1;
    while (m < v.size()) m <<= 1;
    m <<= pad_log2;
    std::vector<double> buf(m, 0.0);
    std::copy(v.begin(), v.end(), buf.begin());
    auto sp = fft_real_1d(buf);
    double dx = table_.spacing();
    dsigma = 1.0 / (static_cast<double>(m) * dx);
    std::vector<double> e(sp.size());
    for (std::size_t i = 0; i < sp.size(); ++i) e[i] = std::norm(sp[i]) * dx * dx;
    return e;
  }

 private:
  static std::uint64_t pack(const DictIndex& idx) {
    auto u = [](int v) { return static_cast<std::uint64_t>(v + 4096) & 0x3FFF; };
    return (static_cast<std::uint64_t>(idx.j) << 59) |
           (static_cast<std::uint64_t>(idx.eps) << 56) | (u(idx.n[0]) << 28) |
           (u(idx.n[1]) << 14) | u(idx.n[2]);
  }

  void require_grid(const Grid3& g) const {
    if (g.spacing() > required_spacing() * (1.0 + 1e-12))
      throw GridMismatchError(
          "grid spacing " + std::to_string(g.spacing()) +
          " too coarse for dictionary scales (need <= " + std::to_string(required_spacing()) +
          "); resample the field on a finer grid");
  }

  static void range(const Grid3& g, double lo, double hi, int& a, int& b) {
    a = std::max(0, static_cast<int>(std::ceil((lo + g.half_width) / g.spacing())));
    b = std::min(g.n - 1, static_cast<int>(std::floor((hi + g.half_width) / g.spacing())));
  }

  double inner_1d(int qa, bool wa, int na, int qb, bool wb, int nb) const {
    if (qa == qb) {
      int s = nb - na;
      const int Wd = filter_.support_width();
      if (s < -Wd || s > Wd) return 0.0;
      return shift_inner_[wa][wb][s + Wd];
    }
    if (qa > qb) return inner_1d(qb, wb, nb, qa, wa, na);
    // qa < qb: quadrature on the finer lattice; coarse factor interpolated
    const auto& fine = wb ? table_.wavelet_samples() : table_.scaling_samples();
    const double dx = table_.spacing();
    const int dq = qb - qa;
    const double ratio = std::ldexp(1.0, -dq);
    double s = 0;
    for (std::size_t k = 0; k < fine.size(); ++k) {
      if (fine[k] == 0.0) continue;
      double y = static_cast<double>(k) * dx;  // fine-scale coordinate
      double arg = ratio * (y + nb) - na;
      s += fine[k] * table_.eval(wa, arg);
    }
    return s * dx * std::sqrt(ratio);
  }

  Filter1D filter_;
  int j_max_;
  int refinement_;
  DyadicTable table_;
  std::vector<WaveletAtom> atoms_;
  std::vector<std::size_t> scale_offsets_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
  std::array<std::array<std::vector<double>, 2>, 2> shift_inner_;
  double k_radius_ = 0;
};

}  // namespace patcs
