#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "patcs/wavefield.hpp"

using namespace patcs;

namespace {

ScalarField3 gaussian_field(const Grid3& g, double sigma, const Vec3& c = {0, 0, 0}) {
  ScalarField3 u(g);
  u.fill([&](double x, double y, double z) {
    double r2 = (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]) + (z - c[2]) * (z - c[2]);
    return std::exp(-r2 / (2.0 * sigma * sigma));
  });
  return u;
}

// closed-form radial solution with initial velocity zero:
// u(r,t) = [(r-t) G(r-t) + (r+t) G(r+t)] / (2r),  G(s) = exp(-s^2 / 2 sigma^2)
double gaussian_wave_exact(double r, double t, double sigma) {
  auto G = [sigma](double s) { return std::exp(-s * s / (2.0 * sigma * sigma)); };
  if (r < 1e-9) return G(t) * (1.0 - t * t / (sigma * sigma));
  return ((r - t) * G(r - t) + (r + t) * G(r + t)) / (2.0 * r);
}

}  // namespace

TEST_CASE("t = 0 returns the initial field bit-identically") {
  Grid3 g(2.0, 32);
  auto u0 = gaussian_field(g, 0.25);
  WavePropagator prop(u0);
  auto back = prop.at_time(0.0);
  for (std::size_t i = 0; i < u0.values.size(); ++i) REQUIRE(back.values[i] == u0.values[i]);
}

TEST_CASE("integer-frequency cosines are multiplier eigenfunctions") {
  Grid3 g(1.0, 32);
  ScalarField3 u0(g);
  const int m[3] = {2, -1, 3};
  u0.fill([&](double x, double y, double z) {
    return std::cos(M_PI * (m[0] * x + m[1] * y + m[2] * z));  // xi = m / (2L)
  });
  WavePropagator prop(u0, /*free_space_guard=*/false);
  double t = 0.37;
  double fmag = 0.5 * std::sqrt(double(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]));
  auto ut = prop.at_time(t);
  double factor = std::cos(2.0 * M_PI * fmag * t);
  for (std::size_t i = 0; i < ut.values.size(); i += 97)
    REQUIRE(ut.values[i] == Catch::Approx(factor * u0.values[i]).margin(1e-12));
}

TEST_CASE("the cosine multiplier never amplifies energy") {
  Grid3 g(4.5, 64);
  auto u0 = gaussian_field(g, 0.3);
  WavePropagator prop(u0);
  for (double t : {0.5, 1.0, 2.0}) CHECK(prop.at_time(t).l2_norm() <= u0.l2_norm() * (1 + 1e-12));
}

TEST_CASE("cosine product-to-sum consistency") {
  Grid3 g(4.0, 64);
  auto u0 = gaussian_field(g, 0.35);
  WavePropagator prop(u0);
  double t = 0.5;
  auto once = prop.at_time(t);
  WavePropagator prop2(once);
  auto twice = prop2.at_time(t);
  auto direct = prop.at_time(2.0 * t);
  double worst = 0;
  for (std::size_t i = 0; i < twice.values.size(); ++i)
    worst = std::max(worst,
                     std::abs(twice.values[i] - 0.5 * (direct.values[i] + u0.values[i])));
  CHECK(worst < 1e-8);
}

TEST_CASE("radial data matches the 1D reduction") {
  Grid3 g(4.0, 128);
  double sigma = 0.3;
  auto u0 = gaussian_field(g, sigma);
  WavePropagator prop(u0);
  for (double t : {0.6, 1.2}) {
    auto ut = prop.at_time(t);
    double num = 0, den = 0;
    for (int i = 0; i < g.n; i += 3)
      for (int j = 0; j < g.n; j += 3)
        for (int k = 0; k < g.n; k += 3) {
          double r = std::sqrt(g.coord(i) * g.coord(i) + g.coord(j) * g.coord(j) +
                               g.coord(k) * g.coord(k));
          double ex = gaussian_wave_exact(r, t, sigma);
          double got = ut.at(i, j, k);
          num += (got - ex) * (got - ex);
          den += ex * ex;
        }
    CHECK(std::sqrt(num / den) < 1e-3);
  }
}

TEST_CASE("sphere restriction") {
  Grid3 g(2.0, 32);
  std::vector<Vec3> nodes;
  for (int k = 0; k < 16; ++k) {
    double z = -1.0 + 2.0 * (k + 0.5) / 16, phi = 2.39996 * k;
    double s = std::sqrt(1.0 - z * z);
    nodes.push_back({1.2 * s * std::cos(phi), 1.2 * s * std::sin(phi), 1.2 * z});
  }

  SECTION("constant field gives ones") {
    ScalarField3 u(g);
    u.fill([](double, double, double) { return 1.0; });
    for (double v : restrict_to_sphere(u, nodes)) CHECK(v == Catch::Approx(1.0).margin(1e-13));
  }
  SECTION("trilinear reproduces affine fields exactly") {
    ScalarField3 u(g);
    u.fill([](double x, double y, double z) { return 0.3 * x - 0.7 * y + 0.11 * z; });
    auto got = restrict_to_sphere(u, nodes);
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      double ex = 0.3 * nodes[q][0] - 0.7 * nodes[q][1] + 0.11 * nodes[q][2];
      CHECK(got[q] == Catch::Approx(ex).margin(1e-12));
    }
  }
  SECTION("spectral and trilinear agree at second order on smooth fields") {
    auto u = gaussian_field(g, 0.5);
    auto tri = restrict_to_sphere(u, nodes, SphereInterp::trilinear);
    auto spc = restrict_to_sphere(u, nodes, SphereInterp::spectral);
    double h = g.spacing();
    for (std::size_t q = 0; q < nodes.size(); ++q)
      CHECK(std::abs(tri[q] - spc[q]) < 2.0 * h * h);  // O(h^2) interpolation gap
  }
  SECTION("off-sphere nodes are rejected") {
    auto bad = nodes;
    bad[3] = scale(bad[3], 1.0 + 1e-6);
    ScalarField3 u(g);
    CHECK_THROWS_AS(restrict_to_sphere(u, bad), ConfigError);
  }
}

TEST_CASE("kirchhoff point oracle") {
  double sigma = 0.3;
  PointField gauss{
      [&](const Vec3& y) { return std::exp(-dot(y, y) / (2 * sigma * sigma)); },
      [&](const Vec3& y) {
        double v = std::exp(-dot(y, y) / (2 * sigma * sigma));
        return scale(y, -v / (sigma * sigma));
      }};

  SECTION("matches the closed-form radial solution") {
    for (double t : {0.4, 1.0, 2.3}) {
      Vec3 x{0.9, -0.3, 0.5};
      double got = kirchhoff_point(gauss, x, t, 20);
      double ex = gaussian_wave_exact(norm(x), t, sigma);
      CHECK(got == Catch::Approx(ex).margin(1e-8));
    }
  }
  SECTION("constant-on-a-ball datum averages to one") {
    PointField ball{[](const Vec3& y) { return norm(y) < 10.0 ? 1.0 : 0.0; },
                    [](const Vec3&) { return Vec3{0, 0, 0}; }};
    CHECK(kirchhoff_point(ball, {0.2, 0.1, 0.0}, 1.5, 8) == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("exactly zero before the support is reached") {
    PointField bump{[](const Vec3& y) {
                      double r = norm(sub(y, Vec3{1, 0, 0}));
                      return r < 0.25 ? std::exp(-1.0 / (1 - 16 * r * r)) : 0.0;
                    },
                    [](const Vec3&) { return Vec3{0, 0, 0}; }};
    // distance from x to the bump support is 2 - 0.25
    CHECK(kirchhoff_point(bump, {-1, 0, 0}, 1.5, 12) == 0.0);
  }
  SECTION("low orders are refused") {
    CHECK_THROWS_AS(kirchhoff_point(gauss, {1, 0, 0}, 1.0, 2), ConfigError);
  }
}

TEST_CASE("kirchhoff agrees with the spectral propagator on a smooth field") {
  Grid3 g(4.0, 128);
  double sigma = 0.35;
  auto u0 = gaussian_field(g, sigma, {0.2, 0.0, -0.1});
  WavePropagator prop(u0);
  PointField pf{[&](const Vec3& y) {
                  double r2 = dot(sub(y, Vec3{0.2, 0.0, -0.1}), sub(y, Vec3{0.2, 0.0, -0.1}));
                  return std::exp(-r2 / (2 * sigma * sigma));
                },
                [&](const Vec3& y) {
                  Vec3 d = sub(y, Vec3{0.2, 0.0, -0.1});
                  return scale(d, -std::exp(-dot(d, d) / (2 * sigma * sigma)) / (sigma * sigma));
                }};
  double t = 0.8;
  auto ut = prop.at_time(t);
  for (Vec3 x : {Vec3{1.5, 0.2, 0.0}, Vec3{-0.8, 1.0, 0.7}}) {
    double spectral = trilinear(ut, x);
    double kir = kirchhoff_point(pf, x, t, 24);
    CHECK(spectral == Catch::Approx(kir).margin(5e-3));
  }
}

TEST_CASE("forward trace is linear and zero on zero data") {
  Grid3 g(4.0, 32);
  TimeGrid tg(1.0, 8);
  std::vector<Vec3> nodes{{1.1, 0, 0}, {0, 1.1, 0}, {0, 0, -1.1}};

  ScalarField3 zero(g);
  WavePropagator pz(zero);
  auto tz = forward_trace(pz, nodes, tg);
  for (const auto& row : tz.values)
    for (double v : row) CHECK(v == 0.0);

  auto a = gaussian_field(g, 0.3, {0.2, 0, 0});
  auto b = gaussian_field(g, 0.3, {-0.3, 0.1, 0});
  ScalarField3 combo(g);
  for (std::size_t i = 0; i < combo.values.size(); ++i)
    combo.values[i] = 2.0 * a.values[i] - 0.5 * b.values[i];
  WavePropagator pa(a), pb(b), pc(combo);
  auto ta = forward_trace(pa, nodes, tg), tb = forward_trace(pb, nodes, tg),
       tc = forward_trace(pc, nodes, tg);
  for (std::size_t q = 0; q < nodes.size(); ++q)
    for (int it = 0; it < tg.samples(); ++it)
      CHECK(tc.values[q][it] ==
            Catch::Approx(2.0 * ta.values[q][it] - 0.5 * tb.values[q][it]).margin(1e-10));
}

TEST_CASE("support too close to the boundary is refused") {
  Grid3 g(2.0, 32);
  auto u0 = gaussian_field(g, 0.3);
  WavePropagator prop(u0);
  CHECK_THROWS_AS(prop.at_time(1.9), ConfigError);
}

TEST_CASE("spectral surface integral matches the radial closed form") {
  Grid3 g(3.0, 64);
  double sigma = 0.4;
  auto u0 = gaussian_field(g, sigma);
  WavePropagator prop(u0);
  double R = 1.3;
  double got = prop.surface_integral(prop.spectrum_at_time(0.0), R);
  double ex = 4.0 * M_PI * R * R * std::exp(-R * R / (2 * sigma * sigma));
  CHECK(got == Catch::Approx(ex).epsilon(1e-6));
}
