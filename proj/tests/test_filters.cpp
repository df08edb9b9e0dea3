#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "patcs/filters.hpp"

using namespace patcs;

TEST_CASE("db2 matches the closed form") {
  auto f = daubechies_filter(2);
  const double r = 4.0 * std::sqrt(2.0);
  REQUIRE(f.taps() == 4);
  CHECK(f.lowpass[0] == Catch::Approx((1.0 + std::sqrt(3.0)) / r).epsilon(1e-10));
  CHECK(f.lowpass[1] == Catch::Approx((3.0 + std::sqrt(3.0)) / r).epsilon(1e-10));
  CHECK(f.lowpass[2] == Catch::Approx((3.0 - std::sqrt(3.0)) / r).epsilon(1e-10));
  CHECK(f.lowpass[3] == Catch::Approx((1.0 - std::sqrt(3.0)) / r).epsilon(1e-10));
}

TEST_CASE("taps sum to sqrt(2) and satisfy quadrature-mirror orthonormality") {
  for (int p = 1; p <= 8; ++p) {
    auto f = daubechies_filter(p);
    INFO("filter " << f.name);
    CHECK(f.qmf_defect() <= 1e-12);
    double sum = 0;
    for (double h : f.lowpass) sum += h;
    CHECK(sum == Catch::Approx(std::sqrt(2.0)).epsilon(1e-13));
  }
}

TEST_CASE("well-known table values (4 decimals)") {
  auto f4 = daubechies_filter(4);
  CHECK(f4.lowpass[0] == Catch::Approx(0.2304).margin(5e-5));
  CHECK(f4.lowpass[1] == Catch::Approx(0.7148).margin(5e-5));
  CHECK(f4.lowpass[7] == Catch::Approx(-0.0106).margin(5e-5));
  auto f3 = daubechies_filter(3);
  CHECK(f3.lowpass[0] == Catch::Approx(0.3327).margin(5e-5));
  CHECK(f3.lowpass[2] == Catch::Approx(0.4599).margin(5e-5));
}

TEST_CASE("highpass is a quadrature mirror with zero sum") {
  auto f = daubechies_filter(3);
  auto g = f.highpass();
  double s = 0;
  for (double v : g) s += v;
  CHECK(std::abs(s) < 1e-13);
}

TEST_CASE("a perturbed filter is rejected") {
  auto f = daubechies_filter(2);
  f.lowpass[1] += 1e-6;
  CHECK_THROWS_AS(f.validate(), ConfigError);
}
