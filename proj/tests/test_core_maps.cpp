#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qrdyn/core_maps.hpp"

using namespace qrdyn;
using cd = std::complex<double>;

TEST_CASE("mu_from_params examples") {
  CHECK(std::abs(mu_from_params(3.0, 0.0) - cd(0.5, 0)) < 1e-15);
  CHECK(std::abs(mu_from_params(1.0, kPi<double> / 4)) == 0.0);
  CHECK(std::abs(mu_from_params(2.0, kPi<double> / 2) - cd(-1.0 / 3, 0)) < 1e-15);
  CHECK_THROWS_AS(mu_from_params(0.5, 0.0), Error);
}

TEST_CASE("MapParams validation and theta reduction") {
  CHECK_THROWS_AS(MapParams(0.9, 0, 2), Error);
  CHECK_THROWS_AS(MapParams(2, 0, 1), Error);
  CHECK(MapParams(2, kPi<double> / 2, 2).theta() == doctest::Approx(kPi<double> / 2));
  CHECK(MapParams(2, -kPi<double> / 2, 2).theta() == doctest::Approx(kPi<double> / 2));
  // Slightly above pi/2 wraps to just above -pi/2; the map is unchanged.
  const MapParams p(2, 1.5707963268, 2);
  CHECK(p.theta() > -kPi<double> / 2);
  CHECK(p.theta() < -kPi<double> / 2 + 1e-9);
  const cd z(0.3, -0.7);
  CHECK(std::abs(eval_h(p, z) - oracle::h(2, 1.5707963268, z)) < 1e-12);
  CHECK(std::abs(MapParams(3, 0.4, 2).mu()) == doctest::Approx(0.5));
}

TEST_CASE("eval_h and eval_H examples") {
  const MapParams p(2, 0, 2);
  CHECK(std::abs(eval_h(p, cd(1, 0)) - cd(2, 0)) < 1e-15);
  CHECK(std::abs(eval_h(p, cd(0, 1)) - cd(0, 1)) < 1e-15);
  CHECK(std::abs(eval_h(MapParams(3, kPi<double> / 2, 2), cd(1, 0)) - cd(1, 0)) < 1e-15);
  CHECK(std::abs(eval_H(p, cd(1, 0)) - cd(4, 0)) < 1e-15);
  CHECK(std::abs(eval_H(p, cd(0, 1)) - cd(-1, 0)) < 1e-15);
  CHECK(std::abs(eval_H(MapParams(2, 0, 3), cd(0.5, 0)) - cd(1, 0)) < 1e-15);
}

TEST_CASE("radial_factor examples") {
  CHECK(radial_factor(MapParams(2, 0, 2), 1.0, 0.0) == doctest::Approx(4).epsilon(1e-15));
  CHECK(radial_factor(MapParams(7, 0.3, 2), 1.0, 0.3 + kPi<double> / 2) == doctest::Approx(1).epsilon(1e-15));
  const MapParams p(2, 0, 3);
  CHECK(radial_factor(p, 0.5, 0.0) == doctest::Approx(std::abs(eval_H(p, cd(0.5, 0)))).epsilon(1e-15));
  CHECK(radial_factor(p, 0.5, 0.0) == doctest::Approx(1).epsilon(1e-15));
}

TEST_CASE("fixed_ray_radius examples are fixed by H") {
  const MapParams p2(2, 0, 2);
  CHECK(fixed_ray_radius(p2, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(oracle::H(2, 0, 2, 0.25) - 0.25) < 1e-15);
  CHECK(fixed_ray_radius(MapParams(4.5, 0, 2), kPi<double> / 2) == doctest::Approx(1).epsilon(1e-15));
  const MapParams p3(2, 0, 3);
  const double r = fixed_ray_radius(p3, 0.0);
  CHECK(r == doctest::Approx(std::pow(8.0, -0.5)).epsilon(1e-14));
  CHECK(std::abs(oracle::H(2, 0, 3, r) - r) < 1e-14);
}

TEST_CASE("core map properties on random samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uK(1, 10), uT(-1.5, 1.5), uA(0, 2 * kPi<double>), uR(0.01, 3);
  std::uniform_int_distribution<int> uN(2, 7);
  for (int i = 0; i < 500; ++i) {
    const MapParams p(uK(rng), uT(rng), uN(rng));
    const double r = uR(rng), phi = uA(rng);
    const cd z = std::polar(r, phi);
    const double A = radial_factor(p, r, phi);
    CHECK(std::abs(std::abs(eval_H(p, z)) - A) <= 1e-12 * A);
    // R-linearity of h.
    const cd w = std::polar(uR(rng), uA(rng));
    const double s = uR(rng) - 1, t = uR(rng) - 1;
    const cd lhs = eval_h(p, s * z + t * w);
    const cd rhs = s * eval_h(p, z) + t * eval_h(p, w);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + 1));
    // Rays map to rays.
    const double a1 = std::arg(eval_H(p, std::polar(0.3, phi)));
    const double a2 = std::arg(eval_H(p, std::polar(1.7, phi)));
    CHECK(angle_distance(a1, a2) < 1e-10);
    // Agreement with the plain formula.
    CHECK(std::abs(eval_H(p, z) - oracle::H(p.K(), p.theta(), p.n(), z)) <= 1e-12 * (std::abs(eval_H(p, z)) + 1));
  }
}

TEST_CASE("K = 1 gives z^n") {
  for (int n = 2; n <= 7; ++n) {
    const MapParams p(1, 0.4, n);
    const cd z(0.6, -0.35);
    CHECK(std::abs(eval_H(p, z) - std::pow(z, n)) < 1e-15);
  }
}

TEST_CASE("angles and rays stay normalized") {
  CHECK(normalize_angle(-0.1) == doctest::Approx(2 * kPi<double> - 0.1));
  CHECK(normalize_angle(2 * kPi<double>) == 0.0);
  CHECK(normalize_angle(-1e-18) < 2 * kPi<double>);
  const Ray r(7.0);
  CHECK(r.phi() == doctest::Approx(7.0 - 2 * kPi<double>));
  CHECK(r.opposite().opposite().phi() == doctest::Approx(r.phi()));
  CHECK(r.rotated(-10).phi() >= 0);
  CHECK(angles_equal(0.0, 2 * kPi<double> - 1e-12));
  CHECK_FALSE(angles_equal(0.0, 1e-8));
}
