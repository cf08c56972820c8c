#include <doctest.h>

#include <random>
#include <vector>

#include "qrdyn/circle_dynamics.hpp"
#include "qrdyn/dilatation.hpp"
#include "qrdyn/moebius.hpp"

using namespace qrdyn;
using cd = std::complex<double>;

namespace {

DiskMoebius disk_map(cd a, cd b) {
  // z -> (a z + b) / (conj(b) z + conj(a)), |a| > |b|.
  return normalize(a, b, std::conj(b), std::conj(a));
}

}  // namespace

TEST_CASE("normalize examples") {
  const DiskMoebius id = normalize(cd(1), cd(0), cd(0), cd(1));
  CHECK(std::abs(id.a() - 1.0) < 1e-15);
  CHECK(std::abs(id.d() - 1.0) < 1e-15);
  const DiskMoebius two = normalize(cd(2), cd(0), cd(0), cd(2));
  CHECK(std::abs(two.a() - 1.0) < 1e-15);
  CHECK(std::abs(two.b()) < 1e-15);
  const DiskMoebius half = normalize(cd(1), cd(0.5), cd(0.5), cd(1));
  CHECK(std::abs(half.m.determinant() - 1.0) < 1e-12);
  CHECK(std::abs(half.a() - 2 / std::sqrt(3.0)) < 1e-14);
  CHECK(half.m.trace().real() >= 0);
  CHECK_THROWS_AS(normalize(cd(1), cd(2), cd(1), cd(2)), Error);
  // Branch choice flips a negative trace.
  const DiskMoebius neg = normalize(cd(-1), cd(0), cd(0), cd(-1));
  CHECK(neg.m.trace().real() > 0);
}

TEST_CASE("trace_squared examples") {
  const auto id = trace_squared(normalize(cd(1), cd(0), cd(0), cd(1)));
  CHECK(id.tau == doctest::Approx(4));
  CHECK(id.kind == MoebiusKind::ParabolicM);
  const auto hyp = trace_squared(normalize(cd(1), cd(0.5), cd(0.5), cd(1)));
  CHECK(hyp.tau == doctest::Approx(16.0 / 3).epsilon(1e-14));
  CHECK(hyp.kind == MoebiusKind::HyperbolicM);
  const cd r = std::polar(1.0, kPi<double> / 2);
  const auto rot = trace_squared(normalize(r, cd(0), cd(0), cd(1)));
  CHECK(rot.tau == doctest::Approx(2).epsilon(1e-14));
  CHECK(rot.kind == MoebiusKind::EllipticM);
}

TEST_CASE("trace_squared is conjugation invariant") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ur(0, 0.9), ua(0, 2 * kPi<double>);
  for (int i = 0; i < 100; ++i) {
    const DiskMoebius A = disk_map(std::polar(1.0, ua(rng)), std::polar(ur(rng), ua(rng)));
    const DiskMoebius C = disk_map(std::polar(1.0, ua(rng)), std::polar(ur(rng), ua(rng)));
    const DiskMoebius conj = normalize<double>(C.m * A.m * C.m.inverse());
    CHECK(std::abs(trace_squared(conj).tau - trace_squared(A).tau) < 1e-9);
  }
}

TEST_CASE("ray_moebius examples") {
  const MapParams conformal(1, 0.3, 3);
  const DiskMoebius rot = ray_moebius(conformal, 0.7, RayKind::Fixed, 1);
  CHECK(std::abs(rot.b()) < 1e-15);
  CHECK(std::abs(std::abs(apply(rot, cd(0.5, 0))) - 0.5) < 1e-14);

  const MapParams p(2, 0, 2);
  const DiskMoebius A = ray_moebius(p, 0.0, RayKind::Fixed, 0);
  for (const cd w : {cd(0.2, 0.1), cd(-0.5, 0.3), cd(0, 0)}) {
    CHECK(std::abs(apply(A, w) - (w + 1.0 / 3) / (1.0 + w / 3.0)) < 1e-14);
  }
  CHECK(trace_squared(A).tau == doctest::Approx(4.5).epsilon(1e-14));
  CHECK_THROWS_AS(ray_moebius(p, 0.0, RayKind::Fixed, 2), Error);
  CHECK_THROWS_AS(ray_moebius(p, 0.0, RayKind::Fixed, -1), Error);
}

TEST_CASE("ray maps are normalized disk automorphisms") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> uK(1, 10), uT(-1.5, 1.5);
  for (int i = 0; i < 50; ++i) {
    const MapParams p(uK(rng), uT(rng), 2 + i % 6);
    for (const auto& r : fixed_and_switched_points(p).rays) {
      const DiskMoebius A = ray_moebius(p, r.phi, r.kind, ray_branch_index(p, r.phi, r.kind));
      CHECK(std::abs(A.m.determinant() - 1.0) < 1e-12);
      CHECK(std::abs(A.m.trace().imag()) < 1e-10);
      for (int s = 0; s < 8; ++s) {
        CHECK(std::abs(std::abs(apply(A, std::polar(1.0, 2 * kPi<double> * s / 8))) - 1) < 1e-10);
      }
    }
  }
}

TEST_CASE("ray_branch_index matches the argument of h") {
  const MapParams p(3, 0.2, 4);
  for (const auto& r : fixed_and_switched_points(p).rays) {
    const int k = ray_branch_index(p, r.phi, r.kind);
    const double psi = (r.phi + 2 * k * kPi<double>) / p.n();
    CHECK(angles_equal(psi, std::arg(eval_h(p, std::polar(1.0, r.phi))), 1e-9));
  }
}

TEST_CASE("tau_fixed_ray examples and agreement with the matrix") {
  CHECK(tau_fixed_ray(MapParams(2, 0, 2), 0.0, 0) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(tau_fixed_ray(MapParams(4, 0, 2), 0.0, 0) == doctest::Approx(6.25).epsilon(1e-15));
  CHECK(tau_fixed_ray(MapParams(1, 0, 2), 0.0, 0) == doctest::Approx(4).epsilon(1e-15));
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> uK(1, 10), uT(-1.5, 1.5);
  int sampled = 0;
  while (sampled < 1000) {
    const MapParams p(uK(rng), uT(rng), 2 + sampled % 6);
    for (const auto& r : fixed_and_switched_points(p).rays) {
      if (r.kind != RayKind::Fixed) continue;
      const int k = ray_branch_index(p, r.phi, r.kind);
      const double closed = tau_fixed_ray(p, r.phi, k);
      CHECK(closed >= 4 - 1e-9);
      CHECK(std::abs(closed - trace_squared(ray_moebius(p, r.phi, r.kind, k)).tau) < 1e-9);
      ++sampled;
    }
  }
}

TEST_CASE("compose_sequence") {
  const std::vector<DiskMoebius> none;
  CHECK(compose_sequence<double>(none, cd(0.3, 0.1)) == cd(0.3, 0.1));

  const DiskMoebius hyp = normalize(cd(1), cd(0.5), cd(0.5), cd(1));
  const std::vector<DiskMoebius> copies(400, hyp);
  CHECK(std::abs(compose_sequence<double>(copies, cd(0.1, -0.2)) - 1.0) < 1e-9);
  CHECK(std::abs(power_apply(hyp, 400, cd(0.1, -0.2)) - 1.0) < 1e-9);

  // Perturbed maps converging to hyp still push orbits to its boundary point.
  std::vector<DiskMoebius> seq;
  for (int j = 1; j <= 1000; ++j) {
    const double eps = 1.0 / (double(j) * j);
    seq.push_back(normalize(cd(1), cd(0.5 + 0.3 * eps, 0.2 * eps), cd(0.5 + 0.3 * eps, -0.2 * eps), cd(1)));
  }
  const cd t = compose_sequence<double>(seq, cd(0.2, 0.3));
  CHECK(std::abs(t) > 0.999);
  // The limit w0 is a boundary point independent of z, though not the fixed point of hyp.
  CHECK(std::abs(compose_sequence<double>(seq, cd(-0.6, 0.1)) - t) < 1e-3);
}

TEST_CASE("fixed-ray maps push the origin to the boundary") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> uK(1.2, 10), uT(-1.5, 1.5);
  for (int i = 0; i < 60; ++i) {
    const MapParams p(uK(rng), uT(rng), 2 + i % 6);
    for (const auto& r : fixed_and_switched_points(p).rays) {
      if (r.kind != RayKind::Fixed) continue;
      const DiskMoebius A = ray_moebius(p, r.phi, r.kind, ray_branch_index(p, r.phi, r.kind));
      CHECK(std::abs(power_apply(A, 500, cd(0))) > 0.99);
    }
  }
}

TEST_CASE("one step of the ray map is one step of the dilatation recursion") {
  const MapParams p(2.7, 0.3, 3);
  for (const auto& r : fixed_and_switched_points(p).rays) {
    if (r.kind != RayKind::Fixed) continue;
    const DiskMoebius A = ray_moebius(p, r.phi, r.kind, ray_branch_index(p, r.phi, r.kind));
    const cd z = std::polar(0.4, r.phi);
    CHECK(std::abs(apply(A, p.mu()) - iterate_dilatation(p, z, 2).mu_iter) < 1e-12);
  }
}
