#include <doctest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "qrdyn/circle_dynamics.hpp"
#include "qrdyn/dilatation.hpp"
#include "qrdyn/moebius.hpp"
#include "qrdyn/plane.hpp"

using namespace qrdyn;
using cd = std::complex<double>;

TEST_CASE("compose_dilatation examples") {
  const cd mf(0.3, -0.2), r = std::polar(1.0, 0.7), mg(-0.1, 0.5);
  CHECK(compose_dilatation(mf, r, 0.0) == mf);
  CHECK(std::abs(compose_dilatation(0.0, r, mg) - r * mg) < 1e-16);
  // Same value through the unit-determinant matrix of w -> (mf + r w) / (1 + r conj(mf) w).
  const DiskMoebius M = normalize(r, mf, r * std::conj(mf), cd(1));
  CHECK(std::abs(compose_dilatation(mf, r, mg) - apply(M, mg)) < 1e-14);
  CHECK(std::abs(compose_dilatation(mf, r, mg)) < 1);
}

TEST_CASE("r_H examples") {
  const MapParams p(2, 0, 2);
  CHECK(std::abs(r_H(p, cd(1, 0)) - 1.0) < 1e-15);
  CHECK(std::abs(r_H(p, cd(0, 1)) + 1.0) < 1e-15);
  CHECK_THROWS_AS(r_H(p, cd(0, 0)), Error);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 100; ++i) {
    const MapParams q(1 + std::abs(u(rng)) * 3, u(rng) / 2, 2 + i % 5);
    const cd z(u(rng), u(rng));
    CHECK(std::abs(std::abs(r_H(q, z)) - 1) < 4e-15);
    CHECK(std::abs(r_H(q, z) - r_H(q, -z)) < 1e-14);
  }
}

TEST_CASE("iterate_dilatation basics") {
  const MapParams p(2.5, 0.4, 3);
  CHECK(iterate_dilatation(p, cd(0.2, 0.1), 1).mu_iter == p.mu());
  const DilatationState s = iterate_dilatation(p, cd(0.2, 0.1), 17);
  CHECK(s.m == 17);
  CHECK(std::abs(s.mu_iter) < 1);
  CHECK(s.K_iter == (1 + std::abs(s.mu_iter)) / (1 - std::abs(s.mu_iter)));
  CHECK_THROWS_AS(iterate_dilatation(p, cd(0, 0), 3), Error);
  try {
    iterate_dilatation(p, cd(1e-310, 0), 3);
    FAIL("expected OrbitHitOrigin");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrbitHitOrigin);
  }
  CHECK_THROWS_AS(iterate_dilatation(p, cd(0.2, 0.1), 0), Error);
}

TEST_CASE("iterate_dilatation matches the chain rule oracle") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uK(1, 4), uT(-1.5, 1.5), u(-1, 1);
  for (int i = 0; i < 40; ++i) {
    const MapParams p(uK(rng), uT(rng), 2 + i % 5);
    const cd z(u(rng), u(rng));
    for (int m : {1, 2, 5, 12, 25}) {
      const cd lib = iterate_dilatation(p, z, m).mu_iter;
      const cd ref = oracle::iterate_dilatation_chain(p.K(), p.theta(), p.n(), z, m);
      if (1 - std::abs(ref) < 1e-6) continue;  // saturated: both round to the circle
      CHECK(std::abs(lib - ref) < 1e-9);
    }
  }
}

TEST_CASE("fixed rays: recursion equals powers of the ray map") {
  for (const MapParams& p : {MapParams(2, 0, 2), MapParams(3, 0.5, 3), MapParams(1.7, -0.9, 4), MapParams(6, 1.2, 5)}) {
    for (const auto& r : fixed_and_switched_points(p).rays) {
      if (r.kind != RayKind::Fixed) continue;
      const DiskMoebius A = ray_moebius(p, r.phi, r.kind, ray_branch_index(p, r.phi, r.kind));
      const cd z = std::polar(0.37, r.phi);
      std::vector<DiskMoebius> chain;
      for (int m = 1; m <= 100; ++m) {
        const cd expected = compose_sequence<double>(chain, p.mu());
        CHECK(std::abs(iterate_dilatation(p, z, m).mu_iter - expected) < 1e-10);
        chain.push_back(A);
      }
    }
  }
}

TEST_CASE("splitting an iterate composes dilatations") {
  const MapParams p(2.2, 0.6, 3);
  const cd z(0.31, -0.45);
  for (int a : {1, 3, 6}) {
    for (int b : {1, 4, 7}) {
      // r of H^a at z from the chain-rule derivatives.
      const double K = p.K(), th = p.theta();
      const double aa = (K + 1) / 2;
      const cd bb = std::polar((K - 1) / 2, 2 * th);
      cd Fz = 1.0, Fzb = 0.0, w = z / std::abs(z);
      for (int j = 0; j < a; ++j) {
        const cd hw = aa * w + bb * std::conj(w);
        const cd u = hw / std::abs(hw);
        const cd Hw = std::pow(u, p.n() - 1) * aa, Hwb = std::pow(u, p.n() - 1) * bb;
        const cd nz = Hw * Fz + Hwb * std::conj(Fzb), nzb = Hw * Fzb + Hwb * std::conj(Fz);
        Fz = nz / std::abs(nz);
        Fzb = nzb / std::abs(nz);
        w = std::pow(u, p.n());
      }
      const cd r_a = std::conj(Fz) / Fz;
      const cd direct = iterate_dilatation(p, z, a + b).mu_iter;
      const cd split = compose_dilatation(iterate_dilatation(p, z, a).mu_iter, r_a, iterate_dilatation(p, w, b).mu_iter);
      CHECK(std::abs(direct - split) < 1e-10);
    }
  }
}

TEST_CASE("odd degree dilatation is antipodally symmetric") {
  const MapParams p(3.1, 0.2, 5);
  for (const cd z : {cd(0.2, 0.3), cd(-0.7, 0.1), cd(0.05, -0.9)}) {
    for (int m : {2, 9, 30}) {
      CHECK(std::abs(iterate_dilatation(p, z, m).mu_iter - iterate_dilatation(p, -z, m).mu_iter) < 1e-10);
    }
  }
}

TEST_CASE("dilatation blows up along orbits") {
  const MapParams p(2.5, 0, 2);
  const DistortionProfile prof = distortion_profile(p, cd(0.3, 0.2), 500);
  bool reached = false;
  for (const auto& row : prof.rows) reached |= row.abs_mu >= 0.999;
  CHECK(reached);
}

TEST_CASE("distortion_profile") {
  const DistortionProfile flat = distortion_profile(MapParams(1, 0.3, 3), cd(0.4, 0.1), 50);
  REQUIRE(flat.rows.size() == 50);
  for (int m = 1; m <= 50; ++m) {
    CHECK(flat.rows[m - 1].m == m);
    CHECK(flat.rows[m - 1].abs_mu == 0.0);
    CHECK(flat.rows[m - 1].K_iter == 1.0);
  }
  CHECK_FALSE(flat.saturated);

  // Fixed ray of a hyperbolic map: K_iter strictly increasing beyond m = 10.
  const MapParams hyp(4, 0, 2);
  const DistortionProfile ray = distortion_profile(hyp, cd(0.5, 0), 60);
  for (std::size_t i = 10; i + 1 < ray.rows.size(); ++i) {
    if (ray.rows[i + 1].abs_mu > kSaturation) break;
    CHECK(ray.rows[i + 1].K_iter > ray.rows[i].K_iter);
  }

  // Off-ray basin point of a hyperbolic map.
  const cd seed(0.05, 0.03);
  REQUIRE(classify_point(hyp, seed, 256).verdict == Verdict::Basin0);
  const DistortionProfile basin = distortion_profile(hyp, seed, 1000);
  double best = 0;
  for (const auto& row : basin.rows) best = std::max(best, row.K_iter);
  CHECK(best > 1e3);

  // The profile agrees with the direct recursion.
  const MapParams q(2.3, -0.4, 3);
  const DistortionProfile prof = distortion_profile(q, cd(0.3, 0.6), 80);
  for (const auto& row : prof.rows) {
    const DilatationState s = iterate_dilatation(q, cd(0.3, 0.6), row.m);
    CHECK(std::abs(row.abs_mu - std::abs(s.mu_iter)) < 1e-10);
  }
}

TEST_CASE("distortion_profile flags saturation") {
  const DistortionProfile prof = distortion_profile(MapParams(8, 0, 2), cd(0.2, 0), 100000);
  CHECK(prof.saturated);
  CHECK(prof.rows.back().abs_mu > kSaturation);
  CHECK(prof.rows.size() < 100000);
}
