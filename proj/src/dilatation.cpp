#include "qrdyn/dilatation.hpp"

#include <cmath>

#include "qrdyn/moebius.hpp"

namespace qrdyn {

using cd = std::complex<double>;

cd compose_dilatation(cd mu_f, cd r_f, cd mu_g_at_fz) {
  const cd t = r_f * mu_g_at_fz;
  return (mu_f + t) / (1.0 + std::conj(mu_f) * t);
}

cd r_H(const MapParams& p, cd z) {
  require(z != 0.0, "r_H is undefined at the origin");
  const cd h = eval_h(p, z);
  const cd u = h / std::abs(h);
  return ipow(std::conj(u), 2 * (p.n() - 1));
}

namespace {

// r_H along the orbit of z. Only the argument of each iterate matters, so the
// orbit is followed on the unit circle and radii never under- or overflow.
// r_H(w) = r_H(-w), so once w^2 repeats the orbit sits on a fixed or switched
// ray and the factor is constant; holding it there keeps a repelling ray from
// amplifying rounding off the ray.
std::vector<cd> rotation_factors(const MapParams& p, cd z, int count) {
  if (std::abs(z) < kOriginTol) throw Error(ErrorCode::OrbitHitOrigin, "orbit starts at the origin");
  std::vector<cd> out;
  out.reserve(count);
  cd w = z / std::abs(z);
  for (int j = 0; j < count; ++j) {
    out.push_back(r_H(p, w));
    const cd h = eval_h(p, w);
    const cd next = ipow(h / std::abs(h), p.n());
    if (std::abs(next * next - w * w) < kRayHold) {
      out.resize(count, out.back());
      break;
    }
    w = next;
  }
  return out;
}

}  // namespace

DilatationState iterate_dilatation(const MapParams& p, cd z, int m) {
  require(m >= 1, "iteration count m must be >= 1");
  const std::vector<cd> r = rotation_factors(p, z, m - 1);
  const cd mu = p.mu();
  cd acc = mu;
  for (int j = m - 2; j >= 0; --j) acc = compose_dilatation(mu, r[j], acc);
  return {acc, m, distortion(std::abs(acc))};
}

DistortionProfile distortion_profile(const MapParams& p, cd z, int m_max) {
  require(m_max >= 1, "m_max must be >= 1");
  const std::vector<cd> r = rotation_factors(p, z, m_max - 1);
  const cd mu = p.mu();
  DistortionProfile out;
  // mu_{H^m}(z) = M_0 o ... o M_{m-2}(mu), M_j(w) = (mu + r_j w) / (1 + r_j conj(mu) w).
  Mat2c<double> prefix = Mat2c<double>::Identity();
  for (int m = 1; m <= m_max; ++m) {
    if (m >= 2) {
      const cd rj = r[m - 2];
      Mat2c<double> M;
      M << rj, mu, rj * std::conj(mu), 1.0;
      prefix = prefix * M;
      prefix /= prefix.cwiseAbs().maxCoeff();
    }
    const cd value = (prefix(0, 0) * mu + prefix(0, 1)) / (prefix(1, 0) * mu + prefix(1, 1));
    const double a = std::abs(value);
    out.rows.push_back({m, a, distortion(a)});
    if (a > kSaturation) {
      out.saturated = true;
      break;
    }
  }
  return out;
}

}  // namespace qrdyn
