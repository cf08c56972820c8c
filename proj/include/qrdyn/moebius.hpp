#pragma once

// Unit-determinant Moebius self-maps of the disk as 2x2 complex matrices, the
// map A attached to a fixed or switched ray, and long composition chains.

#include <Eigen/Core>
#include <Eigen/LU>
#include <cmath>
#include <complex>
#include <span>
#include <string_view>

#include "qrdyn/circle_dynamics.hpp"
#include "qrdyn/core_maps.hpp"

namespace qrdyn {

template <typename Scalar>
using Mat2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

enum class MoebiusKind { EllipticM, ParabolicM, HyperbolicM };

constexpr std::string_view to_string(MoebiusKind k) {
  switch (k) {
    case MoebiusKind::EllipticM: return "elliptic";
    case MoebiusKind::ParabolicM: return "parabolic";
    case MoebiusKind::HyperbolicM: return "hyperbolic";
  }
  return "unknown";
}

inline constexpr double kParabolicTraceTol = 1e-9;

/// z -> (a z + b) / (c z + d) with ad - bc = 1 and Re(a + d) >= 0.
template <typename Scalar>
struct DiskMoebiusT {
  Mat2c<Scalar> m;

  std::complex<Scalar> a() const { return m(0, 0); }
  std::complex<Scalar> b() const { return m(0, 1); }
  std::complex<Scalar> c() const { return m(1, 0); }
  std::complex<Scalar> d() const { return m(1, 1); }
};

using DiskMoebius = DiskMoebiusT<double>;

template <typename Scalar>
DiskMoebiusT<Scalar> normalize(const Mat2c<Scalar>& m) {
  const std::complex<Scalar> det = m.determinant();
  if (std::abs(det) == Scalar(0) || !std::isfinite(std::abs(det))) {
    throw Error(ErrorCode::SingularMatrix, "Moebius matrix has zero determinant");
  }
  Mat2c<Scalar> out = m / std::sqrt(det);
  if (out.trace().real() < 0) out = -out;
  return {out};
}

template <typename Scalar>
DiskMoebiusT<Scalar> normalize(std::complex<Scalar> a, std::complex<Scalar> b, std::complex<Scalar> c,
                               std::complex<Scalar> d) {
  Mat2c<Scalar> m;
  m << a, b, c, d;
  return normalize(m);
}

template <typename Scalar>
struct TraceClass {
  Scalar tau;
  MoebiusKind kind;
};

template <typename Scalar>
TraceClass<Scalar> trace_squared(const DiskMoebiusT<Scalar>& A) {
  const std::complex<Scalar> tr = A.m.trace();
  const Scalar tau = (tr * tr).real();
  if (std::abs(tau - 4) <= Scalar(kParabolicTraceTol)) return {tau, MoebiusKind::ParabolicM};
  return {tau, tau < 4 ? MoebiusKind::EllipticM : MoebiusKind::HyperbolicM};
}

template <typename Scalar>
std::complex<Scalar> apply(const DiskMoebiusT<Scalar>& A, std::complex<Scalar> z) {
  return (A.a() * z + A.b()) / (A.c() * z + A.d());
}

/// Branch index k with arg h(e^{i phi}) = (phi + 2k pi) / n for a fixed ray, or
/// (phi + (2k + 1) pi) / n for a switched ray, taken mod 2 pi.
template <typename Scalar>
int ray_branch_index(const MapParamsT<Scalar>& p, Scalar phi, RayKind kind) {
  const Scalar arg_h = normalize_angle(std::arg(eval_h(p, std::polar(Scalar(1), phi))));
  const Scalar base = normalize_angle(phi) + (kind == RayKind::Switched ? kPi<Scalar> : Scalar(0));
  const Scalar k = (p.n() * arg_h - base) / kTwoPi<Scalar>;
  const int n = p.n();
  return ((static_cast<int>(std::lround(k)) % n) + n) % n;
}

/// The map A(w) = (alpha w + mu) / (alpha conj(mu) w + 1) relating mu_{H^m} to
/// mu_{H^{m-1}} along the ray, normalized to unit determinant.
template <typename Scalar>
DiskMoebiusT<Scalar> ray_moebius(const MapParamsT<Scalar>& p, Scalar phi, RayKind kind, int k) {
  require(k >= 0 && k < p.n(), "branch index k must lie in [0, n)");
  const int n = p.n();
  const Scalar odd = kind == RayKind::Switched ? Scalar(1) : Scalar(0);
  const Scalar psi = (normalize_angle(phi) + (2 * k + odd) * kPi<Scalar>) / n;
  const std::complex<Scalar> alpha = std::polar(Scalar(1), -2 * (n - 1) * psi);
  const std::complex<Scalar> mu = p.mu();
  const std::complex<Scalar> D = std::polar(std::sqrt(1 - std::norm(mu)), -(n - 1) * psi);
  Mat2c<Scalar> m;
  m << alpha, mu, alpha * std::conj(mu), std::complex<Scalar>(1);
  m /= D;
  DiskMoebiusT<Scalar> A{m};
  if (A.m.trace().real() < 0) A.m = -A.m;
  return A;
}

/// tau(A) = (K + 1)^2 cos^2((n - 1)(phi + 2k pi) / n) / K.
template <typename Scalar>
Scalar tau_fixed_ray(const MapParamsT<Scalar>& p, Scalar phi, int k) {
  const int n = p.n();
  const Scalar psi = (normalize_angle(phi) + 2 * k * kPi<Scalar>) / n;
  const Scalar c = std::cos((n - 1) * psi);
  const Scalar K = p.K();
  return (K + 1) * (K + 1) * c * c / K;
}

inline constexpr int kRenormalizeEvery = 32;

/// A_1 o A_2 o ... o A_m applied to z.
template <typename Scalar>
std::complex<Scalar> compose_sequence(std::span<const DiskMoebiusT<Scalar>> maps, std::complex<Scalar> z) {
  Mat2c<Scalar> acc = Mat2c<Scalar>::Identity();
  int since = 0;
  for (const auto& A : maps) {
    acc = acc * A.m;
    if (++since == kRenormalizeEvery) {
      acc /= acc.cwiseAbs().maxCoeff();
      since = 0;
    }
  }
  return (acc(0, 0) * z + acc(0, 1)) / (acc(1, 0) * z + acc(1, 1));
}

/// A^m(z) by repeated squaring of the matrix with rescaling.
template <typename Scalar>
std::complex<Scalar> power_apply(const DiskMoebiusT<Scalar>& A, long m, std::complex<Scalar> z) {
  Mat2c<Scalar> result = Mat2c<Scalar>::Identity();
  Mat2c<Scalar> base = A.m;
  while (m > 0) {
    if (m & 1) {
      result = result * base;
      result /= result.cwiseAbs().maxCoeff();
    }
    base = base * base;
    base /= base.cwiseAbs().maxCoeff();
    m >>= 1;
  }
  return (result(0, 0) * z + result(0, 1)) / (result(1, 0) * z + result(1, 1));
}

}  // namespace qrdyn
