#pragma once

// The R-linear stretch h_{K,theta}, the quasiregular power map H = h^n, and
// the closed-form radial quantities attached to rays.

#include <cmath>
#include <complex>
#include <string>

#include "qrdyn/angles.hpp"
#include "qrdyn/errors.hpp"

namespace qrdyn {

/// Complex dilatation e^{2 i theta} (K - 1) / (K + 1) of h_{K,theta}.
template <typename Scalar>
std::complex<Scalar> mu_from_params(Scalar K, Scalar theta) {
  require(std::isfinite(K) && K >= 1, "dilatation factor K must be >= 1, got " + std::to_string(double(K)));
  return std::polar((K - 1) / (K + 1), 2 * theta);
}

/// Reduces an angle modulo pi into (-pi/2, pi/2]. h_{K,theta} only depends on
/// e^{2 i theta}, so this is the canonical stretch direction.
template <typename Scalar>
Scalar reduce_theta(Scalar theta) {
  const Scalar half = kPi<Scalar> / 2;
  Scalar t = std::fmod(theta + half, kPi<Scalar>);
  if (t <= 0) t += kPi<Scalar>;
  return t - half;
}

/// Parameters (K, theta, n) of H = [h_{K,theta}]^n with mu cached.
template <typename Scalar>
class MapParamsT {
 public:
  using scalar_type = Scalar;
  using complex_type = std::complex<Scalar>;

  /// theta is reduced into (-pi/2, pi/2]; K < 1 or n < 2 are rejected.
  MapParamsT(Scalar K, Scalar theta, int n) : K_(K), theta_(reduce_theta(theta)), n_(n) {
    require(std::isfinite(theta), "theta must be finite");
    require(n >= 2, "degree n must be >= 2, got " + std::to_string(n));
    mu_ = mu_from_params(K_, theta_);
  }

  Scalar K() const { return K_; }
  Scalar theta() const { return theta_; }
  int n() const { return n_; }
  complex_type mu() const { return mu_; }

  // Coefficients of h(z) = a z + b conj(z).
  Scalar a() const { return (K_ + 1) / 2; }
  complex_type b() const { return std::polar((K_ - 1) / 2, 2 * theta_); }

 private:
  Scalar K_;
  Scalar theta_;
  int n_;
  complex_type mu_;
};

using MapParams = MapParamsT<double>;

template <typename Scalar>
std::complex<Scalar> ipow(std::complex<Scalar> z, int n) {
  std::complex<Scalar> result(1);
  while (n > 0) {
    if (n & 1) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

template <typename Scalar>
std::complex<Scalar> eval_h(const MapParamsT<Scalar>& p, std::complex<Scalar> z) {
  return p.a() * z + p.b() * std::conj(z);
}

template <typename Scalar>
std::complex<Scalar> eval_H(const MapParamsT<Scalar>& p, std::complex<Scalar> z) {
  return ipow(eval_h(p, z), p.n());
}

/// |H(r e^{i phi})| = r^n (1 + (K^2 - 1) cos^2(phi - theta))^{n/2}.
template <typename Scalar>
Scalar radial_factor(const MapParamsT<Scalar>& p, Scalar r, Scalar phi) {
  const Scalar c = std::cos(phi - p.theta());
  const Scalar stretch = 1 + (p.K() * p.K() - 1) * c * c;
  return std::pow(r, p.n()) * std::pow(stretch, Scalar(p.n()) / 2);
}

/// Radius of the fixed point of H on a fixed ray: alpha^{1/(1-n)} with
/// alpha = (1 + (K^2 - 1) cos^2(phi - theta))^{n/2}. No check that phi is fixed.
template <typename Scalar>
Scalar fixed_ray_radius(const MapParamsT<Scalar>& p, Scalar phi) {
  const Scalar alpha = radial_factor(p, Scalar(1), phi);
  return std::pow(alpha, Scalar(1) / Scalar(1 - p.n()));
}

}  // namespace qrdyn
