#pragma once

#include <cmath>
#include <numbers>

namespace qrdyn {

template <typename Scalar = double>
inline constexpr Scalar kPi = std::numbers::pi_v<Scalar>;

template <typename Scalar = double>
inline constexpr Scalar kTwoPi = 2 * std::numbers::pi_v<Scalar>;

/// Angle comparisons are mod 2*pi at this tolerance.
inline constexpr double kAngleTol = 1e-10;

/// Canonical representative in [0, 2*pi).
template <typename Scalar>
Scalar normalize_angle(Scalar x) {
  Scalar r = std::fmod(x, kTwoPi<Scalar>);
  if (r < 0) r += kTwoPi<Scalar>;
  // fmod can return exactly 2*pi after the shift for tiny negative inputs.
  if (r >= kTwoPi<Scalar>) r -= kTwoPi<Scalar>;
  return r;
}

/// Shortest distance between two angles on the circle, in [0, pi].
template <typename Scalar>
Scalar angle_distance(Scalar a, Scalar b) {
  const Scalar d = normalize_angle(a - b);
  return d > kPi<Scalar> ? kTwoPi<Scalar> - d : d;
}

template <typename Scalar>
bool angles_equal(Scalar a, Scalar b, Scalar tol = Scalar(kAngleTol)) {
  return angle_distance(a, b) <= tol;
}

/// A ray {r e^{i phi} : r > 0} from the origin; phi is kept in [0, 2*pi).
template <typename Scalar = double>
class RayT {
 public:
  explicit RayT(Scalar phi) : phi_(normalize_angle(phi)) {}
  Scalar phi() const { return phi_; }
  RayT rotated(Scalar by) const { return RayT(phi_ + by); }
  RayT opposite() const { return RayT(phi_ + kPi<Scalar>); }

 private:
  Scalar phi_;
};

using Ray = RayT<double>;

}  // namespace qrdyn
