#pragma once

// The unicritical Blaschke product B(z) = ((z + mu) / (1 + conj(mu) z))^n that
// governs H on the unit circle, and its Denjoy-Wolff classification.

#include <complex>
#include <limits>
#include <string_view>
#include <vector>

#include "qrdyn/circle_dynamics.hpp"
#include "qrdyn/core_maps.hpp"

namespace qrdyn {

struct BlaschkeParams {
  std::complex<double> mu;
  int n;

  BlaschkeParams(std::complex<double> mu_, int n_) : mu(mu_), n(n_) {
    require(std::abs(mu) < 1, "Blaschke parameter must satisfy |mu| < 1");
    require(n >= 2, "Blaschke degree must be >= 2");
  }
  explicit BlaschkeParams(const MapParams& p) : BlaschkeParams(p.mu(), p.n()) {}
};

std::complex<double> eval_B(const BlaschkeParams& b, std::complex<double> z);
std::complex<double> blaschke_derivative(const BlaschkeParams& b, std::complex<double> z);

/// Lift t -> arg B(e^{it}) with value in [0, 4 pi) at t = 0, chosen so that
/// apply_T of it reproduces build_lift of the matching MapParams.
CircleLift blaschke_lift(const BlaschkeParams& b);

struct CirclePoint {
  double t;
  double multiplier;  // B'(e^{it}), real and positive at a circle fixed point
  Stability stability;
};

struct CircleFixedSet {
  std::vector<CirclePoint> points;  // sorted by t
  bool neutral_ambiguity = false;
};

CircleFixedSet circle_fixed_points(const BlaschkeParams& b);

enum class DynamicsKind { Elliptic, Parabolic, Hyperbolic };

constexpr std::string_view to_string(DynamicsKind k) {
  switch (k) {
    case DynamicsKind::Elliptic: return "elliptic";
    case DynamicsKind::Parabolic: return "parabolic";
    case DynamicsKind::Hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

struct Classification {
  DynamicsKind kind;
  std::complex<double> denjoy_wolff;
  double multiplier;                   // |B'(z0)|
  double band = kParabolicBand;        // half-width of the parabolic band
};

/// Throws Error(Unresolved) when neither the circle nor the interior search settles it.
Classification denjoy_wolff(const BlaschkeParams& b);
Classification classify_H(const MapParams& p);

inline constexpr double kThresholdKMax = 1e6;

/// Infimum of K > 1 at which H_{K,theta} becomes hyperbolic, or +infinity if
/// it is still not hyperbolic at kThresholdKMax.
double k_theta_threshold(double theta, int n, double rel_tol = 1e-9);

inline constexpr long kJuliaPointBudget = 1'000'000;

/// Backward orbit of a repelling circle fixed point under B, all branches, to
/// the given depth. Sorted angles in [0, 2 pi), levels merged.
std::vector<double> julia_on_circle(const BlaschkeParams& b, int depth);

/// Preimage of julia_on_circle under z -> z^2: each t gives t/2 and t/2 + pi.
std::vector<double> julia_circle_H(const MapParams& p, int depth);

/// Largest empty arc between consecutive sorted angles (cyclically).
double max_angular_gap(const std::vector<double>& sorted_angles);

/// Length of the empty arc containing `at`, or 0 if `at` is within 1e-12 of a point.
double gap_around(const std::vector<double>& sorted_angles, double at);

}  // namespace qrdyn
