#pragma once

// The degree-n circle endomorphism induced by H on rays, its lift to the real
// line, the half-angle rescaling T, and fixed/switched ray detection.

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "qrdyn/core_maps.hpp"

namespace qrdyn {

/// Width of the neutral band around multiplier 1.
inline constexpr double kParabolicBand = 1e-8;

/// Step of the central difference used when a lift has no analytic derivative.
inline constexpr double kSlopeStep = 1e-6;

/// Continuous, strictly increasing lift x -> g(x) of a degree-n circle map,
/// g(x + 2 pi) = g(x) + 2 pi n. Immutable once built.
class CircleLift {
 public:
  using Fn = std::function<double(double)>;

  /// When `derivative` is empty it is replaced by a central difference.
  /// `unit_slope_points` lists every x in [0, 2 pi) where g'(x) = 1, if known.
  CircleLift(int degree, Fn value, Fn derivative = {},
             std::optional<std::vector<double>> unit_slope_points = std::nullopt);

  int degree() const { return degree_; }
  double operator()(double x) const { return value_(x); }
  double derivative(double x) const { return derivative_(x); }
  const std::optional<std::vector<double>>& unit_slope_points() const { return unit_slope_points_; }

 private:
  int degree_;
  Fn value_;
  Fn derivative_;
  std::optional<std::vector<double>> unit_slope_points_;
};

enum class RayKind { Fixed, Switched };
enum class Stability { Attracting, Repelling, Neutral };

constexpr std::string_view to_string(RayKind k) { return k == RayKind::Fixed ? "fixed" : "switched"; }
constexpr std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Attracting: return "attracting";
    case Stability::Repelling: return "repelling";
    case Stability::Neutral: return "neutral";
  }
  return "unknown";
}

inline Stability stability_of(double multiplier) {
  if (std::abs(multiplier - 1) <= kParabolicBand) return Stability::Neutral;
  return multiplier < 1 ? Stability::Attracting : Stability::Repelling;
}

struct RayFixedPoint {
  double phi;
  RayKind kind;
  Stability stability;
  /// Lift derivative at phi; for switched rays, of the second iterate.
  double multiplier;
};

struct RayTable {
  std::vector<RayFixedPoint> rays;  // sorted by phi
  /// Set when some root has a multiplier inside the neutral band.
  bool neutral_ambiguity = false;

  int count(RayKind kind) const;
  int fixed_count() const { return count(RayKind::Fixed); }
  int switched_count() const { return count(RayKind::Switched); }
};

/// arg of the induced circle map at e^{i phi}, in [0, 2 pi).
double circle_map_arg(const MapParams& p, double phi);

/// Lift of the induced circle map with g(0) in [0, 2 pi).
CircleLift build_lift(const MapParams& p);

/// T(g): the lift x -> g(2x) / 2.
CircleLift apply_T(const CircleLift& g);

/// All fixed rays, and for odd n all switched rays, with stability data.
RayTable fixed_and_switched_points(const MapParams& p);

/// For odd n: n_j in {0, 1} for each arc between consecutive fixed points in
/// [w_1, w_1 + pi]. Satisfies n = 2 * sum(n_j) + 1.
std::vector<int> interval_wrap_counts(const MapParams& p);

/// Roots of g(x) - x = offset (mod 2 pi) for an arbitrary lift.
std::vector<double> lift_fixed_points(const CircleLift& g, double offset = 0.0);

}  // namespace qrdyn
