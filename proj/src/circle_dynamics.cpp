#include "qrdyn/circle_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "qrdyn/detail/lift_roots.hpp"

namespace qrdyn {

CircleLift::CircleLift(int degree, Fn value, Fn derivative, std::optional<std::vector<double>> unit_slope_points)
    : degree_(degree), value_(std::move(value)), derivative_(std::move(derivative)),
      unit_slope_points_(std::move(unit_slope_points)) {
  require(degree_ >= 1, "lift degree must be positive");
  require(static_cast<bool>(value_), "lift needs a value function");
  if (!derivative_) {
    derivative_ = [v = value_](double x) { return (v(x + kSlopeStep) - v(x - kSlopeStep)) / (2 * kSlopeStep); };
  }
}

int RayTable::count(RayKind kind) const {
  return static_cast<int>(std::count_if(rays.begin(), rays.end(), [&](const RayFixedPoint& r) { return r.kind == kind; }));
}

namespace {

// Points where the lift has slope one: cos^2(x - theta) = (nK - 1) / (K^2 - 1).
std::vector<double> lift_unit_slope_points(const MapParams& p) {
  std::vector<double> out;
  const double K = p.K();
  if (K <= 1) return out;
  const double c = (p.n() * K - 1) / (K * K - 1);
  if (c > 1) return out;
  const double a = std::acos(std::sqrt(c));
  for (double u : {a, -a, kPi<double> + a, kPi<double> - a}) out.push_back(normalize_angle(p.theta() + u));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

CircleLift build_lift(const MapParams& p) {
  const int n = p.n();
  const std::complex<double> mu = p.mu();
  const double shift = kTwoPi<double> * std::floor(n * std::arg(1.0 + mu) / kTwoPi<double>);
  auto value = [n, mu, shift](double x) {
    return n * (x + std::arg(1.0 + mu * std::polar(1.0, -2 * x))) - shift;
  };
  const double K = p.K(), theta = p.theta();
  auto derivative = [n, K, theta](double x) {
    const double c = std::cos(x - theta), s = std::sin(x - theta);
    return n * K / (K * K * c * c + s * s);
  };
  return CircleLift(n, value, derivative, lift_unit_slope_points(p));
}

double circle_map_arg(const MapParams& p, double phi) {
  const double x = normalize_angle(phi);
  return normalize_angle(p.n() * (x + std::arg(1.0 + p.mu() * std::polar(1.0, -2 * x))));
}

CircleLift apply_T(const CircleLift& g) {
  std::optional<std::vector<double>> points;
  if (g.unit_slope_points()) {
    points.emplace();
    for (double c : *g.unit_slope_points()) {
      points->push_back(normalize_angle(c / 2));
      points->push_back(normalize_angle(c / 2 + kPi<double>));
    }
    std::sort(points->begin(), points->end());
  }
  return CircleLift(
      g.degree(), [g](double x) { return g(2 * x) / 2; }, [g](double x) { return g.derivative(2 * x); },
      std::move(points));
}

std::vector<double> lift_fixed_points(const CircleLift& g, double offset) {
  const std::vector<double> bps = g.unit_slope_points().value_or(std::vector<double>{});
  const auto roots = detail::displacement_roots([&](double x) { return g(x) - x; },
                                                [&](double x) { return g.derivative(x) - 1; }, offset, bps);
  std::vector<double> out;
  out.reserve(roots.size());
  for (const auto& r : roots) out.push_back(r.x);
  return out;
}

RayTable fixed_and_switched_points(const MapParams& p) {
  const CircleLift g = build_lift(p);
  std::vector<double> candidates = lift_fixed_points(g, 0.0);
  if (p.n() % 2 == 1) {
    const auto sw = lift_fixed_points(g, kPi<double>);
    candidates.insert(candidates.end(), sw.begin(), sw.end());
  }

  RayTable table;
  for (double phi : candidates) {
    // Decide the kind from H itself rather than from which offset produced the root.
    const double image = std::arg(eval_H(p, std::polar(1.0, phi)));
    const bool fixed = angle_distance(image, phi) <= angle_distance(image, phi + kPi<double>);
    RayFixedPoint ray{phi, fixed ? RayKind::Fixed : RayKind::Switched, Stability::Neutral, 0.0};
    ray.multiplier = fixed ? g.derivative(phi) : g.derivative(phi) * g.derivative(g(phi));
    ray.stability = stability_of(ray.multiplier);
    if (ray.stability == Stability::Neutral) table.neutral_ambiguity = true;
    table.rays.push_back(ray);
  }
  std::sort(table.rays.begin(), table.rays.end(),
            [](const RayFixedPoint& a, const RayFixedPoint& b) { return a.phi < b.phi; });
  return table;
}

std::vector<int> interval_wrap_counts(const MapParams& p) {
  require(p.n() % 2 == 1, "wrap counts need odd degree");
  const CircleLift g = build_lift(p);
  std::vector<double> reps;
  for (double phi : lift_fixed_points(g, 0.0)) {
    const double r = phi >= kPi<double> ? phi - kPi<double> : phi;
    reps.push_back(r >= kPi<double> ? 0.0 : r);
  }
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end(), [](double a, double b) { return b - a < 1e-9; }), reps.end());
  if (reps.size() > 1 && reps.front() + kPi<double> - reps.back() < 1e-9) reps.pop_back();
  if (reps.empty()) throw Error(ErrorCode::DegenerateIntervals, "no fixed points to separate");

  std::vector<int> counts;
  for (std::size_t j = 0; j < reps.size(); ++j) {
    const double a = reps[j];
    const double b = j + 1 < reps.size() ? reps[j + 1] : reps.front() + kPi<double>;
    const double wraps = (g(b) - g(a) - (b - a)) / kTwoPi<double>;
    const double rounded = std::round(wraps);
    if (std::abs(wraps - rounded) > 1e-6) {
      throw Error(ErrorCode::DegenerateIntervals, "arc endpoints are not fixed to tolerance");
    }
    counts.push_back(static_cast<int>(rounded));
  }
  return counts;
}

}  // namespace qrdyn
