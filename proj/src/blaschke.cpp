#include "qrdyn/blaschke.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <optional>

#include "qrdyn/detail/lift_roots.hpp"

namespace qrdyn {

using cd = std::complex<double>;

namespace {

constexpr double kPoleTol = 1e-14;

cd moebius_factor(const BlaschkeParams& b, cd z) {
  const cd den = 1.0 + std::conj(b.mu) * z;
  if (std::abs(den) < kPoleTol) throw Error(ErrorCode::PoleAt, "z is the pole -1/conj(mu)");
  return (z + b.mu) / den;
}

// |B(e^{it})|' slope points: cos(t - arg mu) = (n(1-|mu|^2) - 1 - |mu|^2) / (2|mu|).
std::vector<double> blaschke_unit_slope_points(const BlaschkeParams& b) {
  std::vector<double> out;
  const double r = std::abs(b.mu);
  if (r == 0) return out;
  const double c = (b.n * (1 - r * r) - 1 - r * r) / (2 * r);
  if (c > 1 || c < -1) return out;
  const double a = std::acos(c);
  const double base = std::arg(b.mu);
  out.push_back(normalize_angle(base + a));
  out.push_back(normalize_angle(base - a));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

cd newton_fixed_point(const BlaschkeParams& b, cd z, int max_iter = 60) {
  for (int i = 0; i < max_iter; ++i) {
    const cd f = eval_B(b, z) - z;
    const cd df = blaschke_derivative(b, z) - 1.0;
    if (std::abs(df) < 1e-300) break;
    const cd step = f / df;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

bool is_interior_fixed(const BlaschkeParams& b, cd z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  if (std::abs(z) >= 1 - 1e-9) return false;
  return std::abs(eval_B(b, z) - z) < 1e-12;
}

// Roots of (z + mu)^n - z (1 + conj(mu) z)^n through the companion matrix.
std::vector<cd> fixed_point_polynomial_roots(const BlaschkeParams& b) {
  const int n = b.n;
  std::vector<cd> coeff(n + 2, 0.0);  // coeff[k] multiplies z^k
  double binom = 1;
  const cd mb = std::conj(b.mu);
  for (int k = 0; k <= n; ++k) {
    coeff[k] += binom * std::pow(b.mu, n - k);
    coeff[k + 1] -= binom * std::pow(mb, k);
    binom = binom * (n - k) / (k + 1);
  }
  int deg = n + 1;
  while (deg > 0 && std::abs(coeff[deg]) < 1e-300) --deg;
  if (deg == 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeff[i] / coeff[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) return {};
  std::vector<cd> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + deg);
  return roots;
}

std::optional<cd> interior_fixed_point(const BlaschkeParams& b) {
  cd z = 0.0;
  for (int step = 1; step <= 100000; ++step) {
    const cd next = eval_B(b, z);
    const double moved = std::abs(next - z);
    z = next;
    if (moved < 1e-13 && std::abs(z) < 1 - 1e-9) return newton_fixed_point(b, z, 4);
    if (step % 64 == 0 && std::abs(z) < 1 - 1e-6) {
      const cd guess = newton_fixed_point(b, z);
      if (is_interior_fixed(b, guess)) return guess;
    }
  }
  for (cd r : fixed_point_polynomial_roots(b)) {
    const cd polished = newton_fixed_point(b, r);
    if (is_interior_fixed(b, polished)) return polished;
  }
  return std::nullopt;
}

}  // namespace

cd eval_B(const BlaschkeParams& b, cd z) { return ipow(moebius_factor(b, z), b.n); }

cd blaschke_derivative(const BlaschkeParams& b, cd z) {
  const cd m = moebius_factor(b, z);
  const cd den = 1.0 + std::conj(b.mu) * z;
  return double(b.n) * ipow(m, b.n - 1) * (1 - std::norm(b.mu)) / (den * den);
}

CircleLift blaschke_lift(const BlaschkeParams& b) {
  const int n = b.n;
  const cd mu = b.mu;
  const double shift = 2 * kTwoPi<double> * std::floor(n * std::arg(1.0 + mu) / kTwoPi<double>);
  auto value = [n, mu, shift](double t) {
    return n * (t + 2 * std::arg(1.0 + mu * std::polar(1.0, -t))) - shift;
  };
  const double scale = n * (1 - std::norm(mu));
  auto derivative = [scale, mu](double t) { return scale / std::norm(1.0 + std::conj(mu) * std::polar(1.0, t)); };
  return CircleLift(n, value, derivative, blaschke_unit_slope_points(b));
}

CircleFixedSet circle_fixed_points(const BlaschkeParams& b) {
  const CircleLift lift = blaschke_lift(b);
  CircleFixedSet out;
  for (double t : lift_fixed_points(lift, 0.0)) {
    const double m = lift.derivative(t);
    const Stability s = stability_of(m);
    if (s == Stability::Neutral) out.neutral_ambiguity = true;
    out.points.push_back({t, m, s});
  }
  return out;
}

Classification denjoy_wolff(const BlaschkeParams& b) {
  // A circle fixed point with multiplier <= 1 is the Denjoy-Wolff point and
  // rules out an interior fixed point, so the circle is checked first.
  const CircleFixedSet circle = circle_fixed_points(b);
  const auto best = std::min_element(circle.points.begin(), circle.points.end(),
                                     [](const CirclePoint& l, const CirclePoint& r) { return l.multiplier < r.multiplier; });
  if (best != circle.points.end() && best->multiplier <= 1 + kParabolicBand) {
    const DynamicsKind kind =
        best->stability == Stability::Attracting ? DynamicsKind::Hyperbolic : DynamicsKind::Parabolic;
    return {kind, std::polar(1.0, best->t), best->multiplier};
  }
  if (const auto z0 = interior_fixed_point(b)) {
    return {DynamicsKind::Elliptic, *z0, std::abs(blaschke_derivative(b, *z0))};
  }
  throw Error(ErrorCode::Unresolved, "no attracting circle fixed point and no interior fixed point found");
}

Classification classify_H(const MapParams& p) { return denjoy_wolff(BlaschkeParams(p)); }

double k_theta_threshold(double theta, int n, double rel_tol) {
  require(n >= 2, "degree n must be >= 2");
  auto hyperbolic = [&](double K) {
    return classify_H(MapParams(K, theta, n)).kind == DynamicsKind::Hyperbolic;
  };
  if (!hyperbolic(kThresholdKMax)) return std::numeric_limits<double>::infinity();
  double lo = 1, hi = kThresholdKMax;
  while (hi / lo - 1 > rel_tol) {
    const double mid = std::sqrt(lo * hi);
    if (hyperbolic(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<double> julia_on_circle(const BlaschkeParams& b, int depth) {
  require(depth >= 1, "depth must be >= 1");
  long total = 1;
  for (int d = 0; d < depth; ++d) {
    total *= b.n;
    if (total > kJuliaPointBudget) {
      throw Error(ErrorCode::BudgetExceeded, "n^depth exceeds the point budget of 1e6");
    }
  }

  const CircleFixedSet fixed = circle_fixed_points(b);
  const auto seed = std::find_if(fixed.points.begin(), fixed.points.end(),
                                 [](const CirclePoint& c) { return c.stability == Stability::Repelling; });
  if (seed == fixed.points.end()) throw Error(ErrorCode::Unresolved, "no repelling circle fixed point to seed from");

  const CircleLift lift = blaschke_lift(b);
  const double g0 = lift(0.0);
  const auto value = [&](double t) { return lift(t); };

  std::vector<double> all{seed->t};
  std::vector<double> level{seed->t};
  for (int d = 0; d < depth; ++d) {
    std::vector<double> next;
    next.reserve(level.size() * b.n);
    for (double target : level) {
      // The lift rises by exactly 2 pi n over one period, so each level
      // target + 2 pi m inside [g0, g0 + 2 pi n) has one preimage.
      double level_value = target + kTwoPi<double> * std::ceil((g0 - target) / kTwoPi<double>);
      for (int m = 0; m < b.n; ++m, level_value += kTwoPi<double>) {
        next.push_back(normalize_angle(detail::bisect_level(value, 0.0, kTwoPi<double>, level_value)));
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end(), [](double a, double c) { return c - a < 1e-13; }), all.end());
  if (all.size() > 1 && all.front() + kTwoPi<double> - all.back() < 1e-13) all.pop_back();
  return all;
}

std::vector<double> julia_circle_H(const MapParams& p, int depth) {
  const std::vector<double> base = julia_on_circle(BlaschkeParams(p), depth);
  std::vector<double> out;
  out.reserve(2 * base.size());
  for (double t : base) out.push_back(t / 2);
  for (double t : base) out.push_back(t / 2 + kPi<double>);
  return out;
}

double max_angular_gap(const std::vector<double>& a) {
  if (a.empty()) return kTwoPi<double>;
  double gap = a.front() + kTwoPi<double> - a.back();
  for (std::size_t i = 1; i < a.size(); ++i) gap = std::max(gap, a[i] - a[i - 1]);
  return gap;
}

double gap_around(const std::vector<double>& a, double at) {
  if (a.empty()) return kTwoPi<double>;
  const double x = normalize_angle(at);
  const auto it = std::lower_bound(a.begin(), a.end(), x);
  const double above = it == a.end() ? a.front() + kTwoPi<double> : *it;
  const double below = it == a.begin() ? a.back() - kTwoPi<double> : *(it - 1);
  if (above - x < 1e-12 || x - below < 1e-12) return 0.0;
  return above - below;
}

}  // namespace qrdyn
