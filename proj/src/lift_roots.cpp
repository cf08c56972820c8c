#include "qrdyn/detail/lift_roots.hpp"

#include <algorithm>
#include <cmath>

#include "qrdyn/angles.hpp"

namespace qrdyn::detail {

double bisect_level(const std::function<double(double)>& f, double a, double b, double target) {
  double fa = f(a) - target;
  if (fa == 0) return a;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid) - target;
    if (fm == 0) return mid;
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

namespace {

struct Found {
  double x;
  long m;
  std::size_t piece;
  bool tangential;
};

}  // namespace

std::vector<LiftRoot> displacement_roots(const std::function<double(double)>& s,
                                         const std::function<double(double)>& ds, double offset,
                                         std::span<const double> breakpoints, int grid) {
  const double period = kTwoPi<double>;
  std::vector<double> cuts;
  cuts.reserve(grid + 1 + breakpoints.size());
  std::vector<double> slopes(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    const double x = period * i / grid;
    cuts.push_back(x);
    slopes[i] = ds(x);
  }

  std::vector<double> critical;
  for (double c : breakpoints) {
    if (c >= 0 && c <= period) critical.push_back(c);
  }
  // Sign changes of ds that no supplied breakpoint accounts for.
  for (int i = 0; i < grid; ++i) {
    const double a = period * i / grid;
    const double b = period * (i + 1) / grid;
    if (slopes[i] == 0) {
      critical.push_back(a);
      continue;
    }
    if ((slopes[i] < 0) != (slopes[i + 1] < 0) && slopes[i + 1] != 0) {
      const bool covered = std::any_of(breakpoints.begin(), breakpoints.end(),
                                       [&](double c) { return c >= a && c <= b; });
      if (!covered) critical.push_back(bisect_level(ds, a, b, 0.0));
    }
  }
  cuts.insert(cuts.end(), critical.begin(), critical.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto level = [&](double x) { return s(x) - offset; };
  std::vector<double> values(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) values[i] = level(cuts[i]);
  // s(2 pi) - s(0) is a multiple of 2 pi; pin it so a root at x = 0 cannot
  // fall between the two ends through rounding.
  values.back() = values.front() + period * std::round((values.back() - values.front()) / period);

  std::vector<Found> found;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double va = values[i], vb = values[i + 1];
    const long m_lo = static_cast<long>(std::ceil(std::min(va, vb) / period));
    const long m_hi = static_cast<long>(std::floor(std::max(va, vb) / period));
    for (long m = m_lo; m <= m_hi; ++m) {
      const double target = period * m;
      double x;
      if (va == target) {
        x = a;
      } else if (vb == target) {
        x = b;
      } else {
        x = bisect_level(level, a, b, target);
      }
      found.push_back({x, m, i, false});
    }
  }

  // Extrema of the displacement that touch a level without crossing it.
  for (double c : critical) {
    const auto it = std::lower_bound(cuts.begin(), cuts.end(), c);
    const std::size_t j = static_cast<std::size_t>(it - cuts.begin());
    const double v = level(c);
    const long m = std::lround(v / period);
    if (std::abs(v - period * m) >= kTangencyDepth) continue;
    const bool crossed = std::any_of(found.begin(), found.end(), [&](const Found& f) {
      return f.m == m && (f.piece == j || f.piece + 1 == j);
    });
    if (!crossed) found.push_back({c, m, j, true});
  }

  std::vector<LiftRoot> roots;
  roots.reserve(found.size());
  for (const Found& f : found) roots.push_back({normalize_angle(f.x), f.tangential});
  std::sort(roots.begin(), roots.end(), [](const LiftRoot& l, const LiftRoot& r) { return l.x < r.x; });

  // Roots closer than kClusterWidth with the level barely left in between are
  // one numerically unresolved (near-)double root; keep its flattest member.
  auto same_cluster = [&](const LiftRoot& l, const LiftRoot& r) {
    const double gap = angle_distance(l.x, r.x);
    if (gap < 1e-9) return true;
    if (gap >= kClusterWidth) return false;
    const double mid = l.x + 0.5 * std::remainder(r.x - l.x, period);
    const double v = level(mid);
    return std::abs(v - period * std::round(v / period)) < kClusterDepth;
  };
  auto merge = [&](LiftRoot& keep, const LiftRoot& r) {
    if (std::abs(ds(r.x)) < std::abs(ds(keep.x))) keep.x = r.x;
    keep.tangential = keep.tangential || r.tangential;
  };

  std::vector<LiftRoot> unique;
  for (const LiftRoot& r : roots) {
    if (!unique.empty() && same_cluster(unique.back(), r)) {
      merge(unique.back(), r);
      continue;
    }
    unique.push_back(r);
  }
  if (unique.size() > 1 && same_cluster(unique.back(), unique.front())) {
    merge(unique.front(), unique.back());
    unique.pop_back();
  }
  return unique;
}

}  // namespace qrdyn::detail
