#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qrdyn::detail {

struct LiftRoot {
  double x;         // in [0, 2*pi)
  bool tangential;  // a double root: touched at a critical point or merged from a cluster
};

/// Default sample count for the initial scan over one period.
inline constexpr int kScanGrid = 4096;

/// Depth below which a local extremum of the wrapped displacement counts as a
/// (double) root.
inline constexpr double kTangencyDepth = 1e-6;
/// Roots closer than kClusterWidth whose level is left by less than
/// kClusterDepth in between are rounding artefacts of one double root.
inline constexpr double kClusterWidth = 1e-6;
inline constexpr double kClusterDepth = 1e-13;

/// Solves s(x) = offset (mod 2*pi) for x in [0, 2*pi), where s is continuous on
/// the real line. The period is cut at the scan grid, at `breakpoints`, and at
/// sign changes of `ds` (so every piece is monotone whenever ds is exact);
/// each crossing of a level offset + 2*pi*m inside a piece is bisected.
std::vector<LiftRoot> displacement_roots(const std::function<double(double)>& s,
                                         const std::function<double(double)>& ds, double offset,
                                         std::span<const double> breakpoints, int grid = kScanGrid);

/// Bisection for f(x) = target on [a, b] where f(a) and f(b) bracket the target.
double bisect_level(const std::function<double(double)>& f, double a, double b, double target);

}  // namespace qrdyn::detail
