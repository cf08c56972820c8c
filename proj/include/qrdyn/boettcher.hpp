#pragma once

// Numerical Boettcher coordinate psi with psi(f(z)) = H(psi(z)) near a fixed
// point z0 of f = f1 o f2, where f1 is holomorphic with local degree n and f2
// is the affine stretch with constant dilatation mu. Everything is computed in
// logarithmic coordinates w = log(z - z0).

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrdyn/blaschke.hpp"
#include "qrdyn/circle_dynamics.hpp"
#include "qrdyn/core_maps.hpp"

namespace qrdyn {

struct LocalMap {
  std::complex<double> z0;
  int n;
  std::complex<double> f2_mu;
  /// Taylor coefficients of f1 at z0 from degree n upward; f1_coeffs[0] == 1.
  std::vector<std::complex<double>> f1_coeffs;

  LocalMap(std::complex<double> z0_, int n_, std::complex<double> mu_, std::vector<std::complex<double>> coeffs);

  /// The (K, theta, n) whose h_{K,theta} has dilatation f2_mu.
  MapParams params() const;
  /// f(z) = z0 + f1(h(z - z0)) with f1(u) = sum_k c_k u^{n+k}.
  std::complex<double> eval(std::complex<double> z) const;
};

/// Parses {"z0": [re, im], "n": n, "mu": [re, im], "f1_coeffs": [[re, im], ...]}.
LocalMap local_map_from_json(const std::string& text);

/// The map f = H in the local-map form: z0 = 0, f1 = z^n, f2 = h_{K,theta}.
LocalMap local_map_of(const MapParams& p);

/// log(g(z0 + e^w) - z0), with the branch continued from the principal value at
/// Re w along the segment to w in steps whose argument change stays below pi/8.
std::complex<double> log_transform(const std::function<std::complex<double>(std::complex<double>)>& g,
                                   std::complex<double> z0, std::complex<double> w);

/// Largest rho <= 1 with sum_{j>=1} |c_j| rho^j <= 0.1 that also keeps the disk forward invariant.
double bottcher_domain_radius(const LocalMap& m);

/// The logarithmic lifts used by the iteration. Immutable after construction.
class LogModel {
 public:
  explicit LogModel(const LocalMap& m);

  const LocalMap& local_map() const { return map_; }
  std::complex<double> h_log(std::complex<double> w) const;
  std::complex<double> h_log_inv(std::complex<double> u) const;
  std::complex<double> f1_log(std::complex<double> v) const;
  /// Lift of f: f1_log(h_log(w)).
  std::complex<double> G(std::complex<double> w) const { return f1_log(h_log(w)); }
  /// Lift of H: n h_log(w).
  std::complex<double> H_log(std::complex<double> w) const { return double(map_.n) * h_log(w); }
  std::complex<double> H_log_inv(std::complex<double> v) const { return h_log_inv(v / double(map_.n)); }
  /// phi_k = H_log_inv^k o G^k.
  std::complex<double> phi(int k, std::complex<double> w) const;
  /// psi_k(z) = exp(phi_k(log(z - z0))), a point near 0.
  std::complex<double> psi(int k, std::complex<double> z) const;

 private:
  LocalMap map_;
  std::complex<double> a_, b_, a_inv_, b_inv_;
};

struct BoettcherOptions {
  int k = 12;
  int radial_samples = 8;
  int angular_samples = 64;
  bool early_stop = true;                 // stop once the residual improves by < 1e-13
  std::optional<double> domain_radius;    // override of bottcher_domain_radius
};

struct BoettcherApprox {
  int k;
  double domain_radius;
  double residual;
  std::vector<double> residuals;  // residuals[j] belongs to depth j + 1
  std::shared_ptr<const LogModel> model;

  std::complex<double> eval(std::complex<double> z) const { return model->psi(k, z); }
};

/// Sup over the annulus rho/2 <= |z - z0| <= rho of |psi_k(f(z)) - H(psi_k(z))|.
double conjugacy_residual(const LogModel& model, int k, double rho, int radial_samples, int angular_samples);

/// Throws NonContraction when the residual grows by more than 1e-12 between depths.
BoettcherApprox bottcher_iterate(const LocalMap& m, const MapParams& p, const BoettcherOptions& opts = {});

/// Largest finite-difference Beltrami quotient |psi_zbar / psi_z| on |z - z0| = r.
double psi_dilatation(const BoettcherApprox& approx, double r, int angular_samples = 16);

/// psi_dilatation at rho, rho/2, rho/4.
std::vector<double> dilatation_probe(const BoettcherApprox& approx);

/// Points psi^{-1}(r e^{i phi}) for r log-spaced from r_max down to r_max * 1e-4.
std::vector<std::complex<double>> external_ray(const LocalMap& m, const BoettcherApprox& approx, double phi,
                                               double r_max, int steps);

struct ExternalRayReport {
  Classification classification;
  RayTable rays;
  int fixed = 0;
  int switched = 0;
  int attracting = 0;
};

ExternalRayReport fixed_external_rays(const LocalMap& m);

}  // namespace qrdyn
