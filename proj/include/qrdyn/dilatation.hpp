#pragma once

// Complex dilatation of the iterates H^m along an orbit.

#include <complex>
#include <vector>

#include "qrdyn/core_maps.hpp"

namespace qrdyn {

/// Above this modulus the distortion exceeds ~2e12 and rounding dominates.
inline constexpr double kSaturation = 1 - 1e-12;

inline constexpr double kOriginTol = 1e-300;
/// Orbits whose squared angle repeats to this tolerance are held on their ray.
inline constexpr double kRayHold = 1e-12;

struct DilatationState {
  std::complex<double> mu_iter;
  int m;
  double K_iter;
};

inline double distortion(double abs_mu) { return (1 + abs_mu) / (1 - abs_mu); }

/// Dilatation of g o f at z from mu_f(z), r_f(z) = conj(f_z)/f_z and mu_g(f(z)).
std::complex<double> compose_dilatation(std::complex<double> mu_f, std::complex<double> r_f,
                                        std::complex<double> mu_g_at_fz);

/// e^{-2(n-1) i arg h(z)}.
std::complex<double> r_H(const MapParams& p, std::complex<double> z);

DilatationState iterate_dilatation(const MapParams& p, std::complex<double> z, int m);

struct ProfileRow {
  int m;
  double abs_mu;
  double K_iter;
};

struct DistortionProfile {
  std::vector<ProfileRow> rows;
  bool saturated = false;  // stopped early once |mu| > kSaturation
};

DistortionProfile distortion_profile(const MapParams& p, std::complex<double> z, int m_max);

}  // namespace qrdyn
