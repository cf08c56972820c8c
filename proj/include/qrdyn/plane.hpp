#pragma once

// Basin of 0 versus escaping set: certified point classification, the boundary
// radius along rays, and escape-time style rendering.

#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string_view>
#include <vector>

#include "qrdyn/core_maps.hpp"

namespace qrdyn {

enum class Verdict : std::uint8_t { Basin0, Escaping, Undecided };
enum class Certificate : std::uint8_t { InnerRadius, OuterRadius, IterBudget };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Basin0: return "basin0";
    case Verdict::Escaping: return "escaping";
    case Verdict::Undecided: return "undecided";
  }
  return "unknown";
}

struct PlaneCell {
  Verdict verdict;
  Certificate certificate;
  int iterations_used;
};

/// |z| >= 2^{1/(n-1)} forces |H(z)| >= 2|z|.
double escape_radius(const MapParams& p);
/// |z| <= (2 K^n)^{-1/(n-1)} forces |H(z)| <= |z| / 2.
double trap_radius(const MapParams& p);

PlaneCell classify_point(const MapParams& p, std::complex<double> z, int max_iter);

inline constexpr int kDefaultMaxIter = 256;

double boundary_radius_on_ray(const MapParams& p, double phi, double tol, int max_iter = kDefaultMaxIter);

std::vector<std::complex<double>> boundary_polyline(const MapParams& p, int samples, double tol,
                                                    int max_iter = kDefaultMaxIter);

struct RenderConfig {
  std::complex<double> center{0.0, 0.0};
  double half_width = 1.5;
  int resolution = 512;
  int max_iter = kDefaultMaxIter;
  int jobs = 0;  // 0 means hardware concurrency
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
  std::vector<Verdict> verdicts;  // row-major, one per pixel
};

/// Pixel (i, j) samples center + (-hw + (j + 1/2) 2hw/res) + i (hw - (i + 1/2) 2hw/res).
/// A pixel is Undecided when its centre is, or when its centre and corners disagree.
Image render(const MapParams& p, const RenderConfig& cfg);

void write_ppm(std::ostream& os, const Image& img);

/// Runs body(row) for row in [0, rows) on `jobs` threads (0: hardware concurrency).
void parallel_rows(int rows, int jobs, const std::function<void(int)>& body);

}  // namespace qrdyn
