#include "qrdyn/plane.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace qrdyn {

using cd = std::complex<double>;

double escape_radius(const MapParams& p) { return std::pow(2.0, 1.0 / (p.n() - 1)); }

double trap_radius(const MapParams& p) {
  return std::pow(2 * std::pow(p.K(), p.n()), -1.0 / (p.n() - 1));
}

PlaneCell classify_point(const MapParams& p, cd z, int max_iter) {
  require(max_iter >= 1, "max_iter must be >= 1");
  const double r_out = escape_radius(p);
  const double r_in = trap_radius(p);
  cd w = z;
  for (int i = 0;; ++i) {
    const double r = std::abs(w);
    if (r >= r_out) return {Verdict::Escaping, Certificate::OuterRadius, i};
    if (r <= r_in) return {Verdict::Basin0, Certificate::InnerRadius, i};
    if (i == max_iter) return {Verdict::Undecided, Certificate::IterBudget, i};
    w = eval_H(p, w);
  }
}

double boundary_radius_on_ray(const MapParams& p, double phi, double tol, int max_iter) {
  require(tol > 0, "tolerance must be positive");
  const cd dir = std::polar(1.0, phi);
  double lo = trap_radius(p);
  double hi = escape_radius(p);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const Verdict v = classify_point(p, mid * dir, max_iter).verdict;
    if (v == Verdict::Undecided) {
      lo = hi = mid;
      break;
    }
    (v == Verdict::Basin0 ? lo : hi) = mid;
  }
  const double r_star = 0.5 * (lo + hi);

  if (classify_point(p, 0.99 * r_star * dir, max_iter).verdict != Verdict::Basin0 ||
      classify_point(p, 1.01 * r_star * dir, max_iter).verdict != Verdict::Escaping) {
    throw Error(ErrorCode::BudgetExceeded, "boundary radius could not be certified at phi = " + std::to_string(phi));
  }
  return r_star;
}

std::vector<cd> boundary_polyline(const MapParams& p, int samples, double tol, int max_iter) {
  require(samples >= 3, "polyline needs at least 3 samples");
  std::vector<cd> out;
  out.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double phi = kTwoPi<double> * k / samples;
    out.push_back(std::polar(boundary_radius_on_ray(p, phi, tol, max_iter), phi));
  }
  return out;
}

void parallel_rows(int rows, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min(jobs, std::max(rows, 1));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int row = next++; row < rows; row = next++) body(row);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

namespace {

void shade(const PlaneCell& cell, std::uint8_t* px) {
  const int level = std::min(cell.iterations_used * 12, 180);
  switch (cell.verdict) {
    case Verdict::Basin0:
      px[0] = static_cast<std::uint8_t>(30);
      px[1] = static_cast<std::uint8_t>(90 + level / 3);
      px[2] = static_cast<std::uint8_t>(255 - level);
      break;
    case Verdict::Escaping:
      px[0] = static_cast<std::uint8_t>(255 - level);
      px[1] = static_cast<std::uint8_t>(200 - level);
      px[2] = static_cast<std::uint8_t>(60);
      break;
    case Verdict::Undecided:
      px[0] = px[1] = px[2] = 0;
      break;
  }
}

}  // namespace

Image render(const MapParams& p, const RenderConfig& cfg) {
  require(cfg.resolution >= 1, "resolution must be >= 1");
  require(cfg.half_width > 0, "half_width must be positive");
  require(cfg.max_iter >= 1, "max_iter must be >= 1");
  const int res = cfg.resolution;
  const double hw = cfg.half_width;
  const double step = 2 * hw / res;
  auto point = [&](double row, double col) {
    return cfg.center + cd(-hw + col * step, hw - row * step);
  };

  // Corner verdicts on the shared (res + 1)^2 lattice.
  std::vector<Verdict> corners(static_cast<std::size_t>(res + 1) * (res + 1));
  parallel_rows(res + 1, cfg.jobs, [&](int i) {
    for (int j = 0; j <= res; ++j) {
      corners[static_cast<std::size_t>(i) * (res + 1) + j] = classify_point(p, point(i, j), cfg.max_iter).verdict;
    }
  });

  Image img;
  img.width = img.height = res;
  img.rgb.assign(static_cast<std::size_t>(res) * res * 3, 0);
  img.verdicts.assign(static_cast<std::size_t>(res) * res, Verdict::Undecided);
  parallel_rows(res, cfg.jobs, [&](int i) {
    for (int j = 0; j < res; ++j) {
      PlaneCell cell = classify_point(p, point(i + 0.5, j + 0.5), cfg.max_iter);
      const std::size_t c0 = static_cast<std::size_t>(i) * (res + 1) + j;
      for (std::size_t c : {c0, c0 + 1, c0 + res + 1, c0 + res + 2}) {
        if (corners[c] != cell.verdict) cell.verdict = Verdict::Undecided;
      }
      const std::size_t idx = static_cast<std::size_t>(i) * res + j;
      img.verdicts[idx] = cell.verdict;
      shade(cell, &img.rgb[idx * 3]);
    }
  });
  return img;
}

void write_ppm(std::ostream& os, const Image& img) {
  os << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
}

}  // namespace qrdyn
