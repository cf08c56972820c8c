#include "qrdyn/boettcher.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace qrdyn {

using cd = std::complex<double>;

LocalMap::LocalMap(cd z0_, int n_, cd mu_, std::vector<cd> coeffs)
    : z0(z0_), n(n_), f2_mu(mu_), f1_coeffs(std::move(coeffs)) {
  require(n >= 2, "local degree n must be >= 2");
  require(std::abs(f2_mu) < 1, "dilatation mu must satisfy |mu| < 1");
  require(!f1_coeffs.empty() && std::abs(f1_coeffs.front() - 1.0) < 1e-12,
          "f1_coeffs must start with the normalized degree-n coefficient 1");
}

MapParams LocalMap::params() const {
  const double r = std::abs(f2_mu);
  return MapParams((1 + r) / (1 - r), std::arg(f2_mu) / 2, n);
}

cd LocalMap::eval(cd z) const {
  const cd u = eval_h(params(), z - z0);
  cd sum = 0.0;
  for (auto it = f1_coeffs.rbegin(); it != f1_coeffs.rend(); ++it) sum = sum * u + *it;
  return z0 + ipow(u, n) * sum;
}

namespace {

cd parse_complex(const nlohmann::json& j, const char* what) {
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          std::string(what) + " must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

LocalMap local_map_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("local map JSON: ") + e.what());
  }
  require(doc.is_object(), "local map JSON must be an object");
  for (const char* key : {"z0", "n", "mu", "f1_coeffs"}) {
    require(doc.contains(key), std::string("local map JSON is missing \"") + key + "\"");
  }
  require(doc["n"].is_number_integer(), "\"n\" must be an integer");
  require(doc["f1_coeffs"].is_array(), "\"f1_coeffs\" must be an array");
  std::vector<cd> coeffs;
  for (const auto& c : doc["f1_coeffs"]) coeffs.push_back(parse_complex(c, "f1_coeffs entry"));
  return LocalMap(parse_complex(doc["z0"], "z0"), doc["n"].get<int>(), parse_complex(doc["mu"], "mu"),
                  std::move(coeffs));
}

LocalMap local_map_of(const MapParams& p) { return LocalMap(0.0, p.n(), p.mu(), {1.0}); }

cd log_transform(const std::function<cd(cd)>& g, cd z0, cd w) {
  auto raw = [&](cd at) {
    const cd d = g(z0 + std::exp(at)) - z0;
    if (d == 0.0) throw Error(ErrorCode::BranchLoss, "g(z0 + e^w) hits z0");
    return std::log(d);
  };
  cd current = raw({w.real(), 0.0});
  double y = 0;
  const double target = w.imag();
  double step = std::copysign(kPi<double> / 16, target);
  while (y != target) {
    if (std::abs(target - y) < std::abs(step)) step = target - y;
    const cd next = raw({w.real(), y + step});
    const double jump = std::remainder(next.imag() - current.imag(), kTwoPi<double>);
    if (std::abs(jump) >= kPi<double> / 8) {
      step /= 2;
      if (std::abs(step) < 1e-12) throw Error(ErrorCode::BranchLoss, "argument jumps faster than the step allows");
      continue;
    }
    current = {next.real(), current.imag() + jump};
    y += step;
  }
  return current;
}

double bottcher_domain_radius(const LocalMap& m) {
  const MapParams p = m.params();
  auto tail = [&](double rho) {
    double s = 0, pw = 1;
    for (std::size_t j = 1; j < m.f1_coeffs.size(); ++j) {
      pw *= rho;
      s += std::abs(m.f1_coeffs[j]) * pw;
    }
    return s;
  };
  double rho_coeff = 1;
  if (tail(1.0) > 0.1) {
    double lo = 0, hi = 1;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      (tail(mid) > 0.1 ? hi : lo) = mid;
    }
    rho_coeff = lo;
  }
  // f1 sees h(z - z0), which is up to K times farther out.
  const double K = p.K();
  const double invariant = std::pow(1.1 * std::pow(K, m.n), -1.0 / (m.n - 1));
  return std::min({rho_coeff / K, invariant, 1.0});
}

LogModel::LogModel(const LocalMap& m) : map_(m) {
  const MapParams p = m.params();
  const double K = p.K();
  const cd dir = std::polar(1.0, 2 * p.theta());
  a_ = (K + 1) / 2;
  b_ = dir * ((K - 1) / 2);
  a_inv_ = (1 / K + 1) / 2;
  b_inv_ = dir * ((1 / K - 1) / 2);
}

// h(e^w) = e^w (a + b e^{-2 i Im w}) and Re(a + b e^{...}) >= a - |b| > 0,
// so the principal logarithm of the bracket is continuous.
cd LogModel::h_log(cd w) const { return w + std::log(a_ + b_ * std::polar(1.0, -2 * w.imag())); }

cd LogModel::h_log_inv(cd u) const { return u + std::log(a_inv_ + b_inv_ * std::polar(1.0, -2 * u.imag())); }

cd LogModel::f1_log(cd v) const {
  const auto& c = map_.f1_coeffs;
  if (c.size() == 1) return double(map_.n) * v;
  const cd u = std::exp(v);
  cd tail = 0.0;
  for (std::size_t j = c.size() - 1; j >= 1; --j) tail = (tail + c[j]) * u;
  if (std::abs(tail) >= 1) throw Error(ErrorCode::BranchLoss, "point left the region where f1 is dominated by its leading term");
  // log(1 + t) without losing the small tail to rounding in 1 + t.
  const double re = 0.5 * std::log1p(2 * tail.real() + std::norm(tail));
  const double im = std::atan2(tail.imag(), 1 + tail.real());
  return double(map_.n) * v + cd(re, im);
}

namespace {

// re + i (frac + 2 pi turns). Im grows like n^k under G^k; keeping the winding
// count exact leaves every phase computed from a number in [0, 2 pi).
struct Winding {
  double re;
  double frac;
  __int128 turns;

  explicit Winding(cd w) : re(w.real()), frac(w.imag()), turns(0) { wrap(); }

  cd value() const { return {re, frac + kTwoPi<double> * static_cast<double>(turns)}; }
  cd reduced() const { return {re, frac}; }

  void wrap() {
    const double q = std::floor(frac / kTwoPi<double>);
    frac -= q * kTwoPi<double>;
    turns += static_cast<__int128>(q);
    if (frac < 0) frac += kTwoPi<double>, turns -= 1;
    if (frac >= kTwoPi<double>) frac = 0, turns += 1;
  }
  void shift(cd d) {
    re += d.real();
    frac += d.imag();
    wrap();
  }
  void scale(int n) {
    if (__builtin_mul_overflow(turns, static_cast<__int128>(n), &turns)) {
      throw Error(ErrorCode::BranchLoss, "winding count overflows at this depth");
    }
    re *= n;
    frac *= n;
    wrap();
  }
  void divide(int n) {
    __int128 q = turns / n, r = turns % n;
    if (r < 0) r += n, q -= 1;
    re /= n;
    frac = (frac + kTwoPi<double> * static_cast<double>(r)) / n;
    turns = q;
  }
};

}  // namespace

cd LogModel::phi(int k, cd w) const {
  Winding v(w);
  for (int i = 0; i < k; ++i) {
    v.shift(h_log(v.reduced()) - v.reduced());
    const cd before = v.reduced();
    v.scale(map_.n);
    v.shift(f1_log(before) - double(map_.n) * before);
  }
  for (int i = 0; i < k; ++i) {
    v.divide(map_.n);
    v.shift(h_log_inv(v.reduced()) - v.reduced());
  }
  return v.value();
}

cd LogModel::psi(int k, cd z) const { return std::exp(phi(k, std::log(z - map_.z0))); }

double conjugacy_residual(const LogModel& model, int k, double rho, int radial_samples, int angular_samples) {
  double worst = 0;
  for (int i = 0; i < radial_samples; ++i) {
    const double r = radial_samples == 1 ? rho : rho / 2 + (rho / 2) * i / (radial_samples - 1);
    for (int j = 0; j < angular_samples; ++j) {
      const cd w(std::log(r), kTwoPi<double> * j / angular_samples);
      const cd lhs = std::exp(model.phi(k, model.G(w)));
      const cd rhs = std::exp(model.H_log(model.phi(k, w)));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

BoettcherApprox bottcher_iterate(const LocalMap& m, const MapParams& p, const BoettcherOptions& opts) {
  require(opts.k >= 1, "depth k must be >= 1");
  require(p.n() == m.n, "MapParams degree differs from the local map degree");
  require(std::abs(p.mu() - m.f2_mu) < 1e-12, "MapParams dilatation differs from the local map dilatation");
  require(opts.radial_samples >= 1 && opts.angular_samples >= 1, "sampling grid must be nonempty");

  auto model = std::make_shared<const LogModel>(m);
  const double rho = opts.domain_radius.value_or(bottcher_domain_radius(m));
  require(rho > 0, "domain radius must be positive");

  BoettcherApprox out{0, rho, 0.0, {}, model};
  for (int k = 1; k <= opts.k; ++k) {
    const double res = conjugacy_residual(*model, k, rho, opts.radial_samples, opts.angular_samples);
    if (!std::isfinite(res)) throw Error(ErrorCode::BranchLoss, "residual is not finite at depth " + std::to_string(k));
    if (!out.residuals.empty() && res > out.residuals.back() + 1e-12) {
      throw Error(ErrorCode::NonContraction, "residual grew from " + std::to_string(out.residuals.back()) + " to " +
                                                 std::to_string(res) + " at depth " + std::to_string(k));
    }
    const bool stalled = !out.residuals.empty() && out.residuals.back() - res < 1e-13;
    out.residuals.push_back(res);
    out.k = k;
    out.residual = res;
    if (opts.early_stop && stalled) break;
  }
  return out;
}

double psi_dilatation(const BoettcherApprox& approx, double r, int angular_samples) {
  const cd z0 = approx.model->local_map().z0;
  const double d = 1e-5 * r;
  double worst = 0;
  for (int j = 0; j < angular_samples; ++j) {
    const cd z = z0 + std::polar(r, kTwoPi<double> * (j + 0.5) / angular_samples);
    const cd dx = (approx.eval(z + d) - approx.eval(z - d)) / (2 * d);
    const cd dy = (approx.eval(z + cd(0, d)) - approx.eval(z - cd(0, d))) / (2 * d);
    const cd dz = 0.5 * (dx - cd(0, 1) * dy);
    const cd dzbar = 0.5 * (dx + cd(0, 1) * dy);
    worst = std::max(worst, std::abs(dzbar / dz));
  }
  return worst;
}

std::vector<double> dilatation_probe(const BoettcherApprox& approx) {
  const double rho = approx.domain_radius;
  return {psi_dilatation(approx, rho), psi_dilatation(approx, rho / 2), psi_dilatation(approx, rho / 4)};
}

std::vector<cd> external_ray(const LocalMap& m, const BoettcherApprox& approx, double phi, double r_max, int steps) {
  require(steps >= 2, "external ray needs at least 2 steps");
  require(r_max > 0 && r_max <= approx.domain_radius, "r_max must lie in (0, domain_radius]");
  const LogModel& model = *approx.model;
  const int k = approx.k;

  auto residual = [&](const Eigen::Vector2d& x, const cd& target) {
    const cd v = model.phi(k, cd(x(0), x(1))) - target;
    return Eigen::Vector2d(v.real(), v.imag());
  };

  std::vector<cd> out;
  out.reserve(steps);
  Eigen::Vector2d x(std::log(r_max), phi);
  double last_good = r_max;
  for (int s = 0; s < steps; ++s) {
    const double log_r = std::log(r_max) + std::log(1e-4) * s / (steps - 1);
    const cd target(log_r, phi);
    if (s > 0) x(0) += log_r - std::log(last_good);
    Eigen::Vector2d F = residual(x, target);
    bool converged = F.norm() < 1e-12;
    for (int it = 0; it < 60 && !converged; ++it) {
      Eigen::Matrix2d J;
      const double hstep = 1e-7 * std::max(1.0, x.norm());
      for (int c = 0; c < 2; ++c) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e(c) = hstep;
        J.col(c) = (residual(x + e, target) - residual(x - e, target)) / (2 * hstep);
      }
      const Eigen::Vector2d delta = J.partialPivLu().solve(-F);
      double t = 1;
      bool moved = false;
      for (int halving = 0; halving < 30; ++halving, t /= 2) {
        const Eigen::Vector2d trial = x + t * delta;
        const Eigen::Vector2d Ft = residual(trial, target);
        if (Ft.allFinite() && Ft.norm() < F.norm()) {
          x = trial;
          F = Ft;
          moved = true;
          break;
        }
      }
      converged = F.norm() < 1e-11;
      if (!moved) break;
    }
    if (!converged) {
      throw Error(ErrorCode::InversionFailure, "psi could not be inverted below r = " + std::to_string(last_good));
    }
    last_good = std::exp(log_r);
    out.push_back(m.z0 + std::exp(cd(x(0), x(1))));
  }
  return out;
}

ExternalRayReport fixed_external_rays(const LocalMap& m) {
  const MapParams p = m.params();
  ExternalRayReport report{classify_H(p), fixed_and_switched_points(p)};
  for (const auto& r : report.rays.rays) {
    (r.kind == RayKind::Fixed ? report.fixed : report.switched)++;
    if (r.stability == Stability::Attracting) report.attracting++;
  }
  return report;
}

}  // namespace qrdyn
