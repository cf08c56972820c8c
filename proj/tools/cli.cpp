#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "qrdyn/blaschke.hpp"
#include "qrdyn/boettcher.hpp"
#include "qrdyn/circle_dynamics.hpp"
#include "qrdyn/dilatation.hpp"
#include "qrdyn/moebius.hpp"
#include "qrdyn/plane.hpp"

namespace qrdyn::cli {

using json = nlohmann::json;
using cd = std::complex<double>;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bool cond, const std::string& what) {
  if (!cond) throw UsageError(what);
}

struct MapFlags {
  double K = 1;
  double theta = 0;
  int n = 2;

  void add(CLI::App* cmd, bool required = true) {
    auto* k = cmd->add_option("--K", K, "dilatation factor K >= 1");
    auto* nn = cmd->add_option("--n", n, "degree n >= 2");
    if (required) {
      k->required();
      nn->required();
    }
    cmd->add_option("--theta", theta, "stretch direction in radians, taken mod pi");
  }

  MapParams params() const {
    check(std::isfinite(K) && K >= 1, "--K must be a finite number >= 1");
    check(std::isfinite(theta), "--theta must be finite");
    check(n >= 2 && n <= 64, "--n must lie in [2, 64]");
    return MapParams(K, theta, n);
  }
};

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

json number_or_infinity(double x) {
  if (std::isinf(x)) return "Infinity";
  return x;
}

// Writes through `write` either into --out or onto `out`.
void emit(const std::string& path, std::ostream& out, bool binary, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(out);
    out.flush();
    return;
  }
  std::ofstream file(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  write(file);
  if (!file) throw std::runtime_error("failed writing " + path);
}

void emit_json(const std::string& path, std::ostream& out, const json& doc) {
  emit(path, out, false, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

json ray_table_json(const MapParams& p, const RayTable& table) {
  json rays = json::array();
  for (const auto& r : table.rays) {
    json row{{"phi", r.phi},
             {"kind", to_string(r.kind)},
             {"stability", to_string(r.stability)},
             {"multiplier", r.multiplier}};
    const int k = ray_branch_index(p, r.phi, r.kind);
    const auto trace = trace_squared(ray_moebius(p, r.phi, r.kind, k));
    row["branch"] = k;
    row["tau"] = trace.tau;
    if (r.kind == RayKind::Fixed) row["fixed_point_radius"] = fixed_ray_radius(p, r.phi);
    rays.push_back(row);
  }
  return rays;
}

json params_json(const MapParams& p) {
  return {{"K", p.K()}, {"theta", p.theta()}, {"n", p.n()}, {"mu", complex_json(p.mu())}};
}

std::array<std::uint8_t, 3> atlas_colour(DynamicsKind kind) {
  switch (kind) {
    case DynamicsKind::Elliptic: return {70, 130, 200};
    case DynamicsKind::Parabolic: return {250, 250, 250};
    case DynamicsKind::Hyperbolic: return {200, 80, 60};
  }
  return {0, 0, 0};
}

Image param_atlas(int n, int res, int jobs) {
  Image img;
  img.width = img.height = res;
  img.rgb.assign(static_cast<std::size_t>(res) * res * 3, 0);
  const double disk = double(n - 1) / (n + 1);
  const double px = 2.0 / res;
  parallel_rows(res, jobs, [&](int i) {
    for (int j = 0; j < res; ++j) {
      const cd w(-1 + (j + 0.5) * px, 1 - (i + 0.5) * px);
      std::array<std::uint8_t, 3> c{235, 235, 235};
      if (std::abs(w) < 1) {
        try {
          c = atlas_colour(denjoy_wolff(BlaschkeParams(-w, n)).kind);
        } catch (const Error&) {
          c = {128, 128, 128};
        }
        if (std::abs(std::abs(w) - disk) < 0.5 * px) c = {0, 0, 0};
      }
      std::copy(c.begin(), c.end(), img.rgb.begin() + (static_cast<std::size_t>(i) * res + j) * 3);
    }
  });
  return img;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamics of the quasiregular maps H = (h_{K,theta})^n", "qrdyn"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string out_path;
  int jobs = 0;

  auto* classify = app.add_subcommand("classify", "Classification, Denjoy-Wolff data, K_theta and the ray table");
  MapFlags classify_flags;
  classify_flags.add(classify);
  classify->add_option("--out", out_path, "JSON output file (stdout if absent)");

  auto* rays = app.add_subcommand("rays", "Fixed and switched rays with stability, radii and Moebius traces");
  MapFlags rays_flags;
  rays_flags.add(rays);
  rays->add_option("--out", out_path, "JSON output file (stdout if absent)");

  auto* atlas = app.add_subcommand("param-atlas", "PPM of the w = -mu parameter disk coloured by classification");
  int atlas_n = 2, atlas_res = 256;
  atlas->add_option("--n", atlas_n, "degree n >= 2")->required();
  atlas->add_option("--res", atlas_res, "pixels per side, at most 4096");
  atlas->add_option("--jobs", jobs, "worker threads (0: all cores)");
  atlas->add_option("--out", out_path, "PPM output file (stdout if absent)");

  auto* render_cmd = app.add_subcommand("render", "PPM of the basin of 0, the escaping set and undecided pixels");
  MapFlags render_flags;
  render_flags.add(render_cmd);
  RenderConfig cfg;
  double center_re = 0, center_im = 0;
  render_cmd->add_option("--res", cfg.resolution, "pixels per side");
  render_cmd->add_option("--max-iter", cfg.max_iter, "iteration budget per point");
  render_cmd->add_option("--half-width", cfg.half_width, "half side length of the window");
  render_cmd->add_option("--center-re", center_re, "window centre, real part");
  render_cmd->add_option("--center-im", center_im, "window centre, imaginary part");
  render_cmd->add_option("--jobs", jobs, "worker threads (0: all cores)");
  render_cmd->add_option("--out", out_path, "PPM output file (stdout if absent)");

  auto* dil = app.add_subcommand("dilatation", "CSV of |mu_{H^m}(z)| and the distortion of H^m along an orbit");
  MapFlags dil_flags;
  dil_flags.add(dil);
  double z_re = 0.3, z_im = 0.2;
  int m_max = 100;
  dil->add_option("--z-re", z_re, "starting point, real part");
  dil->add_option("--z-im", z_im, "starting point, imaginary part");
  dil->add_option("--m-max", m_max, "largest iterate");
  dil->add_option("--out", out_path, "CSV output file (stdout if absent)");

  auto* julia = app.add_subcommand("julia-circle", "CSV of backward-orbit angles approximating the circle Julia set");
  MapFlags julia_flags;
  julia_flags.add(julia);
  int depth = 10;
  std::string circle = "h";
  bool stats = false;
  julia->add_option("--depth", depth, "backward orbit depth");
  julia->add_option("--circle", circle, "h: Julia set of the induced circle map of H, b: of B")
      ->check(CLI::IsMember({"h", "b"}));
  julia->add_flag("--stats", stats, "print gap statistics as JSON instead of the angles");
  julia->add_option("--out", out_path, "output file (stdout if absent)");

  auto* bott = app.add_subcommand("bottcher-check", "Residuals and dilatation probe of the Boettcher iteration");
  MapFlags bott_flags;
  bott_flags.add(bott, false);
  std::string map_path;
  int depth_k = 12;
  bott->add_option("--map", map_path, "local map JSON {z0, n, mu, f1_coeffs}; H itself if absent");
  bott->add_option("--k", depth_k, "iteration depth");
  bott->add_option("--out", out_path, "JSON output file (stdout if absent)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    check(jobs >= 0, "--jobs must be >= 0");
    if (classify->parsed()) {
      const MapParams p = classify_flags.params();
      const Classification c = classify_H(p);
      const RayTable table = fixed_and_switched_points(p);
      json doc = params_json(p);
      doc["classification"] = to_string(c.kind);
      doc["denjoy_wolff"] = complex_json(c.denjoy_wolff);
      doc["multiplier"] = c.multiplier;
      doc["parabolic_band"] = c.band;
      doc["K_theta"] = number_or_infinity(k_theta_threshold(p.theta(), p.n()));
      doc["fixed_count"] = table.fixed_count();
      doc["switched_count"] = table.switched_count();
      doc["neutral_ambiguity"] = table.neutral_ambiguity;
      doc["rays"] = ray_table_json(p, table);
      emit_json(out_path, out, doc);
    } else if (rays->parsed()) {
      const MapParams p = rays_flags.params();
      const RayTable table = fixed_and_switched_points(p);
      json doc = params_json(p);
      doc["fixed_count"] = table.fixed_count();
      doc["switched_count"] = table.switched_count();
      doc["neutral_ambiguity"] = table.neutral_ambiguity;
      doc["rays"] = ray_table_json(p, table);
      emit_json(out_path, out, doc);
    } else if (atlas->parsed()) {
      check(atlas_n >= 2 && atlas_n <= 64, "--n must lie in [2, 64]");
      check(atlas_res >= 1 && atlas_res <= 4096, "--res must lie in [1, 4096]");
      const Image img = param_atlas(atlas_n, atlas_res, jobs);
      emit(out_path, out, true, [&](std::ostream& os) { write_ppm(os, img); });
    } else if (render_cmd->parsed()) {
      const MapParams p = render_flags.params();
      check(cfg.resolution >= 1 && cfg.resolution <= 8192, "--res must lie in [1, 8192]");
      check(cfg.max_iter >= 1, "--max-iter must be >= 1");
      check(std::isfinite(cfg.half_width) && cfg.half_width > 0, "--half-width must be positive");
      check(std::isfinite(center_re) && std::isfinite(center_im), "window centre must be finite");
      cfg.center = cd(center_re, center_im);
      cfg.jobs = jobs;
      const Image img = render(p, cfg);
      emit(out_path, out, true, [&](std::ostream& os) { write_ppm(os, img); });
    } else if (dil->parsed()) {
      const MapParams p = dil_flags.params();
      check(m_max >= 1 && m_max <= 1000000, "--m-max must lie in [1, 1e6]");
      check(std::isfinite(z_re) && std::isfinite(z_im) && cd(z_re, z_im) != 0.0, "--z must be finite and nonzero");
      const DistortionProfile prof = distortion_profile(p, cd(z_re, z_im), m_max);
      emit(out_path, out, false, [&](std::ostream& os) {
        os << "m,abs_mu,K_iter\n" << std::setprecision(17);
        for (const auto& row : prof.rows) os << row.m << ',' << row.abs_mu << ',' << row.K_iter << '\n';
      });
      if (prof.saturated) err << "note: stopped at m = " << prof.rows.back().m << ", |mu| reached saturation\n";
    } else if (julia->parsed()) {
      const MapParams p = julia_flags.params();
      check(depth >= 1 && depth <= 64, "--depth must lie in [1, 64]");
      const std::vector<double> angles =
          circle == "b" ? julia_on_circle(BlaschkeParams(p), depth) : julia_circle_H(p, depth);
      if (stats) {
        const Classification c = classify_H(p);
        json doc = params_json(p);
        doc["circle"] = circle;
        doc["depth"] = depth;
        doc["count"] = angles.size();
        doc["max_gap"] = max_angular_gap(angles);
        doc["classification"] = to_string(c.kind);
        if (c.kind != DynamicsKind::Elliptic) {
          const double dw = std::arg(c.denjoy_wolff);
          doc["gap_at_denjoy_wolff"] =
              circle == "b" ? gap_around(angles, dw) : std::min(gap_around(angles, dw / 2), gap_around(angles, dw / 2 + kPi<double>));
        }
        emit_json(out_path, out, doc);
      } else {
        emit(out_path, out, false, [&](std::ostream& os) {
          os << "angle\n" << std::setprecision(17);
          for (double t : angles) os << t << '\n';
        });
      }
    } else if (bott->parsed()) {
      check(depth_k >= 1 && depth_k <= 64, "--k must lie in [1, 64]");
      const LocalMap m = map_path.empty() ? local_map_of(bott_flags.params()) : local_map_from_json(read_file(map_path));
      BoettcherOptions opts;
      opts.k = depth_k;
      const BoettcherApprox approx = bottcher_iterate(m, m.params(), opts);
      const ExternalRayReport report = fixed_external_rays(m);
      json doc{{"k", approx.k},
               {"domain_radius", approx.domain_radius},
               {"residuals", approx.residuals},
               {"dilatation_probe", dilatation_probe(approx)},
               {"classification", to_string(report.classification.kind)},
               {"fixed_external_rays", report.fixed},
               {"switched_external_rays", report.switched},
               {"attracting_external_rays", report.attracting}};
      emit_json(out_path, out, doc);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::InvalidArgument) return kExitUsage;
    return e.code() == ErrorCode::Unresolved ? kExitUnresolved : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace qrdyn::cli
