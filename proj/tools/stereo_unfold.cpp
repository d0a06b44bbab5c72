#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "stereo/classical.hpp"
#include "stereo/errors.hpp"
#include "stereo/forward.hpp"
#include "stereo/io.hpp"
#include "stereo/simulate.hpp"
#include "stereo/unfold.hpp"

namespace fs = std::filesystem;
using namespace stereo;

namespace {

struct UsageError : Error {
  using Error::Error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) throw IoError("cannot write '" + path + "'");
}

std::string table_text(const Table& t) {
  std::ostringstream s;
  write_table_csv(s, t);
  return s.str();
}

Table rescaled_table(const SizeDistribution& H, const SectionKernel& k, SectionMode mode, int n) {
  const double m = k.max_section();
  auto H1 = mode == SectionMode::plane ? to_sigma_distribution(H, m) : to_length_distribution(H, m);
  Table t{{mode == SectionMode::plane ? "sigma" : "l", "H1"}, {}};
  const double top = H1.support_upper();
  for (int i = 0; i < n; ++i) {
    double x = top * i / (n - 1);
    double v = H1(x);
    t.rows.push_back({x, std::isfinite(v) ? v : 0.0});
  }
  return t;
}

struct UnfoldArgs {
  std::string mode, kernel = "sphere", h, method = "mellin", out = ".";
  std::optional<double> mu, tol;
  int points = 501;
};

int run_unfold(const UnfoldArgs& a) {
  SectionMode mode;
  std::optional<SectionKernel> kernel;
  std::optional<SupportedDensity> h;
  try {
    mode = parse_mode(a.mode);
    kernel = parse_kernel(a.kernel, mode);
    h = parse_density(a.h);
    fs::create_directories(a.out);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }

  nlohmann::json report;
  std::optional<SizeDistribution> H;
  if (a.method == "mellin") {
    SolveOptions opts;
    opts.mu = a.mu;
    if (a.tol) opts.inversion.tol = *a.tol;
    auto r = mode == SectionMode::plane ? solve_plane(*h, *kernel, opts) : solve_line(*h, *kernel, opts);
    H = r.H;
    report = to_json(r.report);
  } else {
    ClassicalSolution s{SizeDistribution::zero({0.0, 0.0}, Provenance::closed_form), 1.0, {}, {}};
    if (a.method == "abel") {
      if (mode != SectionMode::plane) throw UsageError("abel needs plane mode");
      s = kernel->shape() == ShapeId::sphere_plane ? abel_solve_plane(*h, true)
                                                    : generalized_abel_solve(*h, *kernel);
    } else if (a.method == "derivative") {
      if (mode != SectionMode::line || kernel->shape() != ShapeId::sphere_line)
        throw UsageError("derivative needs line mode with the sphere kernel");
      s = derivative_solve_line(*h);
    } else if (a.method == "wicksell") {
      if (mode != SectionMode::plane || kernel->shape() != ShapeId::sphere_plane)
        throw UsageError("wicksell needs plane mode with the sphere kernel");
      s = wicksell_solve(radius_density_from_area(*h), 1.0);
    } else {
      throw UsageError("unknown method '" + a.method + "'");
    }
    H = s.H;
    report = to_json(s);
    if (H->support().hi > H->support().lo) report["residual"] = to_json(residual(*H, *h, *kernel, mode, s.scale_constant));
  }
  report["method"] = a.method;
  report["mode"] = to_string(mode);
  const fs::path out(a.out);
  write_text((out / "H.csv").string(), table_text(sample_h_table(*H, a.points)));
  write_text((out / "H1.csv").string(), table_text(rescaled_table(*H, *kernel, mode, a.points)));
  write_text((out / "report.json").string(), report.dump(2) + "\n");
  for (const auto& w : report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
  return 0;
}

struct SimulateArgs {
  std::string mode, kernel = "sphere", dist, out = "-";
  std::uint64_t n = 100000, seed = 0;
  int bins = 100;
};

int run_simulate(const SimulateArgs& a) {
  std::optional<SimConfig> cfg;
  try {
    SectionMode mode = parse_mode(a.mode);
    cfg.emplace(SimConfig{mode, parse_distribution(a.dist), parse_kernel(a.kernel, mode), a.n, a.seed, a.bins});
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  Histogram h = simulate_sections(*cfg);
  if (a.out == "-")
    write_histogram_csv(std::cout, h);
  else
    write_histogram(a.out, h);
  return 0;
}

struct VerifyArgs {
  std::string mode = "plane", kernel = "sphere", dist, h, out = "-";
  std::optional<double> scale;
  double tol = 1e-4;
};

int run_verify(const VerifyArgs& a) {
  SectionMode mode;
  std::optional<SectionKernel> kernel;
  std::optional<SupportedDensity> h;
  std::optional<SizeDistribution> H;
  try {
    mode = parse_mode(a.mode);
    kernel = parse_kernel(a.kernel, mode);
    if (!a.h.empty()) h = parse_density(a.h);
    if (!a.dist.empty()) H = parse_distribution(a.dist);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  nlohmann::json v;
  bool pass = true;
  MomentCheck m = moment_identities(*kernel);
  v["moments"] = to_json(m);
  if (m.plane_mean_ok) pass = pass && *m.plane_mean_ok;
  if (m.line_mean_ok) pass = pass && *m.line_mean_ok;
  if (h && mode == SectionMode::plane && kernel->shape() == ShapeId::sphere_plane) {
    auto c = correctness_conditions(*h, 1.0);
    v["correctness"] = to_json(c);
    pass = pass && c.limit_condition && c.integral_condition;
  }
  if (h && H) {
    double scale = 1.0;
    if (a.scale) {
      scale = *a.scale;
    } else {
      // Least-squares scale of the unit-constant forward image.
      Residual unit = residual(*H, *h, *kernel, mode, 1.0);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < unit.grid.size(); ++i) {
        num += unit.forward[i] * unit.target[i];
        den += unit.forward[i] * unit.forward[i];
      }
      scale = den > 0.0 ? num / den : 1.0;
    }
    Residual r = residual(*H, *h, *kernel, mode, scale);
    v["scale_constant"] = scale;
    v["residual"] = to_json(r);
    v["residual_gate"] = a.tol;
    pass = pass && r.sup_norm <= a.tol * r.target_sup;
  }
  v["pass"] = pass;
  write_text(a.out, v.dump(2) + "\n");
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stereological unfolding of section-size distributions"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  UnfoldArgs ua;
  auto* unfold = app.add_subcommand("unfold", "Recover the size distribution H from section data");
  unfold->add_option("mode", ua.mode, "plane or line")->required()->check(CLI::IsMember({"plane", "line"}));
  unfold->add_option("--kernel", ua.kernel, "sphere, nearly-sphere:SIGMA_M,P or custom:FILE");
  unfold->add_option("--h", ua.h, "uniform:c, triangle, quadratic, or a histogram CSV/JSON")->required();
  unfold->add_option("--method", ua.method, "mellin, abel, derivative or wicksell")
      ->check(CLI::IsMember({"mellin", "abel", "derivative", "wicksell"}));
  unfold->add_option("--mu", ua.mu, "contour abscissa");
  unfold->add_option("--tol", ua.tol, "inversion tolerance");
  unfold->add_option("--points", ua.points, "samples in the output tables")->check(CLI::Range(2, 1000000));
  unfold->add_option("--out", ua.out, "output directory");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Sample section sizes from a size distribution");
  simulate->add_option("mode", sa.mode, "plane or line")->required()->check(CLI::IsMember({"plane", "line"}));
  simulate->add_option("--kernel", sa.kernel, "sphere, nearly-sphere:SIGMA_M,P or custom:FILE");
  simulate->add_option("--dist", sa.dist, "sex1, sex2, ..., or a lambda,H CSV")->required();
  simulate->add_option("--n", sa.n, "number of sections")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sa.seed, "random seed");
  simulate->add_option("--bins", sa.bins, "histogram bins")->check(CLI::PositiveNumber);
  simulate->add_option("--out", sa.out, "histogram file (.csv or .json), - for stdout");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a size distribution against section data");
  verify->add_option("--mode", va.mode, "plane or line")->check(CLI::IsMember({"plane", "line"}));
  verify->add_option("--kernel", va.kernel, "sphere, nearly-sphere:SIGMA_M,P or custom:FILE");
  verify->add_option("--dist", va.dist, "H: a named distribution or a lambda,H CSV");
  verify->add_option("--h", va.h, "section density: uniform:c, triangle, quadratic, or a histogram");
  verify->add_option("--scale", va.scale, "scale constant alpha or beta (default: least squares)");
  verify->add_option("--tol", va.tol, "relative residual gate");
  verify->add_option("--out", va.out, "verdict JSON file, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*unfold) return run_unfold(ua);
    if (*simulate) return run_simulate(sa);
    return run_verify(va);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionFailed& e) {
    std::cerr << "precondition failed (" << to_string(e.condition()) << "): " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 2;
  }
}
