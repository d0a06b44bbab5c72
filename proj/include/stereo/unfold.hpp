#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stereo/density.hpp"
#include "stereo/kernels.hpp"
#include "stereo/mellin.hpp"
#include "stereo/size_distribution.hpp"

namespace stereo {

struct Normalize {};
struct Explicit {
  double value;
};
using ScaleMode = std::variant<Normalize, Explicit>;

struct Preconditions {
  bool strip_ok = false;
  bool h_star_integrable = false;
  bool quotient_integrable = false;
  double mu_used = 0.0;
};

struct SolveReport {
  Preconditions preconditions;
  double residual_sup_norm = 0.0;
  double residual_l1_norm = 0.0;
  double scale_constant = 1.0;
  bool normalizable = false;
  double bandwidth = 0.0;
  bool bandwidth_converged = false;
  double h_star_decay_exponent = 0.0;
  double quotient_decay_exponent = 0.0;
  Interval support;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  std::optional<double> mu;
  ScaleMode scale = Normalize{};
  InversionOptions inversion;
  // Lower end of the tabulated inverse; smaller lambda use the direct contour sum.
  double lambda_floor = 1e-3;
  int residual_grid = 200;
  bool compute_residual = true;
};

struct UnfoldResult {
  SizeDistribution H;
  SolveReport report;
};

UnfoldResult solve_plane(const SupportedDensity& h, const SectionKernel& k,
                         const SolveOptions& opts = {});
UnfoldResult solve_line(const SupportedDensity& h, const SectionKernel& k,
                        const SolveOptions& opts = {});

// H_1(sigma) = H(sqrt(sigma / sigma_m)) / sqrt(4 sigma_m sigma)
SupportedDensity to_sigma_distribution(const SizeDistribution& H, double sigma_m);
// H_1(l) = H(l / l_m) / l_m
SupportedDensity to_length_distribution(const SizeDistribution& H, double l_m);

// H_s(lambda) = 2 lambda^(-2s) / (alpha phi*(s)), whose plane image is sigma^(-s).
std::function<cplx(double)> model_solution_plane(const SectionKernel& k, cplx s, double alpha = 1.0);
// H_s(lambda) = lambda^(-s-2) / (beta phi*(s)), whose line image is l^(-s).
std::function<cplx(double)> model_solution_line(const SectionKernel& k, cplx s, double beta = 1.0);

}  // namespace stereo
