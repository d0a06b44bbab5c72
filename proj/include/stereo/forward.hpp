#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stereo/density.hpp"
#include "stereo/kernels.hpp"
#include "stereo/size_distribution.hpp"

namespace stereo {

// alpha ∫_{sqrt(sigma/sigma_m)} phi(sigma / lambda^2) H(lambda) / lambda dlambda
double forward_plane(const SizeDistribution& H, const SectionKernel& k, double sigma, double alpha,
                     double tol = 1e-10, double abs_tol = 0.0);
// beta ∫_{l/l_m} lambda phi(l / lambda) H(lambda) dlambda
double forward_line(const SizeDistribution& H, const SectionKernel& k, double l, double beta,
                    double tol = 1e-10, double abs_tol = 0.0);
double forward(const SizeDistribution& H, const SectionKernel& k, double x, double scale,
               double tol = 1e-10, double abs_tol = 0.0);

struct Residual {
  double sup_norm = 0.0;
  double l1_norm = 0.0;
  double target_sup = 0.0;
  std::vector<double> grid;
  std::vector<double> forward;
  std::vector<double> target;
};

// Forward image of H against h on a uniform grid over h's support without 1% end zones.
Residual residual(const SizeDistribution& H, const SupportedDensity& h, const SectionKernel& k,
                  SectionMode mode, double scale, int grid_size = 200);

struct CorrectnessConditions {
  bool limit_condition = false;
  bool integral_condition = false;
  double limit_value = 0.0;
  double integral_value = 0.0;
  std::vector<std::string> notes;
};

// lim_{lambda -> R} lambda ∫_lambda^R r h(pi r^2) / sqrt(r^2 - lambda^2) dr = 0 and
// ∫_0^R h(pi r^2) dr < inf, for h in the section-area variable.
CorrectnessConditions correctness_conditions(const SupportedDensity& h, double R);

struct MomentCheck {
  std::optional<double> plane_mean;
  std::optional<double> plane_target;
  std::optional<bool> plane_mean_ok;
  std::optional<double> line_mean;
  std::optional<double> line_target;
  std::optional<bool> line_mean_ok;
  std::vector<double> deviations;
};

// ∫ sigma phi = 2 pi V / M for plane kernels, ∫ l phi = 4 V / F for line kernels.
MomentCheck moment_identities(const SectionKernel& k, double tol = 1e-8);

}  // namespace stereo
