#pragma once

#include <string>
#include <vector>

#include "stereo/density.hpp"
#include "stereo/kernels.hpp"
#include "stereo/size_distribution.hpp"
#include "stereo/unfold.hpp"

namespace stereo {

struct PointMass {
  double location;
  double mass;
};

struct ClassicalSolution {
  SizeDistribution H;
  double scale_constant = 1.0;
  std::vector<PointMass> point_masses;
  std::vector<std::string> warnings;
};

// Richardson-extrapolated central difference, one-sided near the ends of [lo, hi].
double numeric_derivative(const std::function<double(double)>& f, double x, double lo, double hi);

// -(4 sqrt(pi) / alpha) lambda ∫_{pi lambda^2} h'(sigma) / sqrt(sigma - pi lambda^2) dsigma
ClassicalSolution abel_solve_plane(const SupportedDensity& h, bool smoothness_ok,
                                   ScaleMode scale = Normalize{});

// Abel inversion of the nearly-spherical kernel of exponent p:
// -(sin(p pi) / (pi c_K)) (sigma_m lambda^2)^(1-p) ∫ h'(sigma) (sigma - sigma_m lambda^2)^(p-1) dsigma,
// c_K = alpha (1 - p) / (2 sigma_m).
ClassicalSolution generalized_abel_solve(const SupportedDensity& h, const SectionKernel& k,
                                         ScaleMode scale = Normalize{});

// -(1/beta) (h(2 lambda) / lambda)' for the spherical line kernel.
ClassicalSolution derivative_solve_line(const SupportedDensity& h, ScaleMode scale = Normalize{});

// -(2 lambda / (pi alpha)) ∫_lambda^R (g(r)/r)' / sqrt(r^2 - lambda^2) dr
ClassicalSolution wicksell_solve(const SupportedDensity& g, double R, ScaleMode scale = Normalize{});

// g(r) = 2 pi r h(pi r^2): the section-radius density of an area density h.
SupportedDensity radius_density_from_area(const SupportedDensity& h);

}  // namespace stereo
