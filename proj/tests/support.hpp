#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "stereo/density.hpp"
#include "stereo/forward.hpp"
#include "stereo/kernels.hpp"
#include "stereo/size_distribution.hpp"

namespace stereo::testing {

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

// sup |f - g| over the grid, skipping points within `gap` of any excluded point.
inline double sup_diff(const std::function<double(double)>& f, const std::function<double(double)>& g,
                       const std::vector<double>& grid, const std::vector<double>& excluded = {},
                       double gap = 0.0, double* where = nullptr) {
  double m = 0.0;
  for (double x : grid) {
    bool skip = false;
    for (double e : excluded) skip = skip || std::abs(x - e) < gap;
    if (skip) continue;
    double d = std::abs(f(x) - g(x));
    if (!(d <= m)) {
      m = d;
      if (where) *where = x;
    }
  }
  return m;
}

// Spline through samples of the forward image of H; a smooth section density with a
// known solution.
inline SupportedDensity manufactured_density(const SizeDistribution& H, const SectionKernel& k,
                                             double scale, int nodes = 41) {
  const double top = H.support().hi;
  const double c = k.max_section() * (k.mode() == SectionMode::plane ? top * top : top);
  std::vector<double> xs = linspace(0.0, c, nodes), ys;
  for (double x : xs) ys.push_back(forward(H, k, x, scale, 1e-12));
  ys.back() = 0.0;
  return spline_density(xs, ys, false);
}

}  // namespace stereo::testing
