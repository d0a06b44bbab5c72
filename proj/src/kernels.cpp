#include "stereo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stereo/detail/quadrature.hpp"
#include "stereo/errors.hpp"
#include "stereo/special.hpp"

namespace stereo {

namespace {
constexpr double pi = std::numbers::pi;
}

const char* to_string(ShapeId id) {
  switch (id) {
    case ShapeId::sphere_plane: return "sphere_plane";
    case ShapeId::sphere_line: return "sphere_line";
    case ShapeId::nearly_sphere_plane: return "nearly_sphere_plane";
    case ShapeId::custom: return "custom";
  }
  return "unknown";
}

const char* to_string(SectionMode mode) { return mode == SectionMode::plane ? "plane" : "line"; }

SectionKernel::SectionKernel(Parts parts) {
  if (!parts.phi) throw InvalidArgument("kernel needs a profile density");
  if (!(parts.max_section > 0.0)) throw InvalidShapeParameters("max section must be positive");
  if (!parts.phi_at_gap) {
    auto phi = *parts.phi;
    double m = parts.max_section;
    parts.phi_at_gap = [phi, m](double g) { return phi(m - g); };
  }
  if (!parts.cdf || !parts.quantile) {
    // Tabulated CDF for profiles without a closed-form inverse.
    const auto phi = *parts.phi;
    const double m = parts.max_section;
    const double p = parts.singularity_exponent;
    static constexpr int cells = 4096;
    auto table = std::make_shared<std::vector<double>>(cells + 1, 0.0);
    auto node = [m, p](int i) {
      // Nodes crowd toward the singular end when p > 0.
      double u = static_cast<double>(i) / cells;
      return p > 0.0 ? m * (1.0 - std::pow(1.0 - u, 1.0 / (1.0 - p))) : m * u;
    };
    for (int i = 0; i < cells; ++i) {
      double a = node(i), b = node(i + 1);
      double piece = detail::integrate_ts(
          [&](double x, double xc) { return xc > 0.0 && b == m ? parts.phi_at_gap(xc) : phi(x); },
          a, b, 1e-10);
      (*table)[i + 1] = (*table)[i] + piece;
    }
    const double total = table->back();
    for (double& v : *table) v /= total;
    parts.cdf = [table, node, m](double x) {
      if (x <= 0.0) return 0.0;
      if (x >= m) return 1.0;
      int lo = 0, hi = cells;
      while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        (node(mid) <= x ? lo : hi) = mid;
      }
      double a = node(lo), b = node(hi);
      return (*table)[lo] + ((*table)[hi] - (*table)[lo]) * (x - a) / (b - a);
    };
    parts.quantile = [table, node](double u) {
      if (u <= 0.0) return 0.0;
      if (u >= 1.0) return node(cells);
      auto it = std::upper_bound(table->begin(), table->end(), u);
      int hi = static_cast<int>(it - table->begin());
      hi = std::clamp(hi, 1, cells);
      int lo = hi - 1;
      double f0 = (*table)[lo], f1 = (*table)[hi];
      double w = f1 > f0 ? (u - f0) / (f1 - f0) : 0.0;
      return node(lo) + w * (node(hi) - node(lo));
    };
  }
  parts_ = std::make_shared<const Parts>(std::move(parts));
}

double SectionKernel::phi_at_gap(double gap) const {
  const double m = parts_->max_section;
  if (gap < 0.0 || gap > m * (1.0 + 1e-12)) return 0.0;
  return parts_->phi_at_gap(std::min(gap, m));
}

double SectionKernel::quantile(double u) const {
  if (!(u > 0.0)) return 0.0;
  if (u >= 1.0) return parts_->max_section;
  return parts_->quantile(u);
}

double SectionKernel::cdf(double x) const { return parts_->cdf(x); }

SectionKernel sphere_plane_kernel() {
  const double c = 1.0 / (2.0 * std::sqrt(pi));
  DensityParts d;
  d.name = "sphere_plane";
  d.support_upper = pi;
  d.eval = [c](double s) { return s >= pi ? inf : c / std::sqrt(pi - s); };
  d.derivative = [c](double s) { return s >= pi ? inf : 0.5 * c / std::pow(pi - s, 1.5); };
  d.mass = 1.0;
  d.origin_exponent = 0.0;
  const double lpi = std::log(pi);
  d.image = MellinImage(
      [lpi](cplx s) { return 0.5 * std::exp((s - 0.5) * lpi + lgamma(s) - lgamma(s + 0.5)); },
      Strip(0.0, inf), ImageKind::closed_form);

  SectionKernel::Parts k;
  k.shape = ShapeId::sphere_plane;
  k.mode = SectionMode::plane;
  k.max_section = pi;
  k.phi = SupportedDensity(std::move(d));
  k.body = BodyConstants{4.0 * pi / 3.0, 4.0 * pi, 4.0 * pi, 2.0, pi};
  k.singularity_exponent = 0.5;
  k.phi_at_gap = [c](double g) { return c / std::sqrt(g); };
  k.cdf = [](double s) {
    if (s <= 0.0) return 0.0;
    if (s >= pi) return 1.0;
    return 1.0 - std::sqrt(1.0 - s / pi);
  };
  k.quantile = [](double u) {
    double v = 1.0 - u;
    return pi * (1.0 - v * v);
  };
  return SectionKernel(std::move(k));
}

SectionKernel sphere_line_kernel() {
  DensityParts d;
  d.name = "sphere_line";
  d.support_upper = 2.0;
  d.eval = [](double l) { return 0.5 * l; };
  d.derivative = [](double) { return 0.5; };
  d.mass = 1.0;
  d.origin_exponent = 0.0;
  const double l2 = std::log(2.0);
  d.image = MellinImage([l2](cplx s) { return std::exp(s * l2) / (s + 1.0); }, Strip(-1.0, inf),
                        ImageKind::closed_form);

  SectionKernel::Parts k;
  k.shape = ShapeId::sphere_line;
  k.mode = SectionMode::line;
  k.max_section = 2.0;
  k.phi = SupportedDensity(std::move(d));
  k.body = BodyConstants{4.0 * pi / 3.0, 4.0 * pi, 4.0 * pi, 2.0, pi};
  k.phi_at_gap = [](double g) { return 0.5 * (2.0 - g); };
  k.cdf = [](double l) {
    if (l <= 0.0) return 0.0;
    if (l >= 2.0) return 1.0;
    return 0.25 * l * l;
  };
  k.quantile = [](double u) { return 2.0 * std::sqrt(u); };
  return SectionKernel(std::move(k));
}

SectionKernel nearly_sphere_plane_kernel(double sigma_m, double p) {
  if (!(sigma_m > 0.0) || !std::isfinite(sigma_m))
    throw InvalidShapeParameters("sigma_m must be a positive finite number");
  if (!(p > 0.0 && p <= 0.5)) throw InvalidShapeParameters("p must lie in (0, 1/2]");
  const double c = (1.0 - p) * std::pow(sigma_m, p - 1.0);
  DensityParts d;
  d.name = "nearly_sphere_plane";
  d.support_upper = sigma_m;
  d.eval = [c, p, sigma_m](double s) { return s >= sigma_m ? inf : c * std::pow(sigma_m - s, -p); };
  d.derivative = [c, p, sigma_m](double s) {
    return s >= sigma_m ? inf : c * p * std::pow(sigma_m - s, -p - 1.0);
  };
  d.mass = 1.0;
  d.origin_exponent = 0.0;
  const double lsm = std::log(sigma_m);
  const double lq = std::log1p(-p);
  d.image = MellinImage(
      [lsm, lq, p](cplx s) { return std::exp(lq + (s - 1.0) * lsm + lbeta(s, cplx(1.0 - p))); },
      Strip(0.0, inf), ImageKind::closed_form);

  SectionKernel::Parts k;
  k.shape = ShapeId::nearly_sphere_plane;
  k.mode = SectionMode::plane;
  k.max_section = sigma_m;
  k.phi = SupportedDensity(std::move(d));
  // Unit volume; the mean identity sigma_m / (2 - p) = 2 pi V / M fixes M.
  BodyConstants body;
  body.volume = 1.0;
  body.mean_curvature = 2.0 * pi * (2.0 - p) / sigma_m;
  body.alpha = (2.0 - p) / sigma_m;
  k.body = body;
  k.singularity_exponent = p;
  k.phi_at_gap = [c, p](double g) { return c * std::pow(g, -p); };
  k.cdf = [sigma_m, p](double s) {
    if (s <= 0.0) return 0.0;
    if (s >= sigma_m) return 1.0;
    return 1.0 - std::pow(1.0 - s / sigma_m, 1.0 - p);
  };
  k.quantile = [sigma_m, p](double u) {
    return sigma_m * (1.0 - std::pow(1.0 - u, 1.0 / (1.0 - p)));
  };
  return SectionKernel(std::move(k));
}

SectionKernel custom_kernel(SectionMode mode, SupportedDensity phi,
                            std::optional<BodyConstants> body) {
  SectionKernel::Parts k;
  k.shape = ShapeId::custom;
  k.mode = mode;
  k.max_section = phi.support_upper();
  k.phi = std::move(phi);
  k.body = body;
  return SectionKernel(std::move(k));
}

SupportedDensity scale_kernel(const SectionKernel& k, double lambda, SectionMode mode) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (mode != k.mode()) throw InvalidArgument("scaling mode does not match the kernel");
  return k.phi().rescaled(mode == SectionMode::plane ? lambda * lambda : lambda);
}

}  // namespace stereo
