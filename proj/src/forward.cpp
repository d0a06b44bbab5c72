#include "stereo/forward.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stereo/detail/quadrature.hpp"
#include "stereo/errors.hpp"

namespace stereo {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> cuts_between(double lo, double hi, const std::vector<double>& knots) {
  std::vector<double> cuts{lo};
  for (double k : knots)
    if (k > lo && k < hi) cuts.push_back(k);
  cuts.push_back(hi);
  return cuts;
}

// ∫ over [lambda0, hi] of g(lambda, d) where d = lambda - lambda0 is exact near lambda0.
template <class G>
double integrate_from(double lambda0, double lo, double hi, const std::vector<double>& knots,
                      double tol, double abs_tol, G g) {
  if (!(hi > lo)) return 0.0;
  auto cuts = cuts_between(lo, hi, knots);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const bool at_root = a == lambda0;
    auto f = [&](double x, double xc) {
      double d = (at_root && xc < 0.0) ? -xc : x - lambda0;
      double v = g(x, d);
      return std::isfinite(v) ? v : 0.0;
    };
    total += detail::integrate_ts(f, a, b, tol, nullptr, abs_tol * (b - a) / (hi - lo));
  }
  return total;
}

}  // namespace

double forward_plane(const SizeDistribution& H, const SectionKernel& k, double sigma, double alpha,
                     double tol, double abs_tol) {
  if (k.mode() != SectionMode::plane) throw InvalidArgument("forward_plane needs a plane kernel");
  const double sm = k.max_section();
  if (sigma < 0.0 || sigma > sm) throw InvalidArgument("sigma must lie in [0, sigma_m]");
  const double lambda0 = std::sqrt(sigma / sm);
  const double lo = std::max(lambda0, H.support().lo);
  const double hi = H.support().hi;
  double v = integrate_from(lambda0, lo, hi, H.knots(), tol, abs_tol / alpha, [&](double l, double d) {
    double gap = sm * d * (l + lambda0) / (l * l);
    if (!(gap > 0.0)) return 0.0;
    return k.phi_at_gap(gap) * H(l) / l;
  });
  return alpha * v;
}

double forward_line(const SizeDistribution& H, const SectionKernel& k, double l, double beta,
                    double tol, double abs_tol) {
  if (k.mode() != SectionMode::line) throw InvalidArgument("forward_line needs a line kernel");
  const double lm = k.max_section();
  if (l < 0.0 || l > lm) throw InvalidArgument("l must lie in [0, l_m]");
  const double lambda0 = l / lm;
  const double lo = std::max(lambda0, H.support().lo);
  const double hi = H.support().hi;
  double v = integrate_from(lambda0, lo, hi, H.knots(), tol, abs_tol / beta, [&](double lam, double d) {
    double gap = lm * d / lam;
    if (gap < 0.0) return 0.0;
    return lam * k.phi_at_gap(gap) * H(lam);
  });
  return beta * v;
}

double forward(const SizeDistribution& H, const SectionKernel& k, double x, double scale,
               double tol, double abs_tol) {
  return k.mode() == SectionMode::plane ? forward_plane(H, k, x, scale, tol, abs_tol)
                                         : forward_line(H, k, x, scale, tol, abs_tol);
}

Residual residual(const SizeDistribution& H, const SupportedDensity& h, const SectionKernel& k,
                  SectionMode mode, double scale, int grid_size) {
  if (mode != k.mode()) throw InvalidArgument("residual mode does not match the kernel");
  if (grid_size < 2) throw InvalidArgument("residual grid needs at least 2 points");
  Residual r;
  const double c = std::min(h.support_upper(), k.max_section());
  for (int i = 0; i < grid_size; ++i) {
    double x = c * (0.01 + 0.98 * i / (grid_size - 1));
    r.grid.push_back(x);
    r.target.push_back(h(x));
    r.target_sup = std::max(r.target_sup, std::abs(r.target.back()));
  }
  const double abs_tol = 1e-8 * std::max(r.target_sup, 1e-300);
  for (int i = 0; i < grid_size; ++i) {
    double f = forward(H, k, r.grid[i], scale, 1e-8, abs_tol);
    r.forward.push_back(f);
    r.sup_norm = std::max(r.sup_norm, std::abs(f - r.target[i]));
  }
  for (int i = 1; i < grid_size; ++i)
    r.l1_norm += 0.5 * (std::abs(r.forward[i] - r.target[i]) + std::abs(r.forward[i - 1] - r.target[i - 1])) *
                 (r.grid[i] - r.grid[i - 1]);
  return r;
}

CorrectnessConditions correctness_conditions(const SupportedDensity& h, double R) {
  if (!(R > 0.0)) throw InvalidArgument("R must be positive");
  CorrectnessConditions out;
  const double reach = std::sqrt(h.support_upper() / pi);
  const double top = std::min(R, reach);

  // lambda ∫_0^sqrt(R^2 - lambda^2) h(pi (lambda^2 + w^2)) dw after r = sqrt(lambda^2 + w^2).
  auto I = [&](double lam) {
    double wmax = std::sqrt(std::max(0.0, (top - lam) * (top + lam)));
    if (!(wmax > 0.0)) return 0.0;
    return lam * detail::integrate_ts(
                     [&](double w, double) { return h(pi * (lam * lam + w * w)); }, 0.0, wmax, 1e-10);
  };
  if (R > reach) {
    out.limit_value = 0.0;
    out.limit_condition = true;
    out.notes.push_back("R exceeds the section reach; the limit integral vanishes identically");
  } else {
    std::vector<double> seq;
    double scale = 0.0;
    for (int k = 4; k <= 24; ++k) {
      seq.push_back(I(R * (1.0 - std::ldexp(1.0, -k))));
      scale = std::max(scale, std::abs(seq.back()));
    }
    std::size_t n = seq.size();
    double a = seq[n - 3], b = seq[n - 2], c = seq[n - 1];
    double den = c - 2.0 * b + a;
    out.limit_value = std::abs(den) > 1e-300 ? c - (c - b) * (c - b) / den : c;
    out.limit_condition = std::abs(out.limit_value) <= 1e-6 * std::max(1.0, scale);
  }

  auto J = [&](double eps) {
    return detail::integrate_ts([&](double r, double) { return h(pi * r * r); }, eps, top, 1e-10);
  };
  std::vector<double> inc;
  double prev = J(top * 1e-1);
  for (int j = 2; j <= 9; ++j) {
    double cur = J(top * std::pow(10.0, -j));
    inc.push_back(cur - prev);
    prev = cur;
  }
  out.integral_value = prev;
  double first = std::abs(inc[1]);
  double last = std::abs(inc.back());
  double scale = std::max(std::abs(prev), 1e-300);
  if (last <= 1e-14 * scale || first == 0.0) {
    out.integral_condition = std::isfinite(prev);
  } else {
    double rho = std::pow(last / first, 1.0 / static_cast<double>(inc.size() - 2));
    out.integral_condition = rho < 0.9 && std::isfinite(prev);
    if (rho >= 0.9 && rho <= 1.1)
      out.notes.push_back("boundary case: h(pi r^2) behaves like r^-1 near 0 (logarithmic divergence)");
    if (out.integral_condition) out.integral_value = prev + inc.back() * rho / (1.0 - rho);
  }
  return out;
}

MomentCheck moment_identities(const SectionKernel& k, double tol) {
  MomentCheck m;
  const double top = k.max_section();
  const auto& phi = k.phi();
  double mean = detail::integrate_ts(
      [&](double x, double xc) {
        double v = xc > 0.0 ? k.phi_at_gap(xc) : phi(x);
        return std::isfinite(v) ? x * v : 0.0;
      },
      0.0, top, 1e-14);
  const auto& body = k.body();
  if (k.mode() == SectionMode::plane) {
    m.plane_mean = mean;
    if (body && body->mean_curvature) {
      m.plane_target = 2.0 * pi * body->volume / *body->mean_curvature;
      double dev = std::abs(mean - *m.plane_target);
      m.deviations.push_back(dev);
      m.plane_mean_ok = dev <= tol;
    }
  } else {
    m.line_mean = mean;
    if (body && body->surface_area) {
      m.line_target = 4.0 * body->volume / *body->surface_area;
      double dev = std::abs(mean - *m.line_target);
      m.deviations.push_back(dev);
      m.line_mean_ok = dev <= tol;
    }
  }
  return m;
}

}  // namespace stereo
