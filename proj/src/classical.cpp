#include "stereo/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "stereo/detail/quadrature.hpp"
#include "stereo/errors.hpp"

namespace stereo {

namespace {

constexpr double pi = std::numbers::pi;

// Neville tableau on a difference quotient D(h) whose error expands in powers h^(order * j).
double extrapolate(const std::function<double(double)>& D, double h0, double ratio, int order) {
  constexpr int n = 10;
  std::array<std::array<double, n>, n> a{};
  double best = D(h0);
  double best_err = inf;
  double h = h0;
  a[0][0] = best;
  for (int i = 1; i < n; ++i) {
    h /= ratio;
    a[i][0] = D(h);
    double fac = 1.0;
    for (int j = 1; j <= i; ++j) {
      fac *= std::pow(ratio, order);
      a[i][j] = (a[i][j - 1] * fac - a[i - 1][j - 1]) / (fac - 1.0);
      double err = std::max(std::abs(a[i][j] - a[i][j - 1]), std::abs(a[i][j] - a[i - 1][j - 1]));
      if (err <= best_err) {
        best_err = err;
        best = a[i][j];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * best_err) break;
  }
  return best;
}

double interior_jump_scale(const SupportedDensity& h) {
  double m = 0.0;
  const double c = h.support_upper();
  for (int i = 1; i < 200; ++i) m = std::max(m, std::abs(h(c * i / 200.0)));
  return m;
}

// Rejects inputs that jump inside (0, upper).
void require_continuous(const SupportedDensity& h, double upper, const char* who) {
  if (h.representation() == Representation::piecewise_constant)
    throw NonSmoothInput(std::string(who) + " needs a continuously differentiable h");
  const double c = h.support_upper();
  const double scale = std::max(interior_jump_scale(h), 1e-300);
  const double eps = 1e-9 * c;
  auto jump_at = [&](double b) { return std::abs(h(b + eps) - h(b - eps)); };
  if (c < upper * (1.0 - 1e-12) && std::abs(h(c * (1.0 - 1e-12))) > 1e-4 * scale)
    throw NonSmoothInput(std::string(who) + ": h jumps at its support end " + std::to_string(c) +
                         ", inside the section range");
  for (double b : h.breakpoints())
    if (jump_at(b) > 1e-4 * scale)
      throw NonSmoothInput(std::string(who) + ": h jumps at " + std::to_string(b));
}

std::function<double(double)> derivative_of(const SupportedDensity& h) {
  if (h.has_derivative()) return [h](double x) { return h.derivative(x); };
  const double c = h.support_upper();
  return [h, c](double x) {
    return numeric_derivative([&h](double y) { return h(y); }, x, 0.0, c);
  };
}

double local_exponent(const std::function<double(double)>& f, double x) {
  double a = std::abs(f(x)), b = std::abs(f(2.0 * x));
  if (!(a > 0.0) || !(b > 0.0)) return 0.0;
  return std::log(b / a) / std::log(2.0);
}

struct ScaleOutcome {
  double scale = 1.0;
  std::optional<double> normalization;
};

// Chooses the scale constant from the raw (unit-constant) solution.
ScaleOutcome choose_scale(const std::function<double(double)>& raw, Interval support,
                          const std::vector<double>& knots, double point_mass, ScaleMode mode,
                          std::vector<std::string>& warnings) {
  ScaleOutcome out;
  double mass = point_mass;
  bool integrable = true;
  double lo = support.lo;
  const double width = support.hi - support.lo;
  double tail = 0.0;
  if (lo == 0.0) {
    lo = 1e-4 * support.hi;
    double peak = 0.0;
    for (int j = 1; j <= 64; ++j) {
      double x = support.hi * j / 64.0;
      peak = std::max(peak, std::abs(raw(x)) * x);
    }
    // Rounding noise near the origin is not a divergence.
    const bool negligible = std::abs(raw(lo)) * lo <= 1e-9 * peak;
    double e = negligible ? 0.0 : local_exponent(raw, lo);
    if (negligible) {
      tail = 0.0;
    } else if (e <= -0.95) {
      integrable = false;
      warnings.push_back("H is not integrable near lambda = 0 (local exponent " +
                         std::to_string(e) + "); reported unnormalized");
    } else {
      tail = raw(lo) * lo / (e + 1.0);
    }
  }
  if (integrable && width > 0.0) {
    std::vector<double> cuts(knots);
    for (int j = 1; j < 32; ++j) cuts.push_back(lo + (support.hi - lo) * j / 32.0);
    mass += detail::integrate_pieces_gk(raw, lo, support.hi, cuts, 1e-9) + tail;
  }
  if (const auto* e = std::get_if<Explicit>(&mode)) {
    if (!(e->value > 0.0)) throw InvalidArgument("explicit scale constant must be positive");
    out.scale = e->value;
  } else if (integrable && std::isfinite(mass) && std::abs(mass) > 1e-12) {
    out.scale = mass;
  } else if (integrable) {
    warnings.push_back("integral of H vanishes; reported with unit scale constant");
  }
  if (integrable && std::isfinite(mass)) out.normalization = mass / out.scale;
  return out;
}

// Abel integral by quadrature after sigma = tau + w^(1/p).
std::function<double(double)> quadrature_abel(std::function<double(double)> dh, std::vector<double> bps,
                                              double sm, double c, double U, double p, double pref) {
  return [=](double l) {
    if (!(l > 0.0) || l >= U) return 0.0;
    const double tau = sm * l * l;
    const double wmax = std::pow(c - tau, p);
    std::vector<double> cuts;
    for (double b : bps)
      if (b > tau) cuts.push_back(std::pow(b - tau, p));
    // sigma = tau + w^(1/p) regularizes (sigma - tau)^(p-1).
    auto f = [&](double w) { return dh(tau + std::pow(w, 1.0 / p)) / p; };
    double I = detail::integrate_pieces_gk(f, 0.0, wmax, cuts, 1e-11);
    return pref * std::pow(tau, 1.0 - p) * I;
  };
}

// Shared Abel inversion for kernel exponent p on a plane kernel with maximal section sm.
ClassicalSolution abel_core(const SupportedDensity& h, double sm, double p, ScaleMode mode,
                            const char* who) {
  require_continuous(h, sm, who);
  ClassicalSolution out{SizeDistribution::zero({0.0, 0.0}, Provenance::abel_plane), 1.0, {}, {}};
  const double c = std::min(h.support_upper(), sm);
  const double U = std::sqrt(c / sm);
  auto dh = derivative_of(h);
  std::vector<double> bps;
  for (double b : h.breakpoints())
    if (b > 0.0 && b < c) bps.push_back(b);

  // Unit plane constant: c_K = (1 - p) / (2 sm).
  const double pref = -std::sin(p * pi) * 2.0 * sm / (pi * (1.0 - p));
  std::function<double(double)> raw;
  if (const auto* pp = h.pieces()) {
    // h' is piecewise quadratic: integrate u^(p-1) (d0 + d1 u + d2 u^2) exactly, u = sigma - tau.
    raw = [=, pieces = *pp](double l) {
      if (!(l > 0.0) || l >= U) return 0.0;
      const double tau = sm * l * l;
      const auto& x = pieces.nodes();
      const auto& cf = pieces.coeffs();
      double I = 0.0;
      for (std::size_t k = 0; k < cf.size(); ++k) {
        const double a = std::max(x[k], tau), b = std::min(x[k + 1], c);
        if (!(b > a)) continue;
        const double delta = tau - x[k];
        const auto& q = cf[k];
        const double d[3] = {q[1] + 2.0 * q[2] * delta + 3.0 * q[3] * delta * delta,
                             2.0 * q[2] + 6.0 * q[3] * delta, 3.0 * q[3]};
        const double ua = a - tau, ub = b - tau;
        for (int m = 0; m < 3; ++m)
          I += d[m] * (std::pow(ub, p + m) - std::pow(ua, p + m)) / (p + m);
      }
      return pref * std::pow(tau, 1.0 - p) * I;
    };
  } else {
    raw = quadrature_abel(dh, bps, sm, c, U, p, pref);
  }

  std::vector<double> knots{0.0, U};
  if (h.representation() != Representation::piecewise_cubic)
    for (double b : bps) knots.push_back(std::sqrt(b / sm));
  Interval support{0.0, U};

  double probe = 0.0;
  for (int i = 1; i < 64; ++i) probe = std::max(probe, std::abs(raw(U * i / 64.0)));
  if (probe == 0.0) {
    out.warnings.push_back(
        "classical formula degenerates: h' vanishes on the interior of the support, so the "
        "jump of h at the support end is invisible to it and H is identically zero");
    out.H = SizeDistribution::zero(support, Provenance::abel_plane).with_knots(knots);
    out.scale_constant = std::holds_alternative<Explicit>(mode) ? std::get<Explicit>(mode).value : 1.0;
    return out;
  }
  auto s = choose_scale(raw, support, knots, 0.0, mode, out.warnings);
  out.scale_constant = s.scale;
  const double scale = s.scale;
  out.H = SizeDistribution([raw, scale](double l) { return raw(l) / scale; }, support,
                           Provenance::abel_plane, s.normalization, knots);
  return out;
}

}  // namespace

double numeric_derivative(const std::function<double(double)>& f, double x, double lo, double hi) {
  const double width = hi - lo;
  const double room = std::min(x - lo, hi - x);
  if (room > 1e-6 * width) {
    double h0 = std::min(0.05 * width, 0.9 * room);
    return extrapolate([&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }, h0, 1.4, 2);
  }
  const double dir = (x - lo) < (hi - x) ? 1.0 : -1.0;
  double h0 = 0.05 * width;
  // Second-order one-sided difference.
  return extrapolate(
      [&](double h) {
        double s = dir * h;
        return (-3.0 * f(x) + 4.0 * f(x + s) - f(x + 2.0 * s)) / (2.0 * s);
      },
      h0, 2.0, 1);
}

ClassicalSolution abel_solve_plane(const SupportedDensity& h, bool smoothness_ok, ScaleMode scale) {
  if (!h.has_derivative() && !smoothness_ok)
    throw NonSmoothInput("abel_solve_plane: smoothness not asserted and no derivative available");
  if (h.support_upper() > pi * (1.0 + 1e-12))
    throw SupportExceedsKernel("section support exceeds the maximal sphere section pi");
  return abel_core(h, pi, 0.5, scale, "abel_solve_plane");
}

ClassicalSolution generalized_abel_solve(const SupportedDensity& h, const SectionKernel& k,
                                         ScaleMode scale) {
  if (k.shape() != ShapeId::nearly_sphere_plane && k.shape() != ShapeId::sphere_plane)
    throw InvalidArgument("generalized Abel inversion needs a (nearly) spherical plane kernel");
  const double p = k.singularity_exponent();
  if (!(p > 0.0 && p <= 0.5)) throw InvalidShapeParameters("kernel exponent must lie in (0, 1/2]");
  if (h.support_upper() > k.max_section() * (1.0 + 1e-12))
    throw SupportExceedsKernel("section support exceeds the maximal section");
  return abel_core(h, k.max_section(), p, scale, "generalized_abel_solve");
}

ClassicalSolution derivative_solve_line(const SupportedDensity& h, ScaleMode scale) {
  constexpr double lm = 2.0;
  if (h.support_upper() > lm * (1.0 + 1e-12))
    throw SupportExceedsKernel("chord support exceeds the maximal sphere chord 2");
  ClassicalSolution out{SizeDistribution::zero({0.0, 0.0}, Provenance::derivative_line), 1.0, {}, {}};
  const double c = h.support_upper();
  const double U = c / lm;
  Interval support{0.0, U};

  if (h.representation() == Representation::piecewise_constant && h.pieces()) {
    // Finite differences of h(2 lambda)/lambda between bin midpoints.
    const auto& nodes = h.pieces()->nodes();
    std::vector<double> lam, q;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      double mid = 0.5 * (nodes[i] + nodes[i + 1]);
      lam.push_back(mid / lm);
      q.push_back(h(mid) / (mid / lm));
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i + 1 < lam.size(); ++i) {
      xs.push_back(0.5 * (lam[i] + lam[i + 1]));
      ys.push_back(-(q[i + 1] - q[i]) / (lam[i + 1] - lam[i]));
    }
    // Last bin drops to zero at the support end.
    xs.push_back(U);
    ys.push_back(q.back() / (U - lam.back()));
    out.warnings.push_back(
        "histogram input: derivative taken by finite differences at bin midpoints; every bin edge "
        "is a jump and acts as a smeared point mass");
    if (xs.size() < 2) throw NonSmoothInput("histogram too coarse for finite differences");
    auto tab = tabulated_distribution(xs, ys, Provenance::derivative_line);
    double mass = tab.normalization().value_or(0.0);
    double sc = 1.0;
    if (const auto* e = std::get_if<Explicit>(&scale))
      sc = e->value;
    else if (mass > 0.0)
      sc = mass;
    out.scale_constant = sc;
    out.H = tab.scaled(1.0 / sc);
    return out;
  }

  auto dh = derivative_of(h);
  auto raw = [h, dh, U](double l) {
    if (!(l > 0.0) || l > U) return 0.0;
    double x = 2.0 * l;
    return -(2.0 * dh(x) / l - h(x) / (l * l));
  };

  // Jumps of h produce point masses -(J / lambda_b) / beta at lambda_b = b / 2.
  std::vector<double> jumps(h.breakpoints());
  jumps.push_back(c);
  const double eps = 1e-10 * c;
  std::vector<PointMass> spikes;
  double spike_total = 0.0;
  for (double b : jumps) {
    double J = h(b + eps) - h(b - eps);
    if (b >= c) J = -h(c * (1.0 - 1e-12));
    if (std::abs(J) > 1e-8) {
      double lb = b / lm;
      spikes.push_back({lb, -J / lb});
      spike_total += -J / lb;
      out.warnings.push_back("distributional spike at lambda = " + std::to_string(lb) +
                             " (jump of h at l = " + std::to_string(b) + ")");
    }
  }
  std::vector<double> knots{0.0, U};
  for (double b : h.breakpoints()) knots.push_back(b / lm);
  auto s = choose_scale(raw, support, knots, spike_total, scale, out.warnings);
  out.scale_constant = s.scale;
  for (auto& sp : spikes) sp.mass /= s.scale;
  out.point_masses = spikes;
  const double sc = s.scale;
  out.H = SizeDistribution([raw, sc](double l) { return raw(l) / sc; }, support,
                           Provenance::derivative_line, s.normalization, knots);
  return out;
}

ClassicalSolution wicksell_solve(const SupportedDensity& g, double R, ScaleMode scale) {
  if (!(R > 0.0)) throw InvalidArgument("R must be positive");
  const double top = std::min(R, g.support_upper());
  require_continuous(g, R, "wicksell_solve");
  ClassicalSolution out{SizeDistribution::zero({0.0, 0.0}, Provenance::abel_plane), 1.0, {}, {}};
  Interval support{0.0, top};
  if (!(g(1e-6 * top) > 0.0) || !(g(1e-3 * top) > 0.0))
    out.warnings.push_back("g(r) is not positive on a right neighbourhood of 0");

  auto dg = derivative_of(g);
  std::vector<double> bps;
  for (double b : g.breakpoints())
    if (b > 0.0 && b < top) bps.push_back(b);
  auto raw = [=](double l) {
    if (!(l > 0.0) || l >= top) return 0.0;
    const double wmax = std::sqrt((top - l) * (top + l));
    std::vector<double> cuts;
    for (double b : bps)
      if (b > l) cuts.push_back(std::sqrt((b - l) * (b + l)));
    // r = sqrt(lambda^2 + w^2): dr / sqrt(r^2 - lambda^2) = dw / r
    auto f = [&](double w) {
      double r = std::sqrt(l * l + w * w);
      return (dg(r) / r - g(r) / (r * r)) / r;
    };
    return -(2.0 * l / pi) * detail::integrate_pieces_gk(f, 0.0, wmax, cuts, 1e-9);
  };
  std::vector<double> knots{0.0, top};
  if (g.representation() != Representation::piecewise_cubic)
    for (double b : bps) knots.push_back(b);
  double probe = 0.0;
  for (int i = 1; i < 64; ++i) probe = std::max(probe, std::abs(raw(top * i / 64.0)));
  if (probe == 0.0) {
    out.H = SizeDistribution::zero(support, Provenance::abel_plane).with_knots(knots);
    out.warnings.push_back("g vanishes identically; H is zero");
    return out;
  }
  auto s = choose_scale(raw, support, knots, 0.0, scale, out.warnings);
  out.scale_constant = s.scale;
  const double sc = s.scale;
  out.H = SizeDistribution([raw, sc](double l) { return raw(l) / sc; }, support,
                           Provenance::abel_plane, s.normalization, knots);
  return out;
}

SupportedDensity radius_density_from_area(const SupportedDensity& h) {
  DensityParts p;
  p.name = "radius_density";
  p.support_upper = std::sqrt(h.support_upper() / pi);
  p.eval = [h](double r) { return 2.0 * pi * r * h(pi * r * r); };
  if (h.has_derivative())
    p.derivative = [h](double r) {
      double s = pi * r * r;
      return 2.0 * pi * h(s) + 4.0 * pi * pi * r * r * h.derivative(s);
    };
  // Smoothness class of h carries over; the image is computed numerically.
  p.representation = h.representation();
  p.mass = h.mass();
  p.origin_exponent = -1.0;
  for (double b : h.breakpoints()) p.breakpoints.push_back(std::sqrt(b / pi));
  return SupportedDensity(std::move(p));
}

}  // namespace stereo
