#include "stereo/unfold.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "stereo/detail/quadrature.hpp"
#include "stereo/errors.hpp"
#include "stereo/forward.hpp"

namespace stereo {

namespace {

double local_exponent(const std::function<double(double)>& f, double x) {
  double a = f(x), b = f(2.0 * x);
  if (!(a > 0.0) || !(b > 0.0)) return 0.0;
  return std::log(b / a) / std::log(2.0);
}

UnfoldResult solve(const SupportedDensity& h, const SectionKernel& k, SectionMode mode,
                   const SolveOptions& opts) {
  if (k.mode() != mode)
    throw InvalidArgument(std::string("kernel is not a ") + to_string(mode) + " kernel");
  const double c = h.support_upper();
  const double m = k.max_section();
  if (c > m * (1.0 + 1e-12))
    throw SupportExceedsKernel("section support " + std::to_string(c) +
                               " exceeds the maximal section " + std::to_string(m));

  SolveReport report;
  const double gamma_h = estimate_strip(h, &report.warnings).alpha();
  const double gamma_phi = estimate_strip(k.phi(), &report.warnings).alpha();
  const double gamma = std::max({gamma_h, gamma_phi, -1e300});
  const double mu = opts.mu.value_or(gamma + 1.0);
  auto& pre = report.preconditions;
  pre.mu_used = mu;
  pre.strip_ok = mu > gamma && h.image().strip().contains(mu) && k.phi_star().strip().contains(mu);
  if (!pre.strip_ok)
    throw PreconditionFailed(Condition::strip, "mu = " + std::to_string(mu) +
                                                   " must exceed gamma = " + std::to_string(gamma));

  const double arg_scale = mode == SectionMode::plane ? 2.0 : 1.0;
  const double abscissa = arg_scale * mu;
  MellinImage Q = MellinImage::quotient(h.image(), k.phi_star(), arg_scale);

  DecayDiagnostic dh = decay_check(h.image(), mu);
  report.h_star_decay_exponent = dh.exponent;
  pre.h_star_integrable = dh.absolutely_integrable();
  if (!dh.vanishes_at_infinity)
    throw PreconditionFailed(Condition::h_star_integrable,
                             "h* does not vanish along the contour line");
  DecayDiagnostic dq = decay_check(Q, abscissa);
  report.quotient_decay_exponent = dq.exponent;
  pre.quotient_integrable = dq.absolutely_integrable();
  if (!dq.vanishes_at_infinity)
    throw NonIntegrableQuotient(
        "h*/phi* does not vanish at infinity on the contour (degenerate or point-mass input)");
  if (!pre.quotient_integrable)
    report.warnings.push_back(
        "h*/phi* is only conditionally integrable on the contour; inverted with a smooth spectral window");

  const double U = mode == SectionMode::plane ? std::sqrt(c / m) : c / m;
  const double x_lo = opts.lambda_floor * U;
  const double x_hi = U * std::exp(0.05);
  auto inv = std::make_shared<const ContourInverse>(Q, abscissa, x_lo, x_hi, opts.inversion);
  report.bandwidth = inv->bandwidth();
  report.bandwidth_converged = inv->converged();
  if (!inv->converged())
    report.warnings.push_back("contour bandwidth reached its cap before converging (last change " +
                              std::to_string(inv->last_change()) + ")");

  std::function<double(double)> raw;
  if (mode == SectionMode::plane)
    raw = [inv](double l) { return (*inv)(l); };
  else
    raw = [inv](double l) { return (*inv)(l) / (l * l); };

  // Effective support, scanned on the inverse itself so the 1/lambda^2 factor does not lift
  // inversion noise near the origin.
  const double w = inv->leakage_width();
  const int n_scan = 4000;
  std::vector<double> grid(n_scan), vals(n_scan);
  double vmax = 0.0;
  for (int i = 0; i < n_scan; ++i) {
    grid[i] = x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (n_scan - 1));
    vals[i] = (*inv)(grid[i]);
    vmax = std::max(vmax, std::abs(vals[i]));
  }
  const double thr = std::max(1e-10 * vmax, opts.inversion.tol);
  int i_lo = -1, i_hi = -1;
  for (int i = 0; i < n_scan; ++i)
    if (std::abs(vals[i]) > thr) {
      if (i_lo < 0) i_lo = i;
      i_hi = i;
    }
  Interval support{0.0, U};
  if (i_lo < 0) {
    report.warnings.push_back("recovered H vanishes on the whole scan range");
    support = {0.0, 0.0};
  } else {
    support.lo = i_lo == 0 ? 0.0 : grid[i_lo] * std::exp(-w);
    support.hi = std::min(x_hi, grid[i_hi] * std::exp(w));
  }
  report.support = support;

  // Scale constant.
  double scale = 1.0;
  bool normalizable = false;
  double e_low = support.lo == 0.0 ? local_exponent(raw, 2.0 * x_lo) : 0.0;
  if (support.lo == 0.0 && e_low <= -0.95) {
    report.warnings.push_back("H is not integrable near lambda = 0 (local exponent " +
                              std::to_string(e_low) + "); reported unnormalized");
  } else if (support.hi > support.lo) {
    double mass = 0.0;
    if (mode == SectionMode::plane && Q.strip().contains(1.0)) {
      mass = Q(cplx(1.0, 0.0)).real();
    } else {
      std::vector<double> knots;
      for (int j = 1; j < 64; ++j) knots.push_back(support.lo + (support.hi - support.lo) * j / 64.0);
      double a = std::max(support.lo, x_lo);
      mass = detail::integrate_pieces_gk(raw, a, support.hi, knots, 1e-9);
      if (support.lo == 0.0) mass += raw(x_lo) * x_lo / (e_low + 1.0);
    }
    normalizable = std::isfinite(mass) && mass > 0.0;
    if (normalizable)
      scale = mass;
    else
      report.warnings.push_back("integral of H is not positive; reported unnormalized");
  }
  if (const auto* e = std::get_if<Explicit>(&opts.scale)) {
    if (!(e->value > 0.0)) throw InvalidArgument("explicit scale constant must be positive");
    scale = e->value;
  }
  report.scale_constant = scale;
  report.normalizable = normalizable;

  std::vector<double> knots{support.lo, support.hi, U};
  // Splines carry no jumps or kinks into H.
  if (h.representation() != Representation::piecewise_cubic)
    for (double b : h.breakpoints()) knots.push_back(mode == SectionMode::plane ? std::sqrt(b / m) : b / m);
  const Provenance prov = mode == SectionMode::plane ? Provenance::mellin_plane : Provenance::mellin_line;
  auto eval = [raw, scale](double l) { return raw(l) / scale; };
  SizeDistribution H(eval, support, prov, std::nullopt, knots);
  if (normalizable) {
    double a = std::max(support.lo, x_lo);
    std::vector<double> cuts;
    for (int j = 1; j < 64; ++j) cuts.push_back(a + (support.hi - a) * j / 64.0);
    double total = detail::integrate_pieces_gk([&](double l) { return H(l); }, a, support.hi, cuts, 1e-10);
    if (support.lo == 0.0) total += H(x_lo) * x_lo / (e_low + 1.0);
    H = SizeDistribution(eval, support, prov, total, knots);
  }

  double hmax = 0.0, hmin = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double l = support.lo + (support.hi - support.lo) * (i + 0.5) / 1000.0;
    double v = H(l);
    hmax = std::max(hmax, v);
    hmin = std::min(hmin, v);
  }
  if (hmin < -1e-6 * hmax)
    report.warnings.push_back("recovered H has negative lobes (min " + std::to_string(hmin) + ")");

  if (opts.compute_residual && support.hi > support.lo) {
    Residual r = residual(H, h, k, mode, scale, opts.residual_grid);
    report.residual_sup_norm = r.sup_norm;
    report.residual_l1_norm = r.l1_norm;
    if (r.sup_norm > 1e-4 * r.target_sup)
      report.warnings.push_back("forward residual " + std::to_string(r.sup_norm) +
                                " exceeds 1e-4 of sup h");
  }
  return {H, report};
}

}  // namespace

UnfoldResult solve_plane(const SupportedDensity& h, const SectionKernel& k, const SolveOptions& opts) {
  return solve(h, k, SectionMode::plane, opts);
}

UnfoldResult solve_line(const SupportedDensity& h, const SectionKernel& k, const SolveOptions& opts) {
  return solve(h, k, SectionMode::line, opts);
}

SupportedDensity to_sigma_distribution(const SizeDistribution& H, double sigma_m) {
  if (!(sigma_m > 0.0)) throw InvalidArgument("sigma_m must be positive");
  const double top = std::max(sigma_m * H.support().hi * H.support().hi, 1e-300);
  DensityParts p;
  p.name = "sigma_distribution";
  p.support_upper = top;
  p.eval = [H, sigma_m](double s) {
    if (!(s > 0.0)) return 0.0;
    return H(std::sqrt(s / sigma_m)) / std::sqrt(4.0 * sigma_m * s);
  };
  p.mass = H.normalization() ? *H.normalization() : inf;
  for (double k : H.knots())
    if (k > 0.0) p.breakpoints.push_back(sigma_m * k * k);
  return SupportedDensity(std::move(p));
}

SupportedDensity to_length_distribution(const SizeDistribution& H, double l_m) {
  if (!(l_m > 0.0)) throw InvalidArgument("l_m must be positive");
  const double top = std::max(l_m * H.support().hi, 1e-300);
  DensityParts p;
  p.name = "length_distribution";
  p.support_upper = top;
  p.eval = [H, l_m](double l) { return H(l / l_m) / l_m; };
  p.mass = H.normalization() ? *H.normalization() : inf;
  for (double k : H.knots())
    if (k > 0.0) p.breakpoints.push_back(l_m * k);
  return SupportedDensity(std::move(p));
}

std::function<cplx(double)> model_solution_plane(const SectionKernel& k, cplx s, double alpha) {
  if (!k.phi_star().strip().contains(s.real()))
    throw StripViolation("Re(s) is outside the strip of phi*");
  cplx ps = k.phi_star()(s);
  if (ps == 0.0 || !std::isfinite(std::abs(ps))) throw ZeroMellinImage("phi*(s) vanishes");
  return [s, ps, alpha](double l) { return 2.0 * std::exp(-2.0 * s * std::log(l)) / (alpha * ps); };
}

std::function<cplx(double)> model_solution_line(const SectionKernel& k, cplx s, double beta) {
  if (!k.phi_star().strip().contains(s.real()))
    throw StripViolation("Re(s) is outside the strip of phi*");
  cplx ps = k.phi_star()(s);
  if (ps == 0.0 || !std::isfinite(std::abs(ps))) throw ZeroMellinImage("phi*(s) vanishes");
  return [s, ps, beta](double l) { return std::exp((-s - 2.0) * std::log(l)) / (beta * ps); };
}

}  // namespace stereo
