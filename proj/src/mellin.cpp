#include "stereo/mellin.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "stereo/detail/mellin_quad.hpp"
#include "stereo/detail/quadrature.hpp"
#include "stereo/errors.hpp"

namespace stereo {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double leakage_units = 100.0;
constexpr int stencil = 16;
constexpr int oversample = 8;

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Largest step allowed at this abscissa: oscillation control plus an aliasing period long
// enough for the inverse to decay on both sides.
double contour_step(const Strip& strip, double mu, double max_abs_log_x) {
  double period = 2.0 * (8.0 * std::max(max_abs_log_x, std::log(1000.0)) + 1.0);
  const double need = 40.0;
  double lo_rate = std::isfinite(strip.alpha()) ? mu - strip.alpha() : 1.0;
  double hi_rate = std::isfinite(strip.beta()) ? strip.beta() - mu : inf;
  lo_rate = std::max(lo_rate, 0.05);
  period = std::max(period, need / lo_rate);
  if (std::isfinite(hi_rate)) period = std::max(period, need / std::max(hi_rate, 0.05));
  return 2.0 * pi / period;
}

std::size_t samples_for(double bandwidth, double dnu) {
  return static_cast<std::size_t>(std::ceil(bandwidth / dnu)) + 1;
}

// Trapezoid weights times window times step.
std::vector<cplx> weighted(const std::vector<cplx>& raw, double dnu, double bandwidth) {
  std::size_t n = std::min(raw.size(), samples_for(bandwidth, dnu));
  std::vector<cplx> a(n);
  for (std::size_t k = 0; k < n; ++k) {
    double w = (k == 0 ? 0.5 : 1.0) * dnu * spectral_window(dnu * static_cast<double>(k) / bandwidth);
    a[k] = w * raw[k];
  }
  while (!a.empty() && a.back() == 0.0) a.pop_back();
  return a;
}

// (1/pi) Re sum_k a_k exp(-i k dnu t)
double line_sum(const std::vector<cplx>& a, double dnu, double t) {
  const cplx rot = std::polar(1.0, -dnu * t);
  cplx z = 1.0;
  double acc = 0.0;
  constexpr std::size_t reseed = 512;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k % reseed == 0) z = std::polar(1.0, -dnu * t * static_cast<double>(k));
    acc += a[k].real() * z.real() - a[k].imag() * z.imag();
    z *= rot;
  }
  return acc / pi;
}

void check_contour(const MellinImage& F, double mu) {
  if (!F.strip().contains(mu))
    throw ContourOutsideStrip("contour abscissa " + std::to_string(mu) + " is outside the strip (" +
                              std::to_string(F.strip().alpha()) + ", " +
                              std::to_string(F.strip().beta()) + ")");
  if (!decay_check(F, mu).vanishes_at_infinity)
    throw NotIntegrableOnLine("image does not vanish along the contour line");
}

std::vector<cplx> sample(const MellinImage& F, double mu, double dnu, std::size_t n) {
  std::vector<cplx> out(n);
  F.sample_line(mu, dnu, out);
  for (const auto& v : out)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NotIntegrableOnLine("image is not finite on the contour line");
  return out;
}

}  // namespace

namespace detail {

cplx mellin_quadrature(const std::function<double(double)>& f, double c,
                       const std::vector<double>& breakpoints, double gamma, cplx s, double tol) {
  if (!(s.real() > gamma))
    throw StripViolation("Re(s) = " + std::to_string(s.real()) +
                         " is not above the origin exponent " + std::to_string(gamma));
  std::vector<double> cuts{0.0};
  for (double b : breakpoints)
    if (b > 0.0 && b < c) cuts.push_back(b);
  cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  const cplx sm1 = s - 1.0;
  cplx total = 0.0;
  double err_total = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double a = cuts[k];
    double b = cuts[k + 1];
    double err_re = 0.0, err_im = 0.0;
    auto part = [&](bool imag) {
      return [&, imag](double x, double) {
        if (!(x > 0.0)) return 0.0;
        cplx v = f(x) * std::exp(sm1 * std::log(x));
        return imag ? v.imag() : v.real();
      };
    };
    cplx piece(detail::integrate_ts(part(false), a, b, tol, &err_re),
               s.imag() == 0.0 ? 0.0 : detail::integrate_ts(part(true), a, b, tol, &err_im));
    total += piece;
    err_total += err_re + err_im;
    scale = std::max(scale, std::abs(piece));
  }
  if (err_total > std::max(1e-6, 1e3 * tol) * std::max(scale, 1e-300))
    throw QuadratureFailure("mellin quadrature did not reach the requested tolerance");
  return total;
}

double probe_origin_exponent(const std::function<double(double)>& f, double c,
                             std::vector<std::string>* warnings) {
  std::vector<double> v;
  for (int k = 2; k <= 10; ++k) v.push_back(f(c * std::pow(10.0, -k)));
  bool all_zero = std::all_of(v.begin(), v.end(), [](double y) { return y == 0.0; });
  if (all_zero) return -inf;
  bool any_bad = std::any_of(v.begin(), v.end(), [](double y) { return !(y > 0.0) || !std::isfinite(y); });
  const double fallback = 1.0 - 1e-6;
  if (any_bad) {
    if (warnings) warnings->push_back("origin exponent probe inconclusive; using 1 - 1e-6");
    return fallback;
  }
  std::vector<double> g;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) g.push_back(std::log10(v[k + 1] / v[k]));
  auto tail = std::span(g).last(3);
  auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  if (*hi - *lo > 0.05) {
    if (warnings) warnings->push_back("origin exponent probe inconclusive; using 1 - 1e-6");
    return fallback;
  }
  double gamma = std::round(tail.back() * 1e6) / 1e6;
  if (gamma >= 1.0 && warnings) warnings->push_back("density is not integrable at the origin");
  return gamma;
}

}  // namespace detail

cplx mellin_transform(const SupportedDensity& f, cplx s, double tol) {
  double gamma = f.declared_origin_exponent() ? *f.declared_origin_exponent()
                                              : estimate_strip(f).alpha();
  if (!(s.real() > gamma))
    throw StripViolation("Re(s) = " + std::to_string(s.real()) +
                         " is not above the origin exponent " + std::to_string(gamma));
  if (f.pieces()) return f.pieces()->mellin(s);
  return detail::mellin_quadrature([&f](double x) { return f(x); }, f.support_upper(),
                                   f.breakpoints(), gamma, s, tol);
}

Strip estimate_strip(const SupportedDensity& f, std::vector<std::string>* warnings) {
  if (f.declared_origin_exponent()) return Strip(*f.declared_origin_exponent(), inf);
  double gamma = detail::probe_origin_exponent([&f](double x) { return f(x); },
                                               f.support_upper(), warnings);
  return Strip(gamma, inf);
}

DecayDiagnostic decay_check(const MellinImage& F, double mu) {
  if (!F.strip().contains(mu)) throw ContourOutsideStrip("decay check abscissa outside the strip");
  std::vector<double> lx, ly;
  std::vector<double> mags;
  for (int k = 4; k <= 16; ++k) {
    double nu = std::ldexp(1.0, k);
    double m = 0.0;
    try {
      m = std::abs(F(cplx(mu, nu)));
    } catch (const QuadratureFailure&) {
      continue;
    }
    mags.push_back(m);
    if (k >= 8 && m > 0.0 && std::isfinite(m)) {
      lx.push_back(std::log(nu));
      ly.push_back(std::log(m));
    }
  }
  DecayDiagnostic d;
  if (mags.empty()) return d;
  if (std::all_of(mags.begin(), mags.end(), [](double m) { return m == 0.0; })) {
    d.vanishes_at_infinity = true;
    d.quadratic_decay = true;
    d.exponent = -inf;
    return d;
  }
  if (lx.size() < 3) return d;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(lx.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  d.exponent = sxy / sxx;
  // Envelope: running maximum from the right.
  std::vector<double> env(mags.size());
  double run = 0.0;
  for (std::size_t i = mags.size(); i-- > 0;) {
    run = std::max(run, mags[i]);
    env[i] = run;
  }
  d.vanishes_at_infinity = d.exponent < -0.05 && env.back() < 0.5 * env.front();
  d.quadratic_decay = d.vanishes_at_infinity && d.exponent <= -2.0 + 0.05;
  return d;
}

double spectral_window(double eta) {
  eta = std::abs(eta);
  if (eta >= 1.0) return 0.0;
  double e2 = eta * eta;
  return std::exp(-36.0 * e2 * e2 * e2);
}

InversionResult inverse_mellin_line_detailed(const MellinImage& F, double mu, double x,
                                             const InversionOptions& opts) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("inverse transform needs x > 0");
  check_contour(F, mu);
  const double t = std::log(x);
  const double dnu = contour_step(F.strip(), mu, std::abs(t));
  const double scale = std::exp(-mu * t);

  InversionResult r;
  double T = opts.initial_bandwidth;
  std::vector<cplx> raw = sample(F, mu, dnu, samples_for(T, dnu));
  double prev = scale * line_sum(weighted(raw, dnu, T), dnu, t);
  while (T < opts.max_bandwidth) {
    T *= 2.0;
    raw = sample(F, mu, dnu, samples_for(T, dnu));
    double cur = scale * line_sum(weighted(raw, dnu, T), dnu, t);
    double change = std::abs(cur - prev);
    prev = cur;
    if (change < opts.tol / 4.0) {
      r.converged = true;
      break;
    }
  }
  r.value = prev;
  r.bandwidth = T;

  // Imaginary residual from the lower half of the line.
  std::vector<cplx> a = weighted(raw, dnu, T);
  cplx two_sided = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double nu = dnu * static_cast<double>(k);
    double w = dnu * spectral_window(nu / T);
    cplx lower = k == 0 ? 0.0 : F(cplx(mu, -nu)) * w;
    two_sided += a[k] * std::polar(1.0, -nu * t) + lower * std::polar(1.0, nu * t);
  }
  r.imaginary_residual = std::abs(scale * two_sided.imag() / (2.0 * pi));
  if (r.imaginary_residual > opts.tol)
    throw NonRealInverse("inverse transform has an imaginary part of " +
                         std::to_string(r.imaginary_residual));
  return r;
}

double inverse_mellin_line(const MellinImage& F, double mu, double x, double tol) {
  InversionOptions opts;
  opts.tol = tol;
  return inverse_mellin_line_detailed(F, mu, x, opts).value;
}

ContourInverse::ContourInverse(const MellinImage& F, double mu, double x_lo, double x_hi,
                               const InversionOptions& opts)
    : mu_(mu), x_lo_(x_lo), x_hi_(x_hi) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo)) throw InvalidArgument("inverse table needs 0 < x_lo < x_hi");
  check_contour(F, mu);
  const double t_lo = std::log(x_lo);
  const double t_hi = std::log(x_hi);
  dnu_ = contour_step(F.strip(), mu, std::max(std::abs(t_lo), std::abs(t_hi)));

  std::vector<double> probes;
  for (int j = 1; j <= 24; ++j) probes.push_back(x_lo + (x_hi - x_lo) * (0.02 + 0.96 * (j - 1) / 23.0));
  for (int j = 0; j < 8; ++j) {
    double a = std::log(x_lo), b = std::log(0.02 * x_hi);
    if (b > a) probes.push_back(std::exp(a + (b - a) * j / 7.0));
  }

  auto probe_values = [&](const std::vector<cplx>& a) {
    std::vector<double> out;
    for (double p : probes) out.push_back(std::exp(-mu * std::log(p)) * line_sum(a, dnu_, std::log(p)));
    return out;
  };

  double T = opts.initial_bandwidth;
  std::vector<cplx> raw = sample(F, mu, dnu_, samples_for(T, dnu_));
  std::vector<double> prev = probe_values(weighted(raw, dnu_, T));
  while (T < opts.max_bandwidth) {
    T *= 2.0;
    raw = sample(F, mu, dnu_, samples_for(T, dnu_));
    std::vector<double> cur = probe_values(weighted(raw, dnu_, T));
    double change = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) change = std::max(change, std::abs(cur[i] - prev[i]));
    prev = std::move(cur);
    last_change_ = change;
    if (change < opts.tol / 4.0) {
      converged_ = true;
      break;
    }
  }
  bandwidth_ = T;
  samples_ = weighted(raw, dnu_, T);

  std::size_t M = 1024;
  while (M < static_cast<std::size_t>(oversample) * samples_.size()) M *= 2;
  fftw_complex* buf = fftw_alloc_complex(M);
  if (!buf) throw Error("out of memory for the inverse transform table");
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(M), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < M; ++k) {
    cplx v = k < samples_.size() ? samples_[k] : 0.0;
    buf[k][0] = v.real();
    buf[k][1] = v.imag();
  }
  fftw_execute(plan);
  dt_ = 2.0 * pi / (static_cast<double>(M) * dnu_);
  const long pad = stencil + 4;
  const long j_lo = static_cast<long>(std::floor(t_lo / dt_)) - pad;
  const long j_hi = static_cast<long>(std::ceil(t_hi / dt_)) + pad;
  t0_ = static_cast<double>(j_lo) * dt_;
  table_.resize(static_cast<std::size_t>(j_hi - j_lo + 1));
  const long Ml = static_cast<long>(M);
  for (long j = j_lo; j <= j_hi; ++j) {
    long idx = ((j % Ml) + Ml) % Ml;
    table_[static_cast<std::size_t>(j - j_lo)] = buf[idx][0] / pi;
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
}

double ContourInverse::leakage_width() const { return leakage_units / bandwidth_; }

double ContourInverse::direct(double x) const {
  double t = std::log(x);
  return std::exp(-mu_ * t) * line_sum(samples_, dnu_, t);
}

double ContourInverse::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  const double t = std::log(x);
  const double u = (t - t0_) / dt_;
  const long half = stencil / 2;
  const long base = static_cast<long>(std::floor(u));
  if (base - half + 1 < 0 || base + half >= static_cast<long>(table_.size())) return direct(x);
  const long first = base - half + 1;
  const double v = u - static_cast<double>(first);
  // Barycentric weights for equispaced nodes: (-1)^j C(n-1, j).
  static const std::array<double, stencil> weights = [] {
    std::array<double, stencil> w{};
    double c = 1.0;
    for (int j = 0; j < stencil; ++j) {
      w[j] = (j % 2 == 0 ? 1.0 : -1.0) * c;
      c = c * (stencil - 1 - j) / (j + 1);
    }
    return w;
  }();
  double num = 0.0, den = 0.0;
  for (int j = 0; j < stencil; ++j) {
    double d = v - j;
    if (d == 0.0) return std::exp(-mu_ * t) * table_[static_cast<std::size_t>(first + j)];
    double q = weights[j] / d;
    num += q * table_[static_cast<std::size_t>(first + j)];
    den += q;
  }
  return std::exp(-mu_ * t) * num / den;
}

}  // namespace stereo
