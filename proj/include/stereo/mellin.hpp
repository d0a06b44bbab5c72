#pragma once

#include <string>
#include <vector>

#include "stereo/density.hpp"
#include "stereo/mellin_image.hpp"

namespace stereo {

// ∫_0^c f(x) x^(s-1) dx. Piecewise densities use their exact image.
cplx mellin_transform(const SupportedDensity& f, cplx s, double tol = 1e-8);

// (gamma_f, +inf); probes the origin behaviour when no exponent is declared.
Strip estimate_strip(const SupportedDensity& f, std::vector<std::string>* warnings = nullptr);

struct DecayDiagnostic {
  bool vanishes_at_infinity = false;
  bool quadratic_decay = false;
  // Fitted exponent of |F(mu + i nu)| ~ |nu|^exponent.
  double exponent = 0.0;
  bool absolutely_integrable() const { return vanishes_at_infinity && exponent < -1.0; }
};

DecayDiagnostic decay_check(const MellinImage& F, double mu);

struct InversionOptions {
  double tol = 1e-6;
  double initial_bandwidth = 1024.0;
  double max_bandwidth = 32768.0;
};

struct InversionResult {
  double value = 0.0;
  double imaginary_residual = 0.0;
  double bandwidth = 0.0;
  bool converged = false;
};

// Smooth spectral window used on the contour, exp(-36 eta^6) for eta = |nu| / T < 1.
double spectral_window(double eta);

// (x^-mu / 2 pi) ∫ F(mu + i nu) x^(-i nu) dnu with the windowed composite rule.
InversionResult inverse_mellin_line_detailed(const MellinImage& F, double mu, double x,
                                             const InversionOptions& opts = {});
double inverse_mellin_line(const MellinImage& F, double mu, double x, double tol = 1e-6);

// Inverse transform tabulated on [x_lo, x_hi]: one contour sampling, one FFT, then
// interpolation in ln x. Points outside the table fall back to the direct sum.
class ContourInverse {
 public:
  ContourInverse(const MellinImage& F, double mu, double x_lo, double x_hi,
                 const InversionOptions& opts = {});

  double operator()(double x) const;

  double mu() const { return mu_; }
  double bandwidth() const { return bandwidth_; }
  double step() const { return dnu_; }
  bool converged() const { return converged_; }
  // Largest probe change of the last bandwidth doubling.
  double last_change() const { return last_change_; }
  // Leakage width of the window in ln x.
  double leakage_width() const;

 private:
  double direct(double x) const;

  double mu_;
  double x_lo_, x_hi_;
  double dnu_ = 0.0;
  double bandwidth_ = 0.0;
  bool converged_ = false;
  double last_change_ = 0.0;
  std::vector<cplx> samples_;   // F(mu + i k dnu) times window and trapezoid weights
  std::vector<double> table_;   // windowed sum on t_j = t0 + j dt
  double t0_ = 0.0;
  double dt_ = 0.0;
};

}  // namespace stereo
