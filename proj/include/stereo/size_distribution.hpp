#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stereo {

enum class Provenance { mellin_plane, mellin_line, abel_plane, derivative_line, closed_form };

const char* to_string(Provenance p);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

class SizeDistribution {
 public:
  SizeDistribution(std::function<double(double)> eval, Interval support, Provenance provenance,
                   std::optional<double> normalization, std::vector<double> knots = {});

  // 0 outside the support.
  double operator()(double lambda) const;

  const Interval& support() const { return support_; }
  bool normalizable() const { return normalization_.has_value(); }
  // Integral of eval over the support when finite.
  const std::optional<double>& normalization() const { return normalization_; }
  Provenance provenance() const { return provenance_; }
  // Points where the distribution may be non-smooth, for quadrature splitting.
  const std::vector<double>& knots() const { return knots_; }

  SizeDistribution scaled(double factor) const;
  SizeDistribution with_knots(std::vector<double> knots) const;

  static SizeDistribution zero(Interval support, Provenance provenance);

 private:
  std::shared_ptr<const std::function<double(double)>> eval_;
  Interval support_;
  Provenance provenance_;
  std::optional<double> normalization_;
  std::vector<double> knots_;
};

// Closed-form size laws used by tests and the CLI registry.
// lambda / sqrt(1 - lambda^2) on [0, 1): the uniform(pi) plane solution for spheres.
SizeDistribution sex1_distribution();
// 3 lambda / (4 sqrt(1 - lambda)) on [0, 1): the printed form of the same example.
SizeDistribution sex1_printed_distribution();
// (beta = 1) 2 / lambda^2 on [1/2, 1]: the triangle line solution.
SizeDistribution sex2_distribution();
// (beta = 1) 3 (1 - lambda^2) / (2 lambda^2) on (0, 1]: not integrable.
SizeDistribution quadratic_line_distribution();
// C (K / lambda^2 - sigma_m)^(p - 1) on (0, sqrt(K / sigma_m)), normalized.
SizeDistribution nearly_sphere_uniform_distribution(double K, double sigma_m, double p);
// Smooth compactly supported bump on [a, b], normalized.
SizeDistribution bump_distribution(double a, double b);
// Piecewise-linear interpolation of tabulated (lambda, H) pairs.
SizeDistribution tabulated_distribution(std::vector<double> lambda, std::vector<double> values,
                                        Provenance provenance = Provenance::closed_form);

}  // namespace stereo
