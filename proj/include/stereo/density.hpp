#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stereo/mellin_image.hpp"
#include "stereo/piecewise.hpp"

namespace stereo {

enum class Representation { closed_form, piecewise_constant, piecewise_linear, piecewise_cubic };

const char* to_string(Representation r);

struct DensityParts {
  std::string name;
  double support_upper = 1.0;
  std::function<double(double)> eval;
  std::function<double(double)> derivative;  // optional
  Representation representation = Representation::closed_form;
  // Total mass; computed by quadrature when absent.
  std::optional<double> mass;
  std::optional<double> origin_exponent;
  std::optional<MellinImage> image;
  // Points of non-smoothness inside (0, support_upper).
  std::vector<double> breakpoints;
  std::shared_ptr<const PiecewisePolynomial> pieces;
};

// Nonnegative function on [0, c]. Evaluation returns 0 outside the support.
class SupportedDensity {
 public:
  explicit SupportedDensity(DensityParts parts);

  double operator()(double x) const;
  // Exact derivative when available (closed forms and splines).
  bool has_derivative() const { return static_cast<bool>(parts_->derivative); }
  double derivative(double x) const;

  const std::string& name() const { return parts_->name; }
  double support_upper() const { return parts_->support_upper; }
  Representation representation() const { return parts_->representation; }
  double mass() const { return mass_; }
  const std::optional<double>& declared_origin_exponent() const { return parts_->origin_exponent; }
  const MellinImage& image() const { return *image_; }
  const std::vector<double>& breakpoints() const { return parts_->breakpoints; }
  const PiecewisePolynomial* pieces() const { return parts_->pieces.get(); }

  // f(x / c) / c, which keeps the mass and scales the image by c^(s-1).
  SupportedDensity rescaled(double c) const;
  // Multiplies the density by a constant.
  SupportedDensity times(double factor) const;

 private:
  std::shared_ptr<const DensityParts> parts_;
  std::shared_ptr<const MellinImage> image_;
  double mass_ = 1.0;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<double> counts;

  double total() const;
  void validate() const;
};

SupportedDensity uniform_density(double c);
SupportedDensity triangle_density();
SupportedDensity quadratic_density();
SupportedDensity density_from_histogram(const Histogram& hist,
                                        std::optional<double> support_upper = std::nullopt);
SupportedDensity density_from_pieces(std::string name, PiecewisePolynomial pieces,
                                     Representation rep, bool normalize);
SupportedDensity linear_interpolated_density(std::vector<double> xs, std::vector<double> ys,
                                             bool normalize = true);
SupportedDensity spline_density(std::vector<double> xs, std::vector<double> ys,
                                bool normalize = true);

// A custom closed form with a numerically computed image and, unless declared, a probed
// origin exponent.
SupportedDensity closed_form_density(std::string name, double support_upper,
                                     std::function<double(double)> eval,
                                     std::function<double(double)> derivative = {},
                                     std::optional<double> origin_exponent = std::nullopt,
                                     std::vector<double> breakpoints = {});

}  // namespace stereo
