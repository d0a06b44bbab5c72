#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stereo/density.hpp"

namespace stereo {

enum class ShapeId { sphere_plane, sphere_line, nearly_sphere_plane, custom };
enum class SectionMode { plane, line };

const char* to_string(ShapeId id);
const char* to_string(SectionMode mode);

struct BodyConstants {
  double volume = 0.0;
  std::optional<double> surface_area;
  std::optional<double> mean_curvature;
  // Plane constant per unit section count, M / (2 pi).
  std::optional<double> alpha;
  // Line constant per unit intercept count, F / 4.
  std::optional<double> beta;
};

class SectionKernel {
 public:
  struct Parts {
    ShapeId shape = ShapeId::custom;
    SectionMode mode = SectionMode::plane;
    double max_section = 1.0;
    std::optional<SupportedDensity> phi;
    std::optional<BodyConstants> body;
    // Exponent p of the (max_section - x)^-p singularity; 0 when regular.
    double singularity_exponent = 0.0;
    std::function<double(double)> phi_at_gap;
    std::function<double(double)> quantile;
    std::function<double(double)> cdf;
  };

  explicit SectionKernel(Parts parts);

  ShapeId shape() const { return parts_->shape; }
  SectionMode mode() const { return parts_->mode; }
  double max_section() const { return parts_->max_section; }
  const SupportedDensity& phi() const { return *parts_->phi; }
  const MellinImage& phi_star() const { return parts_->phi->image(); }
  const std::optional<BodyConstants>& body() const { return parts_->body; }
  double singularity_exponent() const { return parts_->singularity_exponent; }

  // phi(max_section - gap), accurate for small gaps.
  double phi_at_gap(double gap) const;
  // Inverse CDF of the unit kernel.
  double quantile(double u) const;
  double cdf(double x) const;

 private:
  std::shared_ptr<const Parts> parts_;
};

SectionKernel sphere_plane_kernel();
SectionKernel sphere_line_kernel();
SectionKernel nearly_sphere_plane_kernel(double sigma_m, double p);
SectionKernel custom_kernel(SectionMode mode, SupportedDensity phi,
                            std::optional<BodyConstants> body = std::nullopt);

// phi(., lambda): (1/lambda^2) phi(sigma/lambda^2) for planes, (1/lambda) phi(l/lambda) for lines.
SupportedDensity scale_kernel(const SectionKernel& k, double lambda, SectionMode mode);

}  // namespace stereo
