#include "stereo/size_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stereo/detail/quadrature.hpp"
#include "stereo/errors.hpp"
#include "stereo/mellin_image.hpp"

namespace stereo {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::mellin_plane: return "mellin_plane";
    case Provenance::mellin_line: return "mellin_line";
    case Provenance::abel_plane: return "abel_plane";
    case Provenance::derivative_line: return "derivative_line";
    case Provenance::closed_form: return "closed_form";
  }
  return "unknown";
}

SizeDistribution::SizeDistribution(std::function<double(double)> eval, Interval support,
                                   Provenance provenance, std::optional<double> normalization,
                                   std::vector<double> knots)
    : eval_(std::make_shared<const std::function<double(double)>>(std::move(eval))),
      support_(support),
      provenance_(provenance),
      normalization_(normalization),
      knots_(std::move(knots)) {
  if (!*eval_) throw InvalidArgument("size distribution needs an evaluator");
  if (!(support.lo >= 0.0) || !(support.hi >= support.lo))
    throw InvalidArgument("size distribution support must be an interval in [0, inf)");
  std::sort(knots_.begin(), knots_.end());
  knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
}

double SizeDistribution::operator()(double lambda) const {
  if (!(lambda > 0.0) || !support_.contains(lambda)) return 0.0;
  return (*eval_)(lambda);
}

SizeDistribution SizeDistribution::scaled(double factor) const {
  auto e = eval_;
  std::optional<double> n;
  if (normalization_) n = *normalization_ * factor;
  return SizeDistribution([e, factor](double x) { return factor * (*e)(x); }, support_, provenance_,
                          n, knots_);
}

SizeDistribution SizeDistribution::with_knots(std::vector<double> knots) const {
  SizeDistribution out(*this);
  out.knots_ = std::move(knots);
  std::sort(out.knots_.begin(), out.knots_.end());
  return out;
}

SizeDistribution SizeDistribution::zero(Interval support, Provenance provenance) {
  return SizeDistribution([](double) { return 0.0; }, support, provenance, 0.0);
}

SizeDistribution sex1_distribution() {
  return SizeDistribution([](double l) { return l < 1.0 ? l / std::sqrt((1.0 - l) * (1.0 + l)) : inf; },
                          {0.0, 1.0}, Provenance::closed_form, 1.0, {0.0, 1.0});
}

SizeDistribution sex1_printed_distribution() {
  return SizeDistribution([](double l) { return l < 1.0 ? 0.75 * l / std::sqrt(1.0 - l) : inf; },
                          {0.0, 1.0}, Provenance::closed_form, 1.0, {0.0, 1.0});
}

SizeDistribution sex2_distribution() {
  return SizeDistribution([](double l) { return 2.0 / (l * l); }, {0.5, 1.0},
                          Provenance::closed_form, 2.0, {0.5, 1.0});
}

SizeDistribution quadratic_line_distribution() {
  return SizeDistribution([](double l) { return 1.5 * (1.0 - l * l) / (l * l); }, {0.0, 1.0},
                          Provenance::closed_form, std::nullopt, {0.0, 1.0});
}

SizeDistribution nearly_sphere_uniform_distribution(double K, double sigma_m, double p) {
  const double top = std::sqrt(K / sigma_m);
  const double C = std::pow(sigma_m, 1.5 - p) * std::sqrt(std::numbers::pi) /
                   (std::tgamma(p) * std::tgamma(1.5 - p) * std::sqrt(K));
  return SizeDistribution(
      [=](double l) {
        double g = K - sigma_m * l * l;
        if (g <= 0.0) return inf;
        return C * std::pow(g / (l * l), p - 1.0);
      },
      {0.0, top}, Provenance::closed_form, 1.0, {0.0, top});
}

SizeDistribution bump_distribution(double a, double b) {
  if (!(b > a) || a < 0.0) throw InvalidArgument("bump needs 0 <= a < b");
  auto shape = [a, b](double l) {
    double u = (2.0 * l - a - b) / (b - a);
    double q = 1.0 - u * u;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
  };
  double mass = detail::integrate_gk(shape, a, b, 1e-14);
  return SizeDistribution([shape, mass](double l) { return shape(l) / mass; }, {a, b},
                          Provenance::closed_form, 1.0, {a, b});
}

SizeDistribution tabulated_distribution(std::vector<double> lambda, std::vector<double> values,
                                        Provenance provenance) {
  if (lambda.size() != values.size() || lambda.size() < 2)
    throw InvalidArgument("tabulated distribution needs matching samples (at least 2)");
  for (std::size_t k = 1; k < lambda.size(); ++k)
    if (!(lambda[k] > lambda[k - 1])) throw InvalidArgument("lambda grid must increase");
  double mass = 0.0;
  for (std::size_t k = 1; k < lambda.size(); ++k)
    mass += 0.5 * (values[k] + values[k - 1]) * (lambda[k] - lambda[k - 1]);
  auto xs = std::make_shared<const std::vector<double>>(lambda);
  auto ys = std::make_shared<const std::vector<double>>(std::move(values));
  Interval support{lambda.front(), lambda.back()};
  return SizeDistribution(
      [xs, ys](double l) {
        auto it = std::upper_bound(xs->begin(), xs->end(), l);
        std::size_t k = static_cast<std::size_t>(it - xs->begin());
        if (k == 0) return (*ys)[0];
        if (k >= xs->size()) return ys->back();
        double w = (l - (*xs)[k - 1]) / ((*xs)[k] - (*xs)[k - 1]);
        return (1.0 - w) * (*ys)[k - 1] + w * (*ys)[k];
      },
      support, provenance, std::isfinite(mass) ? std::optional<double>(mass) : std::nullopt,
      std::move(lambda));
}

}  // namespace stereo
