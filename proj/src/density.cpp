#include "stereo/density.hpp"

#include <algorithm>
#include <cmath>

#include "stereo/detail/mellin_quad.hpp"
#include "stereo/detail/quadrature.hpp"
#include "stereo/errors.hpp"

namespace stereo {

const char* to_string(Representation r) {
  switch (r) {
    case Representation::closed_form: return "closed_form";
    case Representation::piecewise_constant: return "piecewise_constant";
    case Representation::piecewise_linear: return "piecewise_linear";
    case Representation::piecewise_cubic: return "piecewise_cubic";
  }
  return "unknown";
}

namespace {

double quadrature_mass(const DensityParts& p) {
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (double b : p.breakpoints)
    if (b > 0.0 && b < p.support_upper) cuts.push_back(b);
  cuts.push_back(p.support_upper);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double a = cuts[k];
    double b = cuts[k + 1];
    total += detail::integrate_ts([&](double x, double) { return p.eval(x); }, a, b, 1e-12);
  }
  return total;
}

MellinImage pieces_image(std::shared_ptr<const PiecewisePolynomial> pp) {
  double a = pp->nodes().front();
  // A function vanishing near the origin has an image on a left half-line as well.
  Strip strip(a > 0.0 ? -inf : 0.0, inf);
  return MellinImage([pp](cplx s) { return pp->mellin(s); }, strip, ImageKind::piecewise_exact,
                     std::nullopt,
                     [pp](double mu, double dnu, std::span<cplx> out) {
                       pp->mellin_line(mu, dnu, out);
                     });
}

}  // namespace

SupportedDensity::SupportedDensity(DensityParts parts) {
  if (!(parts.support_upper > 0.0) || !std::isfinite(parts.support_upper))
    throw InvalidArgument("density support must be a positive finite bound");
  if (!parts.eval) throw InvalidArgument("density needs an evaluator");
  std::sort(parts.breakpoints.begin(), parts.breakpoints.end());

  mass_ = parts.mass ? *parts.mass : quadrature_mass(parts);

  if (parts.image) {
    image_ = std::make_shared<const MellinImage>(*parts.image);
  } else if (parts.pieces) {
    image_ = std::make_shared<const MellinImage>(pieces_image(parts.pieces));
  } else {
    double gamma = parts.origin_exponent
                       ? *parts.origin_exponent
                       : detail::probe_origin_exponent(parts.eval, parts.support_upper, nullptr);
    auto fn = parts.eval;
    double c = parts.support_upper;
    auto bps = parts.breakpoints;
    image_ = std::make_shared<const MellinImage>(
        [fn, c, bps, gamma](cplx s) {
          return detail::mellin_quadrature(fn, c, bps, gamma, s, 1e-10);
        },
        Strip(gamma, inf), ImageKind::numeric);
  }
  parts_ = std::make_shared<const DensityParts>(std::move(parts));
}

double SupportedDensity::operator()(double x) const {
  if (!(x >= 0.0) || x > parts_->support_upper) return 0.0;
  return parts_->eval(x);
}

double SupportedDensity::derivative(double x) const {
  if (!parts_->derivative) throw NonSmoothInput("density has no derivative");
  if (!(x >= 0.0) || x > parts_->support_upper) return 0.0;
  return parts_->derivative(x);
}

SupportedDensity SupportedDensity::rescaled(double c) const {
  if (!(c > 0.0)) throw InvalidArgument("rescale factor must be positive");
  const auto& p = *parts_;
  if (p.pieces) {
    PiecewisePolynomial scaled = p.pieces->scaled(c);
    std::vector<PiecewisePolynomial::Coeffs> coeffs = scaled.coeffs();
    for (auto& a : coeffs)
      for (double& v : a) v /= c;
    std::vector<double> nodes = scaled.nodes();
    auto out = density_from_pieces(p.name, PiecewisePolynomial(nodes, coeffs), p.representation,
                                   false);
    DensityParts q = *out.parts_;
    q.support_upper = p.support_upper * c;
    return SupportedDensity(std::move(q));
  }
  DensityParts q;
  q.name = p.name;
  q.support_upper = p.support_upper * c;
  auto self = *this;
  q.eval = [self, c](double x) { return self(x / c) / c; };
  if (p.derivative) q.derivative = [self, c](double x) { return self.derivative(x / c) / (c * c); };
  q.representation = p.representation;
  q.mass = mass_;
  q.origin_exponent = p.origin_exponent;
  for (double b : p.breakpoints) q.breakpoints.push_back(b * c);
  const double lc = std::log(c);
  q.image = MellinImage(
      [self, lc](cplx s) { return std::exp((s - 1.0) * lc) * self.image()(s); },
      image_->strip(), image_->kind(), std::nullopt,
      [self, lc](double mu, double dnu, std::span<cplx> out) {
        self.image().sample_line(mu, dnu, out);
        for (std::size_t k = 0; k < out.size(); ++k)
          out[k] *= std::exp(cplx(mu - 1.0, dnu * static_cast<double>(k)) * lc);
      });
  return SupportedDensity(std::move(q));
}

SupportedDensity SupportedDensity::times(double factor) const {
  if (!(factor >= 0.0)) throw InvalidArgument("density factor must be nonnegative");
  DensityParts q = *parts_;
  auto self = *this;
  q.eval = [self, factor](double x) { return factor * self(x); };
  if (parts_->derivative)
    q.derivative = [self, factor](double x) { return factor * self.derivative(x); };
  q.mass = factor * mass_;
  q.pieces.reset();
  q.image = MellinImage(
      [self, factor](cplx s) { return factor * self.image()(s); }, image_->strip(),
      image_->kind(), std::nullopt, [self, factor](double mu, double dnu, std::span<cplx> out) {
        self.image().sample_line(mu, dnu, out);
        for (auto& v : out) v *= factor;
      });
  if (parts_->pieces) {
    std::vector<PiecewisePolynomial::Coeffs> coeffs = parts_->pieces->coeffs();
    for (auto& a : coeffs)
      for (double& v : a) v *= factor;
    q.pieces = std::make_shared<const PiecewisePolynomial>(parts_->pieces->nodes(), coeffs);
  }
  return SupportedDensity(std::move(q));
}

double Histogram::total() const {
  double t = 0.0;
  for (double c : counts) t += c;
  return t;
}

void Histogram::validate() const {
  if (edges.size() < 2 || counts.size() + 1 != edges.size())
    throw InvalidArgument("histogram needs n+1 edges for n counts");
  if (edges.front() < 0.0) throw InvalidArgument("histogram edges must be nonnegative");
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (!(edges[k] > edges[k - 1])) throw InvalidArgument("histogram edges must increase");
  for (double c : counts) {
    if (std::isnan(c)) throw InvalidArgument("histogram count is NaN");
    if (c < 0.0) throw NegativeCount("histogram has a negative count");
  }
}

SupportedDensity uniform_density(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("uniform density needs c > 0");
  DensityParts p;
  p.name = "uniform";
  p.support_upper = c;
  p.eval = [c](double) { return 1.0 / c; };
  p.derivative = [](double) { return 0.0; };
  p.mass = 1.0;
  p.origin_exponent = 0.0;
  const double lc = std::log(c);
  p.image = MellinImage([lc](cplx s) { return std::exp((s - 1.0) * lc) / s; }, Strip(0.0, inf),
                        ImageKind::closed_form);
  return SupportedDensity(std::move(p));
}

SupportedDensity triangle_density() {
  DensityParts p;
  p.name = "triangle";
  p.support_upper = 2.0;
  p.eval = [](double l) { return 1.0 - std::abs(l - 1.0); };
  p.derivative = [](double l) { return l < 1.0 ? 1.0 : -1.0; };
  p.mass = 1.0;
  p.origin_exponent = 0.0;
  p.breakpoints = {1.0};
  const double l2 = std::log(2.0);
  p.image = MellinImage(
      [l2](cplx s) { return (std::exp((1.0 + s) * l2) - 2.0) / (s * (1.0 + s)); },
      Strip(0.0, inf), ImageKind::closed_form);
  return SupportedDensity(std::move(p));
}

SupportedDensity quadratic_density() {
  DensityParts p;
  p.name = "quadratic";
  p.support_upper = 2.0;
  p.eval = [](double l) { return 0.375 * (2.0 - l) * (2.0 - l); };
  p.derivative = [](double l) { return -0.75 * (2.0 - l); };
  p.mass = 1.0;
  p.origin_exponent = 0.0;
  const double l2 = std::log(2.0);
  p.image = MellinImage(
      [l2](cplx s) { return 3.0 * std::exp(s * l2) / (s * (s * s + 3.0 * s + 2.0)); },
      Strip(0.0, inf), ImageKind::closed_form);
  return SupportedDensity(std::move(p));
}

SupportedDensity density_from_pieces(std::string name, PiecewisePolynomial pieces,
                                     Representation rep, bool normalize) {
  double mass = pieces.integral();
  if (normalize) {
    if (!(mass > 0.0)) throw EmptyHistogram("density has no mass");
    std::vector<PiecewisePolynomial::Coeffs> coeffs = pieces.coeffs();
    for (auto& a : coeffs)
      for (double& v : a) v /= mass;
    pieces = PiecewisePolynomial(pieces.nodes(), std::move(coeffs));
    mass = 1.0;
  }
  auto pp = std::make_shared<const PiecewisePolynomial>(std::move(pieces));
  DensityParts p;
  p.name = std::move(name);
  p.support_upper = pp->nodes().back();
  p.eval = [pp](double x) { return (*pp)(x); };
  if (rep != Representation::piecewise_constant)
    p.derivative = [pp](double x) { return pp->derivative(x, 1); };
  p.representation = rep;
  p.mass = mass;
  p.origin_exponent = 0.0;
  const auto& nodes = pp->nodes();
  p.breakpoints.assign(nodes.begin(), nodes.end() - 1);
  if (!p.breakpoints.empty() && p.breakpoints.front() == 0.0)
    p.breakpoints.erase(p.breakpoints.begin());
  p.pieces = pp;
  return SupportedDensity(std::move(p));
}

SupportedDensity density_from_histogram(const Histogram& hist, std::optional<double> support_upper) {
  hist.validate();
  const double total = hist.total();
  if (!(total > 0.0)) throw EmptyHistogram("histogram has no counts");
  const double last = hist.edges.back();
  if (support_upper && *support_upper < last)
    throw InvalidArgument("support_upper must not be below the last histogram edge");
  std::vector<double> heights(hist.counts.size());
  for (std::size_t k = 0; k < heights.size(); ++k)
    heights[k] = hist.counts[k] / (total * (hist.edges[k + 1] - hist.edges[k]));
  auto d = density_from_pieces("histogram",
                               PiecewisePolynomial::constant(hist.edges, std::move(heights)),
                               Representation::piecewise_constant, false);
  if (!support_upper || *support_upper == last) return d;
  DensityParts q;
  q.name = d.name();
  q.support_upper = *support_upper;
  q.eval = [d](double x) { return d(x); };
  q.representation = Representation::piecewise_constant;
  q.mass = d.mass();
  q.origin_exponent = 0.0;
  q.breakpoints = d.breakpoints();
  q.breakpoints.push_back(last);
  q.image = d.image();
  q.pieces = std::make_shared<const PiecewisePolynomial>(*d.pieces());
  return SupportedDensity(std::move(q));
}

SupportedDensity linear_interpolated_density(std::vector<double> xs, std::vector<double> ys,
                                             bool normalize) {
  for (double y : ys)
    if (y < 0.0) throw NegativeCount("density samples must be nonnegative");
  return density_from_pieces("piecewise_linear",
                             PiecewisePolynomial::linear(std::move(xs), std::move(ys)),
                             Representation::piecewise_linear, normalize);
}

SupportedDensity spline_density(std::vector<double> xs, std::vector<double> ys, bool normalize) {
  return density_from_pieces("spline",
                             PiecewisePolynomial::cubic_spline(std::move(xs), std::move(ys)),
                             Representation::piecewise_cubic, normalize);
}

SupportedDensity closed_form_density(std::string name, double support_upper,
                                     std::function<double(double)> eval,
                                     std::function<double(double)> derivative,
                                     std::optional<double> origin_exponent,
                                     std::vector<double> breakpoints) {
  DensityParts p;
  p.name = std::move(name);
  p.support_upper = support_upper;
  p.eval = std::move(eval);
  p.derivative = std::move(derivative);
  p.origin_exponent = origin_exponent;
  p.breakpoints = std::move(breakpoints);
  return SupportedDensity(std::move(p));
}

}  // namespace stereo
