#include "stereo/mellin_image.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stereo/errors.hpp"

namespace stereo {

Strip::Strip(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (std::isnan(alpha) || std::isnan(beta) || !(alpha < beta))
    throw InvalidArgument("strip requires alpha < beta");
}

Strip Strip::intersect(const Strip& other) const {
  return Strip(std::max(alpha_, other.alpha_), std::min(beta_, other.beta_));
}

Strip Strip::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("strip scale must be positive");
  return Strip(alpha_ * factor, beta_ * factor);
}

const char* to_string(ImageKind kind) {
  switch (kind) {
    case ImageKind::closed_form: return "closed_form";
    case ImageKind::piecewise_exact: return "piecewise_exact";
    case ImageKind::numeric: return "numeric";
  }
  return "unknown";
}

MellinImage::MellinImage(Eval eval, Strip strip, ImageKind kind,
                         std::optional<DecayBound> decay, LineSampler sampler)
    : eval_(std::move(eval)),
      strip_(strip),
      kind_(kind),
      decay_(decay),
      sampler_(std::move(sampler)) {
  if (!eval_) throw InvalidArgument("mellin image needs an evaluator");
}

void MellinImage::sample_line(double mu, double dnu, std::span<cplx> out) const {
  if (sampler_) {
    sampler_(mu, dnu, out);
    return;
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = eval_(cplx(mu, dnu * static_cast<double>(k)));
}

MellinImage MellinImage::quotient(const MellinImage& num, const MellinImage& den, double scale) {
  Strip strip = num.strip().intersect(den.strip()).scaled(scale);
  auto checked = [](cplx n, cplx d) {
    if (d == 0.0 || !std::isfinite(std::abs(d)))
      throw ZeroMellinImage("denominator image vanishes on the contour");
    return n / d;
  };
  Eval eval = [num, den, scale, checked](cplx s) {
    return checked(num(s / scale), den(s / scale));
  };
  LineSampler sampler = [num, den, scale, checked](double mu, double dnu, std::span<cplx> out) {
    std::vector<cplx> d(out.size());
    num.sample_line(mu / scale, dnu / scale, out);
    den.sample_line(mu / scale, dnu / scale, d);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = checked(out[k], d[k]);
  };
  ImageKind kind = ImageKind::closed_form;
  if (num.kind() == ImageKind::numeric || den.kind() == ImageKind::numeric)
    kind = ImageKind::numeric;
  else if (num.kind() == ImageKind::piecewise_exact || den.kind() == ImageKind::piecewise_exact)
    kind = ImageKind::piecewise_exact;
  return MellinImage(std::move(eval), strip, kind, std::nullopt, std::move(sampler));
}

bool decay_bound_holds(const MellinImage& F, double mu) {
  const auto& b = F.decay_bound();
  if (!b) return true;
  for (double nu : {1e2, 1e3, 1e4}) {
    for (double sign : {1.0, -1.0}) {
      double v = std::abs(F(cplx(mu, sign * nu)));
      if (v > 1.01 * b->K * std::pow(nu, -b->p)) return false;
    }
  }
  return true;
}

}  // namespace stereo
