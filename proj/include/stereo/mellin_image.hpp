#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "stereo/special.hpp"

namespace stereo {

inline constexpr double inf = std::numeric_limits<double>::infinity();

class Strip {
 public:
  Strip(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  bool contains(double mu) const { return alpha_ < mu && mu < beta_; }
  Strip intersect(const Strip& other) const;
  Strip scaled(double factor) const;

 private:
  double alpha_;
  double beta_;
};

enum class ImageKind { closed_form, piecewise_exact, numeric };

const char* to_string(ImageKind kind);

// |F(mu + i nu)| <= K |nu|^-p for large |nu|.
struct DecayBound {
  double K;
  double p;
};

class MellinImage {
 public:
  using Eval = std::function<cplx(cplx)>;
  // out[k] = F(mu + i k dnu), k = 0 .. out.size()-1
  using LineSampler = std::function<void(double mu, double dnu, std::span<cplx> out)>;

  MellinImage(Eval eval, Strip strip, ImageKind kind,
              std::optional<DecayBound> decay = std::nullopt,
              LineSampler sampler = {});

  cplx operator()(cplx s) const { return eval_(s); }
  void sample_line(double mu, double dnu, std::span<cplx> out) const;

  const Strip& strip() const { return strip_; }
  ImageKind kind() const { return kind_; }
  const std::optional<DecayBound>& decay_bound() const { return decay_; }

  // F(s / scale) for the numerator over the denominator, as used by the unfolding quotients.
  static MellinImage quotient(const MellinImage& num, const MellinImage& den, double scale = 1.0);

 private:
  Eval eval_;
  Strip strip_;
  ImageKind kind_;
  std::optional<DecayBound> decay_;
  LineSampler sampler_;
};

// Checks the decay bound against samples at |nu| in {1e2, 1e3, 1e4} with 1% slack.
bool decay_bound_holds(const MellinImage& F, double mu);

}  // namespace stereo
