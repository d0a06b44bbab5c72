#include "stereo/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace stereo {

namespace {

constexpr double pi = std::numbers::pi;

// B_{2k} / (2k (2k-1)), k = 1..9
constexpr std::array<double, 9> stirling = {
    1.0 / 12.0,           -1.0 / 360.0,         1.0 / 1260.0,
    -1.0 / 1680.0,        1.0 / 1188.0,         -691.0 / 360360.0,
    1.0 / 156.0,          -3617.0 / 122400.0,   43867.0 / 244188.0,
};

cplx lgamma_stirling(cplx w) {
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx p = inv;
  for (double c : stirling) {
    series += c * p;
    p *= inv2;
  }
  return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * pi) + series;
}

cplx log_sin_pi(cplx z) {
  const cplx w = pi * z;
  if (std::abs(w.imag()) < 20.0) return std::log(std::sin(w));
  if (w.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
  const cplx i(0.0, 1.0);
  return -i * w + std::log(1.0 - std::exp(2.0 * i * w)) + std::log(0.5 * i);
}

}  // namespace

cplx lgamma(cplx z) {
  if (z.real() < 0.5) return std::log(pi) - log_sin_pi(z) - lgamma(1.0 - z);
  cplx shift = 0.0;
  cplx w = z;
  while (std::abs(w) < 15.0) {
    shift += std::log(w);
    w += 1.0;
  }
  return lgamma_stirling(w) - shift;
}

cplx gamma(cplx z) { return std::exp(lgamma(z)); }

cplx lbeta(cplx a, cplx b) { return lgamma(a) + lgamma(b) - lgamma(a + b); }

cplx beta(cplx a, cplx b) { return std::exp(lbeta(a, b)); }

cplx rising(cplx s, int n) {
  cplx r = 1.0;
  for (int j = 0; j < n; ++j) r *= s + static_cast<double>(j);
  return r;
}

}  // namespace stereo
