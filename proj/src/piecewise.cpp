#include "stereo/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "stereo/errors.hpp"

namespace stereo {

namespace {

double poly_derivative(const PiecewisePolynomial::Coeffs& a, double u, int order) {
  switch (order) {
    case 0: return a[0] + u * (a[1] + u * (a[2] + u * a[3]));
    case 1: return a[1] + u * (2.0 * a[2] + 3.0 * u * a[3]);
    case 2: return 2.0 * a[2] + 6.0 * u * a[3];
    case 3: return 6.0 * a[3];
    default: return 0.0;
  }
}

// Derivative at xs[0] of the interpolating polynomial through the given points.
double lagrange_slope(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double slope = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double denom = 1.0;
    for (std::size_t m = 0; m < n; ++m)
      if (m != j) denom *= xs[j] - xs[m];
    // d/dx prod_{m != j} (x - x_m) at x = xs[0]
    double d = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == j) continue;
      double prod = 1.0;
      for (std::size_t m = 0; m < n; ++m)
        if (m != j && m != r) prod *= xs[0] - xs[m];
      d += prod;
    }
    slope += ys[j] * d / denom;
  }
  return slope;
}

}  // namespace

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> nodes, std::vector<Coeffs> coeffs)
    : nodes_(std::move(nodes)), coeffs_(std::move(coeffs)) {
  if (nodes_.size() < 2 || coeffs_.size() + 1 != nodes_.size())
    throw InvalidArgument("piecewise polynomial needs n+1 nodes for n pieces");
  if (nodes_.front() < 0.0) throw InvalidArgument("piecewise polynomial nodes must be nonnegative");
  for (std::size_t k = 1; k < nodes_.size(); ++k)
    if (!(nodes_[k] > nodes_[k - 1])) throw InvalidArgument("nodes must be strictly increasing");

  for (const auto& c : coeffs_)
    for (int j = 3; j > degree_; --j)
      if (c[j] != 0.0) degree_ = j;

  jumps_.resize(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    for (int j = 0; j < 4; ++j) {
      double right = k + 1 < nodes_.size() ? poly_derivative(coeffs_[k], 0.0, j) : 0.0;
      double left =
          k > 0 ? poly_derivative(coeffs_[k - 1], nodes_[k] - nodes_[k - 1], j) : 0.0;
      double sign = (j % 2 == 0) ? -1.0 : 1.0;
      jumps_[k][j] = sign * (right - left) * std::pow(nodes_[k], j);
    }
  }
}

PiecewisePolynomial PiecewisePolynomial::constant(std::vector<double> edges,
                                                  std::vector<double> heights) {
  std::vector<Coeffs> c(heights.size());
  for (std::size_t k = 0; k < heights.size(); ++k) c[k] = {heights[k], 0.0, 0.0, 0.0};
  return PiecewisePolynomial(std::move(edges), std::move(c));
}

PiecewisePolynomial PiecewisePolynomial::linear(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw InvalidArgument("linear interpolant needs matching samples (at least 2)");
  std::vector<Coeffs> c(xs.size() - 1);
  for (std::size_t k = 0; k + 1 < xs.size(); ++k)
    c[k] = {ys[k], (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]), 0.0, 0.0};
  return PiecewisePolynomial(std::move(xs), std::move(c));
}

PiecewisePolynomial PiecewisePolynomial::cubic_spline(std::vector<double> xs,
                                                      std::vector<double> ys) {
  const std::size_t n = xs.size();
  if (ys.size() != n || n < 4) throw InvalidArgument("cubic spline needs at least 4 samples");
  for (std::size_t k = 1; k < n; ++k)
    if (!(xs[k] > xs[k - 1])) throw InvalidArgument("nodes must be strictly increasing");

  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = xs[i + 1] - xs[i];
    delta[i] = (ys[i + 1] - ys[i]) / h[i];
  }
  std::vector<double> d(n);
  d[0] = lagrange_slope(std::span(xs).first(4), std::span(ys).first(4));
  {
    std::array<double, 4> rx{}, ry{};
    for (int j = 0; j < 4; ++j) {
      rx[j] = xs[n - 1 - j];
      ry[j] = ys[n - 1 - j];
    }
    d[n - 1] = lagrange_slope(rx, ry);
  }

  // Thomas algorithm on the interior slopes.
  const std::size_t m = n - 2;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m);
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t i = r + 1;
    lower[r] = h[i];
    diag[r] = 2.0 * (h[i - 1] + h[i]);
    upper[r] = h[i - 1];
    rhs[r] = 3.0 * (h[i] * delta[i - 1] + h[i - 1] * delta[i]);
  }
  rhs[0] -= lower[0] * d[0];
  rhs[m - 1] -= upper[m - 1] * d[n - 1];
  for (std::size_t r = 1; r < m; ++r) {
    double w = lower[r] / diag[r - 1];
    diag[r] -= w * upper[r - 1];
    rhs[r] -= w * rhs[r - 1];
  }
  d[m] = rhs[m - 1] / diag[m - 1];
  for (std::size_t r = m - 1; r-- > 0;) d[r + 1] = (rhs[r] - upper[r] * d[r + 2]) / diag[r];

  std::vector<Coeffs> c(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    c[i][0] = ys[i];
    c[i][1] = d[i];
    c[i][2] = (3.0 * delta[i] - 2.0 * d[i] - d[i + 1]) / h[i];
    c[i][3] = (d[i] + d[i + 1] - 2.0 * delta[i]) / (h[i] * h[i]);
  }
  return PiecewisePolynomial(std::move(xs), std::move(c));
}

std::size_t PiecewisePolynomial::segment(double x) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  k = k == 0 ? 0 : k - 1;
  return std::min(k, coeffs_.size() - 1);
}

double PiecewisePolynomial::operator()(double x) const { return derivative(x, 0); }

double PiecewisePolynomial::derivative(double x, int order) const {
  if (x < nodes_.front() || x > nodes_.back()) return 0.0;
  std::size_t k = segment(x);
  return poly_derivative(coeffs_[k], x - nodes_[k], order);
}

double PiecewisePolynomial::integral() const {
  double total = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    double u = nodes_[k + 1] - nodes_[k];
    const auto& a = coeffs_[k];
    total += u * (a[0] + u * (a[1] / 2.0 + u * (a[2] / 3.0 + u * a[3] / 4.0)));
  }
  return total;
}

PiecewisePolynomial PiecewisePolynomial::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("scale factor must be positive");
  std::vector<double> nodes(nodes_);
  for (double& x : nodes) x *= factor;
  std::vector<Coeffs> coeffs(coeffs_);
  for (auto& a : coeffs)
    for (int j = 1; j < 4; ++j) a[j] /= std::pow(factor, j);
  return PiecewisePolynomial(std::move(nodes), std::move(coeffs));
}

cplx PiecewisePolynomial::mellin(cplx s) const {
  std::array<cplx, 4> acc{};
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (nodes_[k] == 0.0) continue;
    cplx z = std::exp(s * std::log(nodes_[k]));
    for (int j = 0; j <= degree_; ++j) acc[j] += jumps_[k][j] * z;
  }
  cplx total = 0.0;
  cplx r = 1.0;
  for (int j = 0; j <= degree_; ++j) {
    r *= s + static_cast<double>(j);
    total += acc[j] / r;
  }
  return total;
}

void PiecewisePolynomial::mellin_line(double mu, double dnu, std::span<cplx> out) const {
  const std::size_t n = out.size();
  const int terms = degree_ + 1;
  std::vector<cplx> acc(n * terms, 0.0);
  constexpr std::size_t reseed = 256;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (nodes_[k] == 0.0) continue;
    const double lx = std::log(nodes_[k]);
    const double base = std::exp(mu * lx);
    const cplx rot = std::polar(1.0, dnu * lx);
    cplx z = base;
    for (std::size_t m = 0; m < n; ++m) {
      if (m % reseed == 0) z = std::polar(base, dnu * static_cast<double>(m) * lx);
      for (int j = 0; j < terms; ++j) acc[m * terms + j] += jumps_[k][j] * z;
      z *= rot;
    }
  }
  for (std::size_t m = 0; m < n; ++m) {
    const cplx s(mu, dnu * static_cast<double>(m));
    cplx total = 0.0;
    cplx r = 1.0;
    for (int j = 0; j < terms; ++j) {
      r *= s + static_cast<double>(j);
      total += acc[m * terms + j] / r;
    }
    out[m] = total;
  }
}

}  // namespace stereo
