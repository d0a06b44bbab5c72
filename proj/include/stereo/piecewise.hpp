#pragma once

#include <array>
#include <span>
#include <vector>

#include "stereo/special.hpp"

namespace stereo {

// Polynomial pieces of degree <= 3 on [x_k, x_{k+1}], written in the local variable x - x_k.
// The function is zero outside [x_0, x_n].
class PiecewisePolynomial {
 public:
  using Coeffs = std::array<double, 4>;

  PiecewisePolynomial(std::vector<double> nodes, std::vector<Coeffs> coeffs);

  static PiecewisePolynomial constant(std::vector<double> edges, std::vector<double> heights);
  static PiecewisePolynomial linear(std::vector<double> xs, std::vector<double> ys);
  // Clamped cubic spline; end slopes default to one-sided finite differences of the data.
  static PiecewisePolynomial cubic_spline(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  double derivative(double x, int order = 1) const;
  double integral() const;
  int degree() const { return degree_; }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<Coeffs>& coeffs() const { return coeffs_; }
  PiecewisePolynomial scaled(double factor) const;

  // Exact Mellin image from the derivative jumps at the nodes.
  cplx mellin(cplx s) const;
  void mellin_line(double mu, double dnu, std::span<cplx> out) const;

 private:
  std::size_t segment(double x) const;

  std::vector<double> nodes_;
  std::vector<Coeffs> coeffs_;
  int degree_ = 0;
  // Per node: (-1)^(j+1) * jump of f^(j) * x^j, j = 0..3
  std::vector<std::array<double, 4>> jumps_;
};

}  // namespace stereo
