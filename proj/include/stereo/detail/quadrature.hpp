#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <exception>
#include <string>
#include <vector>

#include "stereo/errors.hpp"

namespace stereo::detail {

inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}

// Tanh-sinh on [a, b]; f(x, xc) receives xc = a - x on the left half and b - x on the
// right half, so integrands singular at an endpoint can use the exact distance. With
// abs_tol > 0 a coarse pass fixes the L1 scale and the error target becomes
// max(tol * L1, abs_tol).
template <class F>
double integrate_ts(F f, double a, double b, double tol, double* err_out = nullptr,
                    double abs_tol = 0.0) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try {
    auto& rule = tanh_sinh_rule();
    if (abs_tol > 0.0) {
      constexpr double coarse = 1e-4;
      value = rule.integrate(f, a, b, coarse, &err, &l1);
      double eff = l1 > 0.0 ? std::max(tol, abs_tol / l1) : coarse;
      if (eff < coarse) value = rule.integrate(f, a, b, eff, &err, &l1);
    } else {
      value = rule.integrate(f, a, b, tol, &err, &l1);
    }
  } catch (const std::exception& e) {
    throw QuadratureFailure(std::string("tanh-sinh failed: ") + e.what());
  }
  if (!std::isfinite(value)) throw QuadratureFailure("non-finite quadrature result");
  if (err_out) *err_out = err;
  return value;
}

template <class F>
double gk_bisect(F& f, double a, double b, double tol, double abs_tol, unsigned depth, double& err) {
  double e = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &e);
  if (depth == 0 || e <= std::max(tol * std::abs(v), abs_tol)) {
    err += e;
    return v;
  }
  double mid = 0.5 * (a + b);
  return gk_bisect(f, a, mid, tol, 0.5 * abs_tol, depth - 1, err) +
         gk_bisect(f, mid, b, tol, 0.5 * abs_tol, depth - 1, err);
}

// Adaptive Gauss-Kronrod (15 points) on [a, b] for smooth integrands. Bisection stops once
// the local error is below tol relative to the piece or abs_tol.
template <class F>
double integrate_gk(F f, double a, double b, double tol, double* err_out = nullptr,
                    unsigned max_depth = 12, double abs_tol = 0.0) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  double value = 0.0;
  try {
    value = gk_bisect(f, a, b, tol, abs_tol, max_depth, err);
  } catch (const std::exception& e) {
    throw QuadratureFailure(std::string("gauss-kronrod failed: ") + e.what());
  }
  if (!std::isfinite(value)) throw QuadratureFailure("non-finite quadrature result");
  if (err_out) *err_out = err;
  return value;
}

// Splits [a, b] at the interior knots and sums the pieces, with an absolute tolerance of
// tol times the L1 norm of f over [a, b].
template <class F>
double integrate_pieces_gk(F f, double a, double b, std::vector<double> knots, double tol) {
  std::sort(knots.begin(), knots.end());
  std::vector<double> cuts{a};
  for (double k : knots)
    if (k > cuts.back() && k < b) cuts.push_back(k);
  cuts.push_back(b);
  const std::size_t n = cuts.size() - 1;
  std::vector<double> v(n), e(n);
  double l1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double piece_l1 = 0.0;
    v[i] = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, cuts[i], cuts[i + 1], 0, 0.0,
                                                                         &e[i], &piece_l1);
    l1 += piece_l1;
  }
  const double abs_tol = tol * l1;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = (cuts[i + 1] - cuts[i]) / (b - a);
    if (e[i] <= std::max(tol * std::abs(v[i]), abs_tol * w)) {
      total += v[i];
      continue;
    }
    double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    total += integrate_gk(f, cuts[i], mid, tol, nullptr, 11, 0.5 * abs_tol * w) +
             integrate_gk(f, mid, cuts[i + 1], tol, nullptr, 11, 0.5 * abs_tol * w);
  }
  if (!std::isfinite(total)) throw QuadratureFailure("non-finite quadrature result");
  return total;
}

}  // namespace stereo::detail
