#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "stereo/density.hpp"
#include "stereo/errors.hpp"
#include "stereo/mellin.hpp"
#include "stereo/piecewise.hpp"
#include "stereo/special.hpp"
#include "support.hpp"

using namespace stereo;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("gamma and beta on the real line and off it") {
  CHECK(std::abs(gamma(cplx(5.0, 0.0)) - 24.0) < 1e-12);
  CHECK(std::abs(gamma(cplx(0.5, 0.0)) - std::sqrt(pi)) < 1e-13);
  CHECK(std::abs(beta(cplx(2.0, 0.0), cplx(3.0, 0.0)) - 1.0 / 12.0) < 1e-14);
  // |Gamma(1/2 + i t)|^2 = pi / cosh(pi t)
  double t = 3.7;
  CHECK(std::norm(gamma(cplx(0.5, t))) == Approx(pi / std::cosh(pi * t)).epsilon(1e-12));
  // Gamma(s + 1) = s Gamma(s)
  cplx s(0.3, -12.0);
  CHECK(std::abs(gamma(s + 1.0) / (s * gamma(s)) - 1.0) < 1e-12);
  CHECK(std::abs(rising(s, 3) - s * (s + 1.0) * (s + 2.0)) < 1e-10);
}

TEST_CASE("strips intersect and scale") {
  Strip a(0.0, inf), b(-1.0, 2.0);
  Strip c = a.intersect(b);
  CHECK(c.alpha() == 0.0);
  CHECK(c.beta() == 2.0);
  CHECK(c.contains(1.0));
  CHECK_FALSE(c.contains(0.0));
  CHECK(b.scaled(2.0).beta() == Approx(4.0));
  CHECK_THROWS_AS(Strip(1.0, 1.0), InvalidArgument);
}

TEST_CASE("closed-form image of the uniform density matches quadrature") {
  auto h = uniform_density(pi);
  auto numeric = closed_form_density("flat", pi, [](double) { return 1.0 / pi; }, {}, 0.0);
  for (cplx s : {cplx(1.0, 0.0), cplx(2.0, 3.0), cplx(0.5, -7.0)}) {
    cplx exact = std::pow(pi, s - 1.0) / s;
    CHECK(std::abs(h.image()(s) - exact) < 1e-14 * std::abs(exact) + 1e-15);
    CHECK(std::abs(mellin_transform(numeric, s, 1e-10) - exact) < 1e-8);
  }
  CHECK_THROWS_AS(mellin_transform(h, cplx(-0.5, 0.0)), StripViolation);
}

TEST_CASE("piecewise polynomial images from derivative jumps") {
  std::vector<double> xs = stereo::testing::linspace(0.0, 2.0, 21), ys;
  for (double x : xs) ys.push_back(std::exp(-x) * (2.0 - x));
  auto spline = PiecewisePolynomial::cubic_spline(xs, ys);
  auto lin = PiecewisePolynomial::linear(xs, ys);
  auto step = PiecewisePolynomial::constant({0.0, 0.5, 1.5}, {1.0, 3.0});
  for (const auto* p : {&spline, &lin, &step}) {
    auto f = closed_form_density("copy", 2.0, [p](double x) { return (*p)(x); }, {}, 0.0, p->nodes());
    for (cplx s : {cplx(1.0, 0.0), cplx(1.5, 4.0), cplx(2.5, -20.0)})
      CHECK(std::abs(p->mellin(s) - mellin_transform(f, s, 1e-11)) < 1e-8);
  }
  CHECK(step.integral() == Approx(3.5));
  CHECK(step(1.0) == 3.0);
  CHECK(step(2.0) == 0.0);
}

TEST_CASE("sampled line agrees with pointwise evaluation") {
  auto h = spline_density(stereo::testing::linspace(0.0, 1.0, 9), {0, 1, 2, 2, 3, 2, 1, 1, 0});
  std::vector<cplx> out(50);
  h.image().sample_line(1.3, 0.7, out);
  for (int k = 0; k < 50; k += 7) CHECK(std::abs(out[k] - h.image()(cplx(1.3, 0.7 * k))) < 1e-12);
}

TEST_CASE("strip estimate follows the declared or probed origin exponent") {
  CHECK(estimate_strip(uniform_density(2.0)).alpha() == 0.0);
  auto sing = closed_form_density("root", 1.0, [](double x) { return 0.5 / std::sqrt(x); });
  CHECK(estimate_strip(sing).alpha() == Approx(0.5).epsilon(0.02));
}

TEST_CASE("decay diagnostics") {
  auto d = decay_check(uniform_density(pi).image(), 1.0);
  CHECK(d.vanishes_at_infinity);
  CHECK(d.exponent == Approx(-1.0).epsilon(0.02));
  CHECK_FALSE(d.absolutely_integrable());
  auto t = decay_check(triangle_density().image(), 1.0);
  CHECK(t.quadratic_decay);
  MellinImage flat([](cplx) { return cplx(1.0, 0.0); }, Strip(0.0, inf), ImageKind::numeric);
  CHECK_FALSE(decay_check(flat, 1.0).vanishes_at_infinity);
  CHECK_THROWS_AS(decay_check(flat, -1.0), ContourOutsideStrip);
}

TEST_CASE("spectral window") {
  CHECK(spectral_window(0.0) == 1.0);
  CHECK(spectral_window(1.0) == 0.0);
  CHECK(spectral_window(-0.5) == Approx(std::exp(-36.0 / 64.0)));
}

TEST_CASE("inverse transform recovers densities") {
  auto tri = triangle_density();
  for (double x : {0.3, 0.8, 1.4, 1.9})
    CHECK(inverse_mellin_line(tri.image(), 1.0, x, 1e-8) == Approx(tri(x)).epsilon(1e-6));
  CHECK(std::abs(inverse_mellin_line(tri.image(), 1.0, 2.5, 1e-8)) < 1e-6);
  ContourInverse inv(tri.image(), 1.5, 0.01, 2.2);
  for (double x : {0.05, 0.5, 0.99, 1.01, 1.7}) CHECK(inv(x) == Approx(tri(x)).epsilon(2e-6));
  CHECK(inv.converged());
  CHECK_THROWS_AS(inverse_mellin_line(tri.image(), -0.5, 1.0), ContourOutsideStrip);
  CHECK_THROWS_AS(inverse_mellin_line(tri.image(), 1.0, 0.0), InvalidArgument);
  MellinImage flat([](cplx) { return cplx(1.0, 0.0); }, Strip(0.0, inf), ImageKind::numeric);
  CHECK_THROWS_AS(inverse_mellin_line(flat, 1.0, 1.0), NotIntegrableOnLine);
}

TEST_CASE("quotients evaluate at the scaled argument") {
  auto a = uniform_density(2.0).image();
  auto b = triangle_density().image();
  auto q = MellinImage::quotient(a, b, 2.0);
  cplx s(3.0, 1.0);
  CHECK(std::abs(q(s) - a(s / 2.0) / b(s / 2.0)) < 1e-14);
  CHECK(q.strip().alpha() == Approx(0.0));
}
