#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stereo/errors.hpp"
#include "stereo/forward.hpp"
#include "stereo/kernels.hpp"
#include "stereo/mellin.hpp"
#include "support.hpp"

using namespace stereo;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("sphere plane kernel profile and image") {
  auto k = sphere_plane_kernel();
  CHECK(k.mode() == SectionMode::plane);
  CHECK(k.max_section() == Approx(pi));
  CHECK(k.phi()(0.0) == Approx(1.0 / (2.0 * pi)));
  CHECK(k.phi()(4.0) == 0.0);
  CHECK(k.phi().mass() == 1.0);
  auto numeric = closed_form_density(
      "copy", pi, [](double s) { return s < pi ? 0.5 / std::sqrt(pi * (pi - s)) : 0.0; }, {}, 0.0);
  for (cplx s : {cplx(1.0, 0.0), cplx(2.0, 5.0)})
    CHECK(std::abs(k.phi_star()(s) - mellin_transform(numeric, s, 1e-10)) < 1e-7);
  CHECK(std::abs(k.phi_star()(1.0) - 1.0) < 1e-14);
  CHECK(k.phi_at_gap(0.25) == Approx(k.phi()(pi - 0.25)));
}

TEST_CASE("sphere line kernel profile and image") {
  auto k = sphere_line_kernel();
  CHECK(k.max_section() == 2.0);
  CHECK(k.phi()(1.0) == 0.5);
  cplx s(1.5, 2.0);
  CHECK(std::abs(k.phi_star()(s) - std::pow(2.0, s) / (s + 1.0)) < 1e-13);
  CHECK(k.cdf(1.0) == Approx(0.25));
  CHECK(k.quantile(0.25) == Approx(1.0));
}

TEST_CASE("nearly-spherical kernel") {
  auto k = nearly_sphere_plane_kernel(3.0, 0.3);
  CHECK(k.singularity_exponent() == 0.3);
  CHECK(k.phi_star()(cplx(1.0, 0.0)).real() == Approx(1.0).epsilon(1e-13));
  CHECK(k.phi_star()(cplx(2.0, 0.0)).real() == Approx(3.0 / 1.7).epsilon(1e-12));
  auto half = nearly_sphere_plane_kernel(pi, 0.5);
  for (double s : {0.1, 1.0, 3.0}) CHECK(half.phi()(s) == Approx(sphere_plane_kernel().phi()(s)));
  CHECK_THROWS_AS(nearly_sphere_plane_kernel(3.0, 0.0), InvalidShapeParameters);
  CHECK_THROWS_AS(nearly_sphere_plane_kernel(3.0, 0.6), InvalidShapeParameters);
  CHECK_THROWS_AS(nearly_sphere_plane_kernel(-1.0, 0.3), InvalidShapeParameters);
}

TEST_CASE("quantile inverts the cdf") {
  for (const auto& k : {sphere_plane_kernel(), sphere_line_kernel(), nearly_sphere_plane_kernel(2.0, 0.2)})
    for (double u : {0.01, 0.3, 0.77, 0.999}) CHECK(k.cdf(k.quantile(u)) == Approx(u).epsilon(1e-12));
}

TEST_CASE("custom kernels tabulate their cdf") {
  auto phi = triangle_density().rescaled(0.5);
  auto k = custom_kernel(SectionMode::line, phi);
  CHECK(k.shape() == ShapeId::custom);
  CHECK(k.max_section() == 1.0);
  CHECK(k.cdf(0.5) == Approx(0.5).epsilon(1e-6));
  CHECK(k.quantile(0.125) == Approx(0.25).epsilon(1e-4));
}

TEST_CASE("scaled kernel keeps unit mass") {
  auto k = sphere_plane_kernel();
  auto s = scale_kernel(k, 0.5, SectionMode::plane);
  CHECK(s.support_upper() == Approx(pi / 4.0));
  CHECK(s.mass() == Approx(1.0));
  CHECK(s(0.1) == Approx(4.0 * k.phi()(0.4)));
  CHECK_THROWS_AS(scale_kernel(k, 0.5, SectionMode::line), InvalidArgument);
  CHECK_THROWS_AS(scale_kernel(k, 0.0, SectionMode::plane), InvalidArgument);
}

TEST_CASE("moment identities") {
  auto p = moment_identities(sphere_plane_kernel());
  CHECK(*p.plane_mean == Approx(2.0 * pi / 3.0).epsilon(1e-10));
  CHECK(*p.plane_mean_ok);
  auto l = moment_identities(sphere_line_kernel());
  CHECK(*l.line_mean == Approx(4.0 / 3.0).epsilon(1e-10));
  CHECK(*l.line_mean_ok);
  auto n = moment_identities(nearly_sphere_plane_kernel(3.0, 0.3));
  CHECK(*n.plane_mean == Approx(3.0 / 1.7).epsilon(1e-9));
  CHECK(*n.plane_mean_ok);
}
