#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stereo/errors.hpp"
#include "stereo/forward.hpp"
#include "support.hpp"

using namespace stereo;
using doctest::Approx;
using stereo::testing::linspace;
constexpr double pi = std::numbers::pi;

TEST_CASE("sphere solution maps forward to the uniform section density") {
  auto k = sphere_plane_kernel();
  auto H = sex1_distribution();
  // alpha = 1 / E[lambda] = 4 / pi for the normalized solution.
  const double alpha = 4.0 / pi;
  for (double s : {0.0, 0.5, 1.5, 3.0}) CHECK(forward_plane(H, k, s, alpha) == Approx(1.0 / pi).epsilon(1e-8));
  CHECK(forward_plane(H, k, 1.0, 1.0) == Approx(0.25).epsilon(1e-8));
  auto L = sex2_distribution();
  auto line = sphere_line_kernel();
  auto t = triangle_density();
  for (double l : {0.2, 0.9, 1.0, 1.3, 1.8}) CHECK(forward_line(L, line, l, 1.0) == Approx(t(l)).epsilon(1e-8));
  CHECK(forward(L, line, 0.9, 2.0) == Approx(2.0 * t(0.9)).epsilon(1e-8));
  CHECK_THROWS_AS(forward_plane(H, k, 4.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(forward_line(H, k, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("residual of exact solutions") {
  auto r = residual(sex1_distribution(), uniform_density(pi), sphere_plane_kernel(), SectionMode::plane, 4.0 / pi);
  CHECK(r.sup_norm < 1e-6);
  CHECK(r.target_sup == Approx(1.0 / pi));
  CHECK(r.grid.size() == 200);
  CHECK(r.grid.front() == Approx(0.01 * pi));
  auto wrong = residual(sex1_printed_distribution(), uniform_density(pi), sphere_plane_kernel(),
                        SectionMode::plane, 4.0 / pi);
  CHECK(wrong.sup_norm > 1e-3);
  CHECK_THROWS_AS(residual(sex1_distribution(), uniform_density(pi), sphere_plane_kernel(), SectionMode::line, 1.0),
                  InvalidArgument);
}

TEST_CASE("correctness conditions") {
  auto c = correctness_conditions(uniform_density(pi), 1.0);
  CHECK(c.integral_condition);
  CHECK(c.integral_value == Approx(1.0 / pi).epsilon(1e-6));
  CHECK(c.limit_condition);
  auto root = closed_form_density("root", pi, [](double s) { return 0.5 / std::sqrt(pi * s); }, {}, -0.5);
  auto d = correctness_conditions(root, 1.0);
  CHECK_FALSE(d.integral_condition);
  CHECK_FALSE(d.notes.empty());
  CHECK_THROWS_AS(correctness_conditions(root, -1.0), InvalidArgument);
}

TEST_CASE("moment identity for a custom kernel without body constants") {
  auto k = custom_kernel(SectionMode::line, triangle_density().rescaled(0.5));
  auto m = moment_identities(k);
  CHECK(*m.line_mean == Approx(0.5).epsilon(1e-7));
  CHECK_FALSE(m.line_mean_ok.has_value());
}
