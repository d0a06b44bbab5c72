#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "stereo/errors.hpp"
#include "stereo/simulate.hpp"
#include "support.hpp"

using namespace stereo;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("uniform deviates are deterministic and in (0, 1)") {
  CHECK(uniform_deviate(7, 3) == uniform_deviate(7, 3));
  CHECK(uniform_deviate(7, 3) != uniform_deviate(8, 3));
  double mean = 0.0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    double u = uniform_deviate(1, i);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    mean += u;
  }
  CHECK(mean / 1e5 == Approx(0.5).epsilon(0.01));
}

TEST_CASE("section of a given particle size") {
  auto k = sphere_plane_kernel();
  CHECK(sample_section_given_size(k, 0.5, SectionMode::plane, 0.0) == 0.0);
  CHECK(sample_section_given_size(k, 0.5, SectionMode::plane, 0.75) == Approx(0.25 * k.quantile(0.75)));
  CHECK(sample_section_given_size(sphere_line_kernel(), 0.5, SectionMode::line, 0.25) == Approx(0.5));
  CHECK_THROWS_AS(sample_section_given_size(k, 0.5, SectionMode::line, 0.5), InvalidArgument);
  CHECK_THROWS_AS(sample_section_given_size(k, 0.0, SectionMode::plane, 0.5), InvalidArgument);
}

TEST_CASE("sphere sections of the uniform-area solution are uniform") {
  SimConfig cfg{SectionMode::plane, sex1_distribution(), sphere_plane_kernel(), 50000, 11};
  auto x = sample_sections(cfg);
  CHECK(x.size() == 50000);
  double ks = ks_statistic(x, [](double s) { return std::clamp(s / pi, 0.0, 1.0); });
  CHECK(ks < 1.63 / std::sqrt(5e4));
}

TEST_CASE("triangle chord law from the line solution") {
  SimConfig cfg{SectionMode::line, sex2_distribution(), sphere_line_kernel(), 50000, 5};
  auto x = sample_sections(cfg);
  auto cdf = [](double l) {
    if (l <= 0.0) return 0.0;
    if (l >= 2.0) return 1.0;
    return l < 1.0 ? 0.5 * l * l : 1.0 - 0.5 * (2.0 - l) * (2.0 - l);
  };
  CHECK(ks_statistic(x, cdf) < 1.63 / std::sqrt(5e4));
}

TEST_CASE("results do not depend on the worker count") {
  SimConfig a{SectionMode::plane, bump_distribution(0.2, 0.9), sphere_plane_kernel(), 70000, 3, 50, 1};
  SimConfig b = a;
  b.threads = 4;
  CHECK(sample_sections(a) == sample_sections(b));
  auto h = simulate_sections(a);
  CHECK(h.edges.size() == 51);
  CHECK(h.edges.back() == Approx(pi * 0.81));
  CHECK(h.total() == 70000);
}

TEST_CASE("the thread cap comes from the environment") {
  setenv("STEREO_UNFOLD_THREADS", "2", 1);
  CHECK(worker_count(8) == 2);
  CHECK(worker_count(1) == 1);
  unsetenv("STEREO_UNFOLD_THREADS");
  CHECK(worker_count(3) == 3);
}

TEST_CASE("histogram binning") {
  auto h = histogram_of({0.1, 0.2, 0.9, 1.0, 1.5}, 1.0, 2);
  CHECK(h.counts == std::vector<double>{2, 3});
  CHECK_THROWS_AS(histogram_of({0.1}, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(ks_statistic({}, [](double) { return 0.0; }), InvalidArgument);
}

TEST_CASE("simulation errors") {
  SimConfig q{SectionMode::line, quadratic_line_distribution(), sphere_line_kernel(), 10, 1};
  CHECK_THROWS_AS(sample_sections(q), NonNormalizableH);
  SimConfig m{SectionMode::line, sex1_distribution(), sphere_plane_kernel(), 10, 1};
  CHECK_THROWS_AS(sample_sections(m), InvalidArgument);
  SimConfig z{SectionMode::plane, sex1_distribution(), sphere_plane_kernel(), 0, 1};
  CHECK_THROWS_AS(sample_sections(z), InvalidArgument);
}
