#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "stereo/errors.hpp"
#include "stereo/io.hpp"

using namespace stereo;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {
std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("stereo_io_" + name);
}
}  // namespace

TEST_CASE("doubles round trip with 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(pi)) == pi);
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("histogram CSV round trip") {
  Histogram h{{0.0, 0.5, 1.0, 2.0}, {3, 0, 7}};
  std::stringstream ss;
  write_histogram_csv(ss, h);
  CHECK(ss.str().rfind("edge_low,edge_high,count\n", 0) == 0);
  Histogram back = parse_histogram_csv(ss);
  CHECK(back.edges == h.edges);
  CHECK(back.counts == h.counts);
}

TEST_CASE("histogram JSON round trip") {
  Histogram h{{0.0, 0.1, 0.3}, {1, 2}};
  std::stringstream ss;
  write_histogram_json(ss, h);
  Histogram back = parse_histogram_json(ss);
  CHECK(back.edges == h.edges);
  CHECK(back.counts == h.counts);
  auto path = temp_file("hist.json");
  write_histogram(path.string(), h);
  CHECK(read_histogram(path.string()).counts == h.counts);
  std::filesystem::remove(path);
}

TEST_CASE("malformed histograms") {
  std::stringstream bad_header("a,b,c\n0,1,2\n");
  CHECK_THROWS_AS(parse_histogram_csv(bad_header), IoError);
  std::stringstream gap("edge_low,edge_high,count\n0,1,2\n1.5,2,1\n");
  CHECK_THROWS_AS(parse_histogram_csv(gap), IoError);
  std::stringstream negative("edge_low,edge_high,count\n0,1,-2\n");
  CHECK_THROWS_AS(parse_histogram_csv(negative), IoError);
  std::stringstream text("edge_low,edge_high,count\n0,x,2\n");
  CHECK_THROWS_AS(parse_histogram_csv(text), IoError);
  std::stringstream json("{\"edges\": [0, 1]}");
  CHECK_THROWS_AS(parse_histogram_json(json), IoError);
  CHECK_THROWS_AS(read_histogram("/nonexistent/h.csv"), IoError);
}

TEST_CASE("H tables") {
  auto t = sample_h_table(sex2_distribution(), 11);
  CHECK(t.columns == std::vector<std::string>{"lambda", "H"});
  CHECK(t.rows.size() == 11);
  CHECK(t.rows[0][0] == 0.5);
  std::stringstream ss;
  write_table_csv(ss, t);
  auto H = h_table_distribution(parse_table_csv(ss));
  CHECK(H(0.5) == Approx(8.0));
  CHECK(H(0.75) == Approx(2.0 / (0.75 * 0.75)).epsilon(0.01));
  CHECK_THROWS_AS(h_table_distribution(Table{{"x", "y"}, {{0, 1}, {1, 2}}}), IoError);
}

TEST_CASE("registry names") {
  CHECK(parse_density("uniform:pi").support_upper() == Approx(pi));
  CHECK(parse_density("uniform:2").support_upper() == 2.0);
  CHECK(parse_density("triangle").name() == "triangle");
  CHECK_THROWS_AS(parse_density("gaussian"), InvalidArgument);
  CHECK(parse_kernel("sphere", SectionMode::line).mode() == SectionMode::line);
  CHECK(parse_kernel("nearly-sphere:3,0.3", SectionMode::plane).singularity_exponent() == 0.3);
  CHECK_THROWS_AS(parse_kernel("nearly-sphere:3", SectionMode::plane), InvalidArgument);
  CHECK_THROWS_AS(parse_kernel("nearly-sphere:3,0.3", SectionMode::line), InvalidArgument);
  CHECK_THROWS_AS(parse_kernel("cube", SectionMode::plane), InvalidArgument);
  CHECK(parse_distribution("sex1")(0.6) == Approx(0.75));
  CHECK(parse_distribution("sex2")(0.5) == Approx(8.0));
  CHECK(parse_distribution("bump:0.2,0.8").support().hi == 0.8);
  CHECK_THROWS_AS(parse_distribution("nope"), InvalidArgument);
  CHECK(parse_mode("line") == SectionMode::line);
  CHECK_THROWS_AS(parse_mode("volume"), InvalidArgument);
}

TEST_CASE("custom kernel files") {
  auto path = temp_file("kernel.csv");
  {
    std::ofstream out(path);
    out << "x,phi\n0,0\n0.5,1\n1,0\n";
  }
  auto k = parse_kernel("custom:" + path.string(), SectionMode::line);
  CHECK(k.max_section() == 1.0);
  CHECK(k.phi()(0.5) == Approx(2.0));
  std::filesystem::remove(path);
}

TEST_CASE("JSON reports") {
  SolveReport r;
  r.scale_constant = 2.0;
  r.warnings.push_back("w");
  auto j = to_json(r);
  CHECK(j["scale_constant"] == 2.0);
  CHECK(j["warnings"].size() == 1);
  CHECK(j.contains("preconditions"));
}
