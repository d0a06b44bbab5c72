#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "stereo/classical.hpp"
#include "stereo/density.hpp"
#include "stereo/forward.hpp"
#include "stereo/kernels.hpp"
#include "stereo/size_distribution.hpp"
#include "stereo/unfold.hpp"

namespace stereo {

// Shortest text with 17 significant digits, which round-trips every double.
std::string format_double(double v);

// CSV with header edge_low,edge_high,count, or JSON {"edges": [...], "counts": [...]}.
Histogram parse_histogram_csv(std::istream& in);
Histogram parse_histogram_json(std::istream& in);
// Dispatches on the .json extension.
Histogram read_histogram(const std::string& path);
void write_histogram_csv(std::ostream& out, const Histogram& h);
void write_histogram_json(std::ostream& out, const Histogram& h);
void write_histogram(const std::string& path, const Histogram& h);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Numeric CSV with a header row.
Table parse_table_csv(std::istream& in);
Table read_table_csv(const std::string& path);
void write_table_csv(std::ostream& out, const Table& t);

// lambda,H samples of H on a uniform grid of n points over its support.
Table sample_h_table(const SizeDistribution& H, int n);
SizeDistribution h_table_distribution(const Table& t);
SizeDistribution read_h_table(const std::string& path);

// uniform:c (c a number or pi), triangle, quadratic, or a histogram file.
SupportedDensity parse_density(const std::string& spec);
// sphere, nearly-sphere:SIGMA_M,P, or custom:FILE with columns x,phi.
SectionKernel parse_kernel(const std::string& spec, SectionMode mode);
// sex1, sex1-printed, sex2, quadratic-line, nearly-sphere-uniform:K,SIGMA_M,P, bump:A,B,
// or a lambda,H table file.
SizeDistribution parse_distribution(const std::string& spec);
SectionMode parse_mode(const std::string& s);

nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const Residual& r, bool include_grid = false);
nlohmann::json to_json(const CorrectnessConditions& c);
nlohmann::json to_json(const MomentCheck& m);
nlohmann::json to_json(const ClassicalSolution& s);

}  // namespace stereo
