#include "stereo/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "stereo/errors.hpp"

namespace stereo {

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& text) {
  std::string t = trim(text);
  if (t == "pi") return std::numbers::pi;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw InvalidArgument("not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_numbers(const std::string& list, std::size_t expected, const std::string& what) {
  auto parts = split(list, ',');
  if (parts.size() != expected)
    throw InvalidArgument(what + " expects " + std::to_string(expected) + " comma-separated values");
  std::vector<double> v;
  for (auto& p : parts) v.push_back(parse_number(p));
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

bool has_json_extension(const std::string& path) {
  auto ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".json";
}

Histogram checked(Histogram h) {
  try {
    h.validate();
  } catch (const Error& e) {
    throw IoError(std::string("invalid histogram: ") + e.what());
  }
  return h;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

Table parse_table_csv(std::istream& in) {
  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line, ',');
    if (t.columns.empty()) {
      t.columns = cells;
      continue;
    }
    if (cells.size() != t.columns.size())
      throw IoError("line " + std::to_string(lineno) + ": expected " + std::to_string(t.columns.size()) +
                    " fields");
    std::vector<double> row;
    for (auto& c : cells) {
      try {
        row.push_back(parse_number(c));
      } catch (const InvalidArgument& e) {
        throw IoError("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw IoError("CSV has no header");
  return t;
}

Table read_table_csv(const std::string& path) {
  auto in = open_in(path);
  return parse_table_csv(in);
}

void write_table_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  if (!out) throw IoError("write failed");
}

Histogram parse_histogram_csv(std::istream& in) {
  Table t = parse_table_csv(in);
  if (t.columns != std::vector<std::string>{"edge_low", "edge_high", "count"})
    throw IoError("histogram CSV header must be edge_low,edge_high,count");
  if (t.rows.empty()) throw IoError("histogram CSV has no bins");
  Histogram h;
  h.edges.push_back(t.rows.front()[0]);
  for (const auto& r : t.rows) {
    if (r[0] != h.edges.back()) throw IoError("histogram bins must be contiguous");
    h.edges.push_back(r[1]);
    h.counts.push_back(r[2]);
  }
  return checked(std::move(h));
}

Histogram parse_histogram_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    Histogram h;
    h.edges = j.at("edges").get<std::vector<double>>();
    h.counts = j.at("counts").get<std::vector<double>>();
    return checked(std::move(h));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("invalid histogram JSON: ") + e.what());
  }
}

Histogram read_histogram(const std::string& path) {
  auto in = open_in(path);
  return has_json_extension(path) ? parse_histogram_json(in) : parse_histogram_csv(in);
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  Table t{{"edge_low", "edge_high", "count"}, {}};
  for (std::size_t i = 0; i < h.counts.size(); ++i) t.rows.push_back({h.edges[i], h.edges[i + 1], h.counts[i]});
  write_table_csv(out, t);
}

void write_histogram_json(std::ostream& out, const Histogram& h) {
  out << nlohmann::json{{"edges", h.edges}, {"counts", h.counts}}.dump(2) << '\n';
  if (!out) throw IoError("write failed");
}

void write_histogram(const std::string& path, const Histogram& h) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  if (has_json_extension(path))
    write_histogram_json(out, h);
  else
    write_histogram_csv(out, h);
}

Table sample_h_table(const SizeDistribution& H, int n) {
  if (n < 2) throw InvalidArgument("H table needs at least 2 points");
  Table t{{"lambda", "H"}, {}};
  const double lo = H.support().lo, hi = H.support().hi;
  for (int i = 0; i < n; ++i) {
    double l = lo + (hi - lo) * i / (n - 1);
    double v = H(l);
    t.rows.push_back({l, std::isfinite(v) ? v : 0.0});
  }
  return t;
}

SizeDistribution h_table_distribution(const Table& t) {
  if (t.columns.size() < 2 || t.columns[0] != "lambda" || t.columns[1] != "H")
    throw IoError("H table header must start with lambda,H");
  if (t.rows.size() < 2) throw IoError("H table needs at least 2 rows");
  std::vector<double> l, v;
  for (const auto& r : t.rows) {
    l.push_back(r[0]);
    v.push_back(r[1]);
  }
  try {
    return tabulated_distribution(std::move(l), std::move(v));
  } catch (const Error& e) {
    throw IoError(std::string("invalid H table: ") + e.what());
  }
}

SizeDistribution read_h_table(const std::string& path) { return h_table_distribution(read_table_csv(path)); }

SupportedDensity parse_density(const std::string& spec) {
  if (spec.rfind("uniform:", 0) == 0) return uniform_density(parse_number(spec.substr(8)));
  if (spec == "triangle") return triangle_density();
  if (spec == "quadratic") return quadratic_density();
  if (std::filesystem::exists(spec)) return density_from_histogram(read_histogram(spec));
  throw InvalidArgument("unknown density '" + spec + "' (uniform:c, triangle, quadratic, or a histogram file)");
}

SectionKernel parse_kernel(const std::string& spec, SectionMode mode) {
  if (spec == "sphere") return mode == SectionMode::plane ? sphere_plane_kernel() : sphere_line_kernel();
  if (spec.rfind("nearly-sphere:", 0) == 0) {
    if (mode != SectionMode::plane) throw InvalidArgument("nearly-sphere kernels are plane kernels");
    auto v = parse_numbers(spec.substr(14), 2, "nearly-sphere");
    return nearly_sphere_plane_kernel(v[0], v[1]);
  }
  if (spec.rfind("custom:", 0) == 0) {
    Table t = read_table_csv(spec.substr(7));
    if (t.columns.size() != 2) throw IoError("custom kernel file needs two columns x,phi");
    std::vector<double> x, y;
    for (const auto& r : t.rows) {
      x.push_back(r[0]);
      y.push_back(r[1]);
    }
    return custom_kernel(mode, linear_interpolated_density(std::move(x), std::move(y), true));
  }
  throw InvalidArgument("unknown kernel '" + spec + "' (sphere, nearly-sphere:SIGMA_M,P, custom:FILE)");
}

SizeDistribution parse_distribution(const std::string& spec) {
  if (spec == "sex1") return sex1_distribution();
  if (spec == "sex1-printed") return sex1_printed_distribution();
  if (spec == "sex2") return sex2_distribution();
  if (spec == "quadratic-line") return quadratic_line_distribution();
  if (spec.rfind("nearly-sphere-uniform:", 0) == 0) {
    auto v = parse_numbers(spec.substr(22), 3, "nearly-sphere-uniform");
    return nearly_sphere_uniform_distribution(v[0], v[1], v[2]);
  }
  if (spec.rfind("bump:", 0) == 0) {
    auto v = parse_numbers(spec.substr(5), 2, "bump");
    return bump_distribution(v[0], v[1]);
  }
  if (std::filesystem::exists(spec)) return read_h_table(spec);
  throw InvalidArgument("unknown distribution '" + spec +
                        "' (sex1, sex1-printed, sex2, quadratic-line, nearly-sphere-uniform:K,S,P, "
                        "bump:A,B, or a lambda,H file)");
}

SectionMode parse_mode(const std::string& s) {
  if (s == "plane") return SectionMode::plane;
  if (s == "line") return SectionMode::line;
  throw InvalidArgument("mode must be plane or line");
}

nlohmann::json to_json(const SolveReport& r) {
  const auto& p = r.preconditions;
  return {
      {"preconditions",
       {{"strip_ok", p.strip_ok},
        {"h_star_integrable", p.h_star_integrable},
        {"quotient_integrable", p.quotient_integrable},
        {"mu_used", p.mu_used}}},
      {"residual_sup_norm", r.residual_sup_norm},
      {"residual_l1_norm", r.residual_l1_norm},
      {"scale_constant", r.scale_constant},
      {"normalizable", r.normalizable},
      {"bandwidth", r.bandwidth},
      {"bandwidth_converged", r.bandwidth_converged},
      {"h_star_decay_exponent", r.h_star_decay_exponent},
      {"quotient_decay_exponent", r.quotient_decay_exponent},
      {"support", {r.support.lo, r.support.hi}},
      {"warnings", r.warnings},
  };
}

nlohmann::json to_json(const Residual& r, bool include_grid) {
  nlohmann::json j{{"sup_norm", r.sup_norm}, {"l1_norm", r.l1_norm}, {"target_sup", r.target_sup}};
  if (include_grid) {
    j["grid"] = r.grid;
    j["forward"] = r.forward;
    j["target"] = r.target;
  }
  return j;
}

nlohmann::json to_json(const CorrectnessConditions& c) {
  return {{"limit_condition", c.limit_condition},
          {"integral_condition", c.integral_condition},
          {"limit_value", c.limit_value},
          {"integral_value", c.integral_value},
          {"notes", c.notes}};
}

nlohmann::json to_json(const MomentCheck& m) {
  nlohmann::json j{{"deviations", m.deviations}};
  auto put = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  put("plane_mean", m.plane_mean);
  put("plane_target", m.plane_target);
  put("plane_mean_ok", m.plane_mean_ok);
  put("line_mean", m.line_mean);
  put("line_target", m.line_target);
  put("line_mean_ok", m.line_mean_ok);
  return j;
}

nlohmann::json to_json(const ClassicalSolution& s) {
  nlohmann::json spikes = nlohmann::json::array();
  for (const auto& p : s.point_masses) spikes.push_back({{"location", p.location}, {"mass", p.mass}});
  return {{"scale_constant", s.scale_constant},
          {"normalizable", s.H.normalizable()},
          {"support", {s.H.support().lo, s.H.support().hi}},
          {"point_masses", spikes},
          {"warnings", s.warnings}};
}

}  // namespace stereo
