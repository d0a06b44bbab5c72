#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stereo/density.hpp"
#include "stereo/kernels.hpp"
#include "stereo/size_distribution.hpp"

namespace stereo {

struct SimConfig {
  SectionMode mode = SectionMode::plane;
  SizeDistribution H;
  SectionKernel kernel;
  std::uint64_t n_samples = 1;
  std::uint64_t seed = 0;
  int bins = 100;
  // 0 picks the hardware concurrency; STEREO_UNFOLD_THREADS caps either choice.
  unsigned threads = 0;
};

// Section size of a particle of size lambda for the uniform deviate u.
double sample_section_given_size(const SectionKernel& k, double lambda, SectionMode mode, double u);

// Section sizes in sample-index order, independent of the worker count.
std::vector<double> sample_sections(const SimConfig& cfg);

// Histogram over [0, max_section * hi^2] (plane) or [0, max_section * hi] (line).
Histogram simulate_sections(const SimConfig& cfg);
Histogram histogram_of(const std::vector<double>& samples, double upper, int bins);

// sup |F_n - F| of the empirical distribution of samples against cdf.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Counter-based uniform deviate in (0, 1) for stream (seed, counter).
double uniform_deviate(std::uint64_t seed, std::uint64_t counter);

unsigned worker_count(unsigned requested);

}  // namespace stereo
