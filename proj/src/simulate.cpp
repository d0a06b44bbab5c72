#include "stereo/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <string>
#include <thread>

#include "stereo/detail/quadrature.hpp"
#include "stereo/errors.hpp"

namespace stereo {

namespace {

constexpr std::uint64_t chunk_size = 1 << 15;
constexpr int size_cells = 8192;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Inverse CDF of lambda^weight H(lambda) on a cosine-spaced grid, which resolves
// inverse-square-root singularities at both support ends.
class SizeSampler {
 public:
  SizeSampler(const SizeDistribution& H, int weight) {
    lo_ = H.support().lo;
    hi_ = H.support().hi;
    if (!std::isfinite(hi_))
      throw WeightingDiverges("size distribution has unbounded support");
    if (!(hi_ > lo_)) throw NonNormalizableH("size distribution has empty support");
    cdf_.assign(size_cells + 1, 0.0);
    for (int i = 0; i < size_cells; ++i) {
      double a = node(i), b = node(i + 1);
      double m = 0.0;
      if (b > a)
        m = detail::integrate_ts(
            [&](double l, double) {
              double v = std::pow(l, weight) * H(l);
              return std::isfinite(v) ? v : 0.0;
            },
            a, b, 1e-10);
      if (std::isnan(m)) throw WeightingDiverges("size weighting is not integrable");
      cdf_[i + 1] = cdf_[i] + std::max(m, 0.0);
    }
    const double total = cdf_.back();
    if (!std::isfinite(total)) throw WeightingDiverges("size weighting is not integrable");
    if (!(total > 0.0)) throw NonNormalizableH("size weighting has zero mass");
    for (double& c : cdf_) c /= total;
  }

  double operator()(double v) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), v);
    int i = std::clamp(static_cast<int>(it - cdf_.begin()) - 1, 0, size_cells - 1);
    double c0 = cdf_[i], c1 = cdf_[i + 1];
    double f = c1 > c0 ? std::clamp((v - c0) / (c1 - c0), 0.0, 1.0) : 0.5;
    return map((i + f) / size_cells);
  }

 private:
  double map(double u) const {
    return lo_ + (hi_ - lo_) * 0.5 * (1.0 - std::cos(std::numbers::pi * u));
  }
  double node(int i) const { return map(static_cast<double>(i) / size_cells); }

  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> cdf_;
};

}  // namespace

double uniform_deviate(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = splitmix64(splitmix64(seed) ^ (counter * 0xD1B54A32D192ED03ULL));
  return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

unsigned worker_count(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("STEREO_UNFOLD_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

double sample_section_given_size(const SectionKernel& k, double lambda, SectionMode mode, double u) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (k.mode() != mode) throw InvalidArgument("kernel mode does not match the sampling mode");
  if (u <= 0.0) return 0.0;
  const double scale = mode == SectionMode::plane ? lambda * lambda : lambda;
  return scale * k.quantile(std::min(u, 1.0));
}

std::vector<double> sample_sections(const SimConfig& cfg) {
  if (cfg.n_samples < 1) throw InvalidArgument("n_samples must be at least 1");
  if (cfg.kernel.mode() != cfg.mode) throw InvalidArgument("kernel mode does not match the sampling mode");
  if (!cfg.H.normalizable()) throw NonNormalizableH("H is not normalizable");
  const SizeSampler sizes(cfg.H, cfg.mode == SectionMode::plane ? 1 : 2);

  std::vector<double> out(cfg.n_samples);
  const std::uint64_t n_chunks = (cfg.n_samples + chunk_size - 1) / chunk_size;
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t c = next++; c < n_chunks; c = next++) {
      const std::uint64_t end = std::min(cfg.n_samples, (c + 1) * chunk_size);
      for (std::uint64_t i = c * chunk_size; i < end; ++i) {
        double lam = sizes(uniform_deviate(cfg.seed, 2 * i));
        double u = uniform_deviate(cfg.seed, 2 * i + 1);
        out[i] = lam > 0.0 ? sample_section_given_size(cfg.kernel, lam, cfg.mode, u) : 0.0;
      }
    }
  };
  const unsigned n_workers =
      static_cast<unsigned>(std::min<std::uint64_t>(worker_count(cfg.threads), n_chunks));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

Histogram histogram_of(const std::vector<double>& samples, double upper, int bins) {
  if (bins < 1) throw InvalidArgument("bins must be at least 1");
  if (!(upper > 0.0)) throw InvalidArgument("histogram range must be positive");
  Histogram h;
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = upper * i / bins;
  h.counts.assign(bins, 0.0);
  for (double x : samples) {
    int b = static_cast<int>(x / upper * bins);
    h.counts[std::clamp(b, 0, bins - 1)] += 1.0;
  }
  return h;
}

Histogram simulate_sections(const SimConfig& cfg) {
  auto samples = sample_sections(cfg);
  const double hi = cfg.H.support().hi;
  const double upper = cfg.kernel.max_section() * (cfg.mode == SectionMode::plane ? hi * hi : hi);
  return histogram_of(samples, upper, cfg.bins);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidArgument("no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

}  // namespace stereo
