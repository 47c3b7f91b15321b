#include "exgraph/sampler.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "exgraph/errors.hpp"

namespace exgraph {

namespace {

constexpr double kInversionLimit = 10.0;
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t poisson_by_inversion(CounterRng& rng, double mean) {
  const double u = rng.uniform();
  double term = std::exp(-mean);
  double cdf = term;
  std::uint64_t k = 0;
  // The cdf can stall below 1 in floating point; the cap is far in the tail.
  while (u >= cdf && k < 1000) {
    ++k;
    term *= mean / static_cast<double>(k);
    cdf += term;
  }
  return k;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  // SplitMix64 finalizer.
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng CounterRng::for_subset(std::uint64_t seed, std::uint32_t subset_bits) {
  return CounterRng(mix64(mix64(seed) ^ (static_cast<std::uint64_t>(subset_bits) * kGolden + 1)));
}

std::uint64_t CounterRng::draw_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x5851f42d4c957f2dULL));
}

CounterRng::result_type CounterRng::operator()() {
  return mix64(key_ ^ mix64(counter_++));
}

double CounterRng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t sample_poisson(CounterRng& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw ArgumentError("Poisson mean must be finite and non-negative");
  }
  if (mean == 0.0) return 0;
  std::uint64_t total = 0;
  double remaining = mean;
  while (remaining >= kInversionLimit) {
    total += poisson_by_inversion(rng, kInversionLimit / 2);
    remaining -= kInversionLimit / 2;
  }
  return total + poisson_by_inversion(rng, remaining);
}

PointProcessRealization::PointProcessRealization(int n, std::vector<std::uint64_t> counts,
                                                 SamplingMode mode)
    : n_(n), counts_(std::move(counts)), mode_(mode) {
  if (n < 1 || n > kMaxGroundSize || counts_.size() != (std::size_t{1} << n)) {
    throw ArgumentError("realization needs one count per subset of [n]");
  }
}

std::uint64_t PointProcessRealization::count(SubsetMask a) const {
  if (a.n() != n_) throw ArgumentError("subset ground set differs from realization");
  return counts_[a.bits()];
}

PointProcessRealization sample_point_process(const RateSchedule& schedule, int n,
                                             std::uint64_t seed, SamplingMode mode,
                                             const EnumerationLimits& limits) {
  if (n < 1 || n > kMaxGroundSize) throw ArgumentError("sample size n must be in [1, 31]");
  if (!schedule.has_level(n)) {
    throw ArgumentError("schedule has no rates at level n=" + std::to_string(n));
  }
  require_power_set_size(n, limits);
  const std::vector<double> rates = schedule.row(n);
  std::vector<std::uint64_t> counts(std::size_t{1} << n, 0);
  for (std::uint32_t bits = 0; bits <= full_bits(n); ++bits) {
    const double mean = rates[static_cast<std::size_t>(std::popcount(bits))];
    if (mean == 0.0) continue;
    CounterRng rng = CounterRng::for_subset(seed, bits);
    if (mode == SamplingMode::kFullCounts) {
      counts[bits] = sample_poisson(rng, mean);
    } else {
      // P(X_a > 0) = 1 − e^{−λ}; compare with −expm1(−λ) for small λ.
      counts[bits] = rng.uniform() < -std::expm1(-mean) ? 1 : 0;
    }
  }
  return PointProcessRealization(n, std::move(counts), mode);
}

SubsetFamily support(const PointProcessRealization& realization) {
  std::vector<SubsetMask> members;
  const auto& counts = realization.counts();
  for (std::size_t bits = 0; bits < counts.size(); ++bits) {
    if (counts[bits] > 0) members.emplace_back(realization.n(), static_cast<std::uint32_t>(bits));
  }
  return SubsetFamily(realization.n(), std::move(members));
}

PipelineSample run_pipeline(PointProcessRealization realization) {
  SubsetFamily x_star = support(realization);
  GeneratingClass cover = monotone_cover(x_star);
  Graph graph = clique_graph(cover);
  return PipelineSample{std::move(realization), std::move(x_star), std::move(cover),
                        std::move(graph)};
}

PipelineSample sample_pipeline(const RateSchedule& schedule, int n, std::uint64_t seed,
                               SamplingMode mode, const EnumerationLimits& limits) {
  return run_pipeline(sample_point_process(schedule, n, seed, mode, limits));
}

PointProcessRealization permute_realization(const PointProcessRealization& realization,
                                            const Permutation& sigma) {
  if (sigma.n() != realization.n()) throw ArgumentError("permutation size differs");
  std::vector<std::uint64_t> counts(realization.counts().size(), 0);
  for (std::uint32_t bits = 0; bits < counts.size(); ++bits) {
    counts[sigma.apply(SubsetMask(realization.n(), bits)).bits()] = realization.counts()[bits];
  }
  return PointProcessRealization(realization.n(), std::move(counts), realization.mode());
}

}  // namespace exgraph
