#pragma once

// Poisson point process on 2^[n] with mean measure Λ_n(a) = λ_n(#a), and the
// projection pipeline X -> X* -> α(X*) -> β(α(X*)).

#include <cstdint>
#include <vector>

#include "exgraph/rate_schedule.hpp"
#include "exgraph/subset_lattice.hpp"

namespace exgraph {

// Counter-based generator: the output stream is a pure function of
// (key, counter), so independent streams can be split off by key.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}
  // Stream for one subset of one draw, independent of iteration order.
  static CounterRng for_subset(std::uint64_t seed, std::uint32_t subset_bits);
  // Seed of the i-th draw in a batch seeded by `seed`.
  static std::uint64_t draw_seed(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

// Poisson variate by sequential inversion; rates of 10 or more are split into
// independent pieces below 10 and summed.
std::uint64_t sample_poisson(CounterRng& rng, double mean);

enum class SamplingMode {
  kFullCounts,   // Poisson multiplicities X_a
  kSupportOnly,  // Bernoulli presence with probability 1 − e^{−λ}; counts are 0/1
};

class PointProcessRealization {
 public:
  PointProcessRealization(int n, std::vector<std::uint64_t> counts, SamplingMode mode);

  int n() const { return n_; }
  // Multiplicity of subset a (indexed by bit pattern).
  std::uint64_t count(SubsetMask a) const;
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  SamplingMode mode() const { return mode_; }

  bool operator==(const PointProcessRealization&) const = default;

 private:
  int n_;
  std::vector<std::uint64_t> counts_;  // size 2^n
  SamplingMode mode_;
};

struct PipelineSample {
  PointProcessRealization realization;
  SubsetFamily support;   // X*
  GeneratingClass cover;  // α(X*)
  Graph graph;            // β(α(X*))
};

PointProcessRealization sample_point_process(const RateSchedule& schedule, int n,
                                             std::uint64_t seed,
                                             SamplingMode mode = SamplingMode::kFullCounts,
                                             const EnumerationLimits& limits = {});

SubsetFamily support(const PointProcessRealization& realization);

PipelineSample run_pipeline(PointProcessRealization realization);

PipelineSample sample_pipeline(const RateSchedule& schedule, int n, std::uint64_t seed,
                               SamplingMode mode = SamplingMode::kFullCounts,
                               const EnumerationLimits& limits = {});

// Relabels a realization: the count of a moves to σ(a).
PointProcessRealization permute_realization(const PointProcessRealization& realization,
                                            const Permutation& sigma);

}  // namespace exgraph
