#pragma once

// Seeded Monte Carlo over TPM trajectories. Sample j is a pure function of
// (seed, j) through the Philox bijection, so results are bit-reproducible
// and the worker count only changes how the index range is partitioned.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tpmlab/tpm.hpp"

namespace tpmlab {

struct SamplerConfig {
  std::uint64_t seed;
  std::uint64_t samples;  // >= 1
  unsigned workers;       // >= 1

  SamplerConfig(std::uint64_t seed, std::uint64_t samples, unsigned workers = 1);
};

struct TrajectorySample {
  Outcome first;
  Outcome second;
  double work;  // E^i_n - E^f_m of the drawn pair
};

/// Draws (n, m) i.i.d. from the joint distribution by inverse CDF over the
/// fixed outcome order (+,+), (+,-), (-,+), (-,-).
std::vector<TrajectorySample> sample_trajectories(const ProtocolSpec& spec,
                                                  const SamplerConfig& cfg);

struct EstimateReport {
  std::string estimator;
  double mean;
  double std_error;  // unbiased sample std dev / sqrt(N); 0 when flagged
  std::uint64_t samples;
  bool single_sample;  // N = 1: the standard error is not defined
};

/// Sample mean of e^{beta (w + dF)} (the jarzynski_average summand) with
/// its standard error.
EstimateReport estimate_jarzynski(const ProtocolSpec& spec, const SamplerConfig& cfg);

/// Sample means of w^k for each requested order.
std::vector<EstimateReport> estimate_moments(const ProtocolSpec& spec, const SamplerConfig& cfg,
                                             std::span<const int> orders);

}  // namespace tpmlab
