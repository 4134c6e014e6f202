#include "tpmlab/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "tpmlab/rng.hpp"

namespace tpmlab {

namespace {

// Fixed outcome order for the inverse CDF.
constexpr std::array<std::pair<Outcome, Outcome>, 4> kOutcomeOrder{{
    {Outcome::plus, Outcome::plus},
    {Outcome::plus, Outcome::minus},
    {Outcome::minus, Outcome::plus},
    {Outcome::minus, Outcome::minus},
}};

struct OutcomeTable {
  std::array<double, 4> cumulative;  // inverse-CDF thresholds
  std::array<double, 4> work;

  explicit OutcomeTable(const ProtocolSpec& spec) {
    const JointDistribution joint = joint_distribution(spec);
    double acc = 0;
    for (int k = 0; k < 4; ++k) {
      const auto [n, m] = kOutcomeOrder[k];
      acc += joint.probability(n, m);
      cumulative[k] = acc;
      work[k] = work_value(spec, n, m);
    }
    cumulative[3] = 1.0;  // the last bucket absorbs rounding
  }

  int draw(double u) const {
    for (int k = 0; k < 3; ++k)
      if (u < cumulative[k]) return k;
    return 3;
  }
};

// Runs fn(worker, lo, hi) over the contiguous index partition, one thread
// per worker; results must be merged by the caller in worker order.
template <typename Fn>
void run_partitioned(std::uint64_t samples, unsigned workers, const Fn& fn) {
  if (workers == 1) {
    fn(0u, std::uint64_t{0}, samples);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = samples * w / workers;
    const std::uint64_t hi = samples * (w + 1) / workers;
    threads.emplace_back([&fn, w, lo, hi] { fn(w, lo, hi); });
  }
  for (auto& t : threads) t.join();
}

struct MomentAccumulator {
  double sum = 0;
  double sum_sq = 0;
};

EstimateReport report_from(std::string name, const std::vector<MomentAccumulator>& parts,
                           std::uint64_t n) {
  // Partial sums combined in ascending worker index: fixed summation order.
  double sum = 0, sum_sq = 0;
  for (const auto& p : parts) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const double mean = sum / static_cast<double>(n);
  if (n == 1) return {std::move(name), mean, 0.0, n, true};
  const double nf = static_cast<double>(n);
  const double var = std::max(0.0, (sum_sq - nf * mean * mean) / (nf - 1.0));
  return {std::move(name), mean, std::sqrt(var / nf), n, false};
}

}  // namespace

SamplerConfig::SamplerConfig(std::uint64_t seed, std::uint64_t samples, unsigned workers)
    : seed(seed), samples(samples), workers(workers) {
  if (samples < 1) throw std::invalid_argument("SamplerConfig: samples must be >= 1");
  if (workers < 1) throw std::invalid_argument("SamplerConfig: workers must be >= 1");
}

std::vector<TrajectorySample> sample_trajectories(const ProtocolSpec& spec,
                                                  const SamplerConfig& cfg) {
  const OutcomeTable table(spec);
  std::vector<TrajectorySample> out(cfg.samples);
  run_partitioned(cfg.samples, cfg.workers, [&](unsigned, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t j = lo; j < hi; ++j) {
      const int k = table.draw(Philox4x64::uniform_at(cfg.seed, 0, j));
      out[j] = {kOutcomeOrder[k].first, kOutcomeOrder[k].second, table.work[k]};
    }
  });
  return out;
}

EstimateReport estimate_jarzynski(const ProtocolSpec& spec, const SamplerConfig& cfg) {
  const OutcomeTable table(spec);
  // Same exponent convention as jarzynski_average: beta (w + dF).
  const double df = free_energy_difference(spec);
  std::array<double, 4> value;
  for (int k = 0; k < 4; ++k) value[k] = std::exp(spec.beta * (table.work[k] + df));

  std::vector<MomentAccumulator> parts(cfg.workers);
  run_partitioned(cfg.samples, cfg.workers, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
    MomentAccumulator acc;
    for (std::uint64_t j = lo; j < hi; ++j) {
      const double x = value[table.draw(Philox4x64::uniform_at(cfg.seed, 0, j))];
      acc.sum += x;
      acc.sum_sq += x * x;
    }
    parts[w] = acc;
  });
  return report_from("jarzynski", parts, cfg.samples);
}

std::vector<EstimateReport> estimate_moments(const ProtocolSpec& spec, const SamplerConfig& cfg,
                                             std::span<const int> orders) {
  for (int k : orders)
    if (k < 0 || k > kMaxMomentOrder)
      throw std::invalid_argument("estimate_moments: order must be in [0, 60]");

  const OutcomeTable table(spec);
  const std::size_t n_orders = orders.size();
  // w^k per outcome, precomputed once
  std::vector<std::array<double, 4>> powers(n_orders);
  for (std::size_t i = 0; i < n_orders; ++i)
    for (int k = 0; k < 4; ++k) powers[i][k] = std::pow(table.work[k], orders[i]);

  std::vector<std::vector<MomentAccumulator>> parts(n_orders,
                                                    std::vector<MomentAccumulator>(cfg.workers));
  run_partitioned(cfg.samples, cfg.workers, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
    std::vector<MomentAccumulator> acc(n_orders);
    for (std::uint64_t j = lo; j < hi; ++j) {
      const int k = table.draw(Philox4x64::uniform_at(cfg.seed, 0, j));
      for (std::size_t i = 0; i < n_orders; ++i) {
        const double x = powers[i][k];
        acc[i].sum += x;
        acc[i].sum_sq += x * x;
      }
    }
    for (std::size_t i = 0; i < n_orders; ++i) parts[i][w] = acc[i];
  });

  std::vector<EstimateReport> reports;
  reports.reserve(n_orders);
  for (std::size_t i = 0; i < n_orders; ++i)
    reports.push_back(
        report_from("moment_" + std::to_string(orders[i]), parts[i], cfg.samples));
  return reports;
}

}  // namespace tpmlab
