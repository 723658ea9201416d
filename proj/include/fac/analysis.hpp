#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fac/partition.hpp"
#include "fac/replay.hpp"
#include "fac/runlog.hpp"

namespace fac {

/// Per-run summary: convergence point, final buffer size, and the final
/// evaluation return statistics.
struct MetricsRow {
  long cp = 0;
  std::size_t buffer_size = 0;
  double reward_mean = 0.0;
  double reward_std = 0.0;
};

struct MetricDeltas {
  double delta_cp;      // percent improvement in convergence
  double delta_buffer;  // percent reduction in buffer size
  double delta_reward;  // percent change in accumulated reward
  double p;             // relative per-sample efficiency
};

/// Earliest step from which every later evaluation stays within the top-10%
/// band of the best observed value. The curve is shifted by its minimum
/// first so the band is well defined for negative returns; the final step is
/// returned if the curve never settles.
long convergence_point(std::span<const std::pair<long, double>> eval_curve);

/// Table-style comparison of a baseline row against a gated-buffer row.
/// Rewards <= 0 are first translated by |R_B| + |R_F| so the reward ratio
/// and P stay meaningful.
MetricDeltas metric_deltas(const MetricsRow& base, const MetricsRow& fac_row);

/// (lambda+1) * ln(lambda+1) / m: the buffer entropy gained by deduplicating
/// lambda copies of one sample among m.
double entropy_delta_closed_form(long m, long lambda);

/// -sum p ln p with 0 ln 0 = 0; rejects inputs that are not a distribution.
double entropy_brute_force(std::span<const double> probabilities);

/// Monte-Carlo ratio of minibatch-mean variance with (zeta+1 copies of one
/// draw per batch) vs. all-distinct batches of the same size; approaches
/// (b + zeta^2 + zeta) / b.
double variance_ratio_experiment(int b, int zeta, long trials,
                                 std::uint64_t seed);

/// Unordered stored pairs sharing an abstract cell with rewards within beta
/// of each other.
std::size_t duplicate_census(const ReplayBuffer& buffer,
                             const PartitionSpec& spec, double beta);
std::size_t duplicate_census(const FrugalBuffer& buffer, double beta);

/// Summarizes a completed run log into a metrics row.
MetricsRow run_metrics(const RunLog& log);

}  // namespace fac
