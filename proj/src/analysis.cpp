#include "fac/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "fac/rng.hpp"

namespace fac {

long convergence_point(std::span<const std::pair<long, double>> eval_curve) {
  if (eval_curve.empty()) throw EmptyCurve("empty evaluation curve");

  double lo = eval_curve[0].second, hi = eval_curve[0].second;
  for (const auto& [step, v] : eval_curve) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double threshold = 0.9 * (hi - lo);  // in shifted coordinates

  // Longest suffix that stays inside the band.
  std::size_t first_in_band = eval_curve.size();
  for (std::size_t j = eval_curve.size(); j-- > 0;) {
    if (eval_curve[j].second - lo >= threshold)
      first_in_band = j;
    else
      break;
  }
  if (first_in_band == eval_curve.size()) return eval_curve.back().first;
  return eval_curve[first_in_band].first;
}

MetricDeltas metric_deltas(const MetricsRow& base, const MetricsRow& fac_row) {
  if (base.cp == 0 || base.buffer_size == 0)
    throw DivisionDegenerate("baseline CP and buffer size must be nonzero");

  MetricDeltas d{};
  d.delta_cp = static_cast<double>(base.cp - fac_row.cp) /
               static_cast<double>(base.cp) * 100.0;
  d.delta_buffer =
      static_cast<double>(base.buffer_size) -
      static_cast<double>(fac_row.buffer_size);
  d.delta_buffer = d.delta_buffer / static_cast<double>(base.buffer_size) * 100.0;

  double rb = base.reward_mean;
  double rf = fac_row.reward_mean;
  if (rb <= 0.0 || rf <= 0.0) {
    const double shift = std::abs(rb) + std::abs(rf);
    rb += shift;
    rf += shift;
  }
  if (rb == 0.0 || fac_row.buffer_size == 0)
    throw DivisionDegenerate("translated baseline reward or FAC buffer is zero");
  d.delta_reward = (rf - rb) / rb * 100.0;
  d.p = (rf * static_cast<double>(base.buffer_size)) /
        (static_cast<double>(fac_row.buffer_size) * rb);
  return d;
}

double entropy_delta_closed_form(long m, long lambda) {
  if (m <= 2 || lambda < 0 || lambda >= m)
    throw DomainError("need m > 2 and 0 <= lambda < m");
  const double l1 = static_cast<double>(lambda + 1);
  return l1 * std::log(l1) / static_cast<double>(m);
}

double entropy_brute_force(std::span<const double> probabilities) {
  double sum = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw NotADistribution("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw NotADistribution("probabilities do not sum to 1");
  double h = 0.0;
  for (double p : probabilities)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double variance_ratio_experiment(int b, int zeta, long trials,
                                 std::uint64_t seed) {
  if (zeta < 0 || zeta >= b) throw DomainError("need 0 <= zeta < b");
  Rng rng(seed);

  auto variance_of_means = [&](bool with_duplicates) {
    double sum = 0.0, sumsq = 0.0;
    for (long t = 0; t < trials; ++t) {
      double batch_sum = 0.0;
      if (with_duplicates) {
        const double dup = rng.normal();
        batch_sum += dup * static_cast<double>(zeta + 1);
        for (int i = zeta + 1; i < b; ++i) batch_sum += rng.normal();
      } else {
        for (int i = 0; i < b; ++i) batch_sum += rng.normal();
      }
      const double mean = batch_sum / static_cast<double>(b);
      sum += mean;
      sumsq += mean * mean;
    }
    const double n = static_cast<double>(trials);
    const double mu = sum / n;
    return sumsq / n - mu * mu;
  };

  return variance_of_means(true) / variance_of_means(false);
}

std::size_t duplicate_census(const ReplayBuffer& buffer,
                             const PartitionSpec& spec, double beta) {
  std::unordered_map<AbstractStateId, std::vector<double>, AbstractStateIdHash>
      by_cell;
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const Transition& t = buffer.at(i);
    by_cell[map_state(spec, t.s)].push_back(t.r);
  }

  std::size_t pairs = 0;
  for (auto& [cell, rewards] : by_cell) {
    std::sort(rewards.begin(), rewards.end());
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < rewards.size(); ++hi) {
      while (rewards[hi] - rewards[lo] > beta) ++lo;
      pairs += hi - lo;
    }
  }
  return pairs;
}

std::size_t duplicate_census(const FrugalBuffer& buffer, double beta) {
  if (!buffer.spec()) throw DomainError("buffer has no partition");
  return duplicate_census(buffer, *buffer.spec(), beta);
}

MetricsRow run_metrics(const RunLog& log) {
  if (log.evals.empty()) throw EmptyCurve("run log has no evaluation records");
  std::vector<std::pair<long, double>> curve;
  curve.reserve(log.evals.size());
  for (const auto& e : log.evals) curve.emplace_back(e.step, e.eval_mean);

  MetricsRow row;
  row.cp = convergence_point(curve);
  row.buffer_size = log.final_buffer;
  row.reward_mean = log.evals.back().eval_mean;
  row.reward_std = log.evals.back().eval_std;
  return row;
}

}  // namespace fac
