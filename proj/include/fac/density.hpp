#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "fac/errors.hpp"
#include "fac/partition.hpp"

namespace fac {

/// Insertion-gate hyperparameters. Bandwidth defaults to beta so that a cell
/// holding exactly one reward always rejects an exact duplicate of it.
struct GateConfig {
  double epsilon = 0.2;    // base acceptance threshold
  double eta = 1e5;        // threshold decay scale
  double beta = 0.2;       // half-width of the reward integration window
  double bandwidth = 0.2;  // kernel bandwidth h
  bool normalized = true;  // divide the kernel sum by the reward count
};

/// Per-cell accepted rewards; one entry per transition stored in the
/// paired buffer.
using RewardLedger =
    std::unordered_map<AbstractStateId, std::vector<double>, AbstractStateIdHash>;

struct GateDecision {
  bool accept;
  double rde;
};

/// Epanechnikov kernel (3/(4h))(1 - (u/h)^2) on |u| <= h.
double kernel_eval(double u, double h);

/// Mixture density (1/n) * sum_i K(r - rewards[i]; h); 0 for an empty list.
double kde_density(double r, std::span<const double> rewards, double h);

/// Reward density estimate: integral of the mixture over [r-beta, r+beta],
/// computed exactly by summing each kernel piece's polynomial antiderivative
/// over its clipped overlap with the window.
double rde(double r, std::span<const double> rewards, const GateConfig& cfg);

/// epsilon / exp(n / eta); strictly positive, non-increasing in n.
double dynamic_epsilon(const GateConfig& cfg, std::size_t n);

/// Accept iff rde < dynamic_epsilon for the cell's current reward count.
/// On Accept the caller must append r to the cell's ledger entry.
GateDecision gate_decision(double r, const AbstractStateId& cell,
                           const RewardLedger& ledger, const GateConfig& cfg);

namespace testing {
/// Test hook: scales the kernel's normalization constant. Used only by the
/// self-test mutation check; 1.0 in normal operation.
extern double kernel_scale_hook;
}  // namespace testing

}  // namespace fac
