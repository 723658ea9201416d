#include "fac/density.hpp"

#include <algorithm>
#include <cmath>

namespace fac {

namespace testing {
double kernel_scale_hook = 1.0;
}

double kernel_eval(double u, double h) {
  if (std::abs(u) > h) return 0.0;
  const double z = u / h;
  return testing::kernel_scale_hook * 0.75 / h * (1.0 - z * z);
}

double kde_density(double r, std::span<const double> rewards, double h) {
  if (rewards.empty()) return 0.0;
  double sum = 0.0;
  for (double ri : rewards) sum += kernel_eval(r - ri, h);
  return sum / static_cast<double>(rewards.size());
}

namespace {

// Antiderivative of the Epanechnikov kernel in centered coordinates:
// F(u) = (3/(4h)) (u - u^3/(3h^2)), valid on [-h, h].
double kernel_cdf_piece(double u, double h) {
  return testing::kernel_scale_hook * 0.75 / h * (u - u * u * u / (3.0 * h * h));
}

// Exact integral of one kernel centered at c over [lo, hi].
double kernel_integral(double c, double h, double lo, double hi) {
  const double a = std::max(lo - c, -h);
  const double b = std::min(hi - c, h);
  if (a >= b) return 0.0;
  return kernel_cdf_piece(b, h) - kernel_cdf_piece(a, h);
}

}  // namespace

double rde(double r, std::span<const double> rewards, const GateConfig& cfg) {
  if (rewards.empty()) return 0.0;
  double sum = 0.0;
  for (double ri : rewards)
    sum += kernel_integral(ri, cfg.bandwidth, r - cfg.beta, r + cfg.beta);
  return cfg.normalized ? sum / static_cast<double>(rewards.size()) : sum;
}

double dynamic_epsilon(const GateConfig& cfg, std::size_t n) {
  return cfg.epsilon / std::exp(static_cast<double>(n) / cfg.eta);
}

GateDecision gate_decision(double r, const AbstractStateId& cell,
                           const RewardLedger& ledger, const GateConfig& cfg) {
  if (!std::isfinite(r)) throw NonFiniteInput("reward is NaN/Inf");
  const auto it = ledger.find(cell);
  if (it == ledger.end()) return {true, 0.0};
  const double density = rde(r, it->second, cfg);
  return {density < dynamic_epsilon(cfg, it->second.size()), density};
}

}  // namespace fac
