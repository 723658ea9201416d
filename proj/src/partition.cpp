#include "fac/partition.hpp"

#include <algorithm>
#include <cmath>

namespace fac {

PartitionSpec build_partition(const Matrix& omega, const DimensionSelection& sel,
                              const std::vector<std::int32_t>& mu) {
  if (omega.rows() == 0) throw DegenerateRollout("empty rollout");
  if (mu.size() != sel.kappa.size())
    throw ShapeMismatch("mu length must match selected dimensions");

  PartitionSpec spec;
  spec.kappa = sel.kappa;
  spec.mu = mu;
  for (std::size_t i = 0; i < sel.kappa.size(); ++i) {
    if (mu[i] < 1) throw DomainError("mu must be >= 1");
    const auto col = omega.col(sel.kappa[i]);
    double lo = col.minCoeff();
    double hi = col.maxCoeff();
    const double range = hi - lo;
    const double pad = range > 0.0 ? 0.01 * range : 1.0;
    spec.lower.push_back(lo - pad);
    spec.upper.push_back(hi + pad);
  }
  return spec;
}

AbstractStateId map_state(const PartitionSpec& spec, const Vector& s) {
  if (!s.allFinite()) throw NonFiniteState("state contains NaN/Inf");

  AbstractStateId id;
  id.cell.reserve(spec.dims());
  for (std::size_t i = 0; i < spec.dims(); ++i) {
    const double x = s(spec.kappa[i]);
    const double width = (spec.upper[i] - spec.lower[i]) / spec.mu[i];
    auto idx = static_cast<std::int64_t>(
        std::floor((x - spec.lower[i]) / width));
    idx = std::clamp<std::int64_t>(idx, 0, spec.mu[i] - 1);
    id.cell.push_back(static_cast<std::int32_t>(idx));
  }
  return id;
}

}  // namespace fac
