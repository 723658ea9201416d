#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fac/linalg.hpp"

namespace fac {

/// One cell of the grid partition over the selected state dimensions.
struct AbstractStateId {
  std::vector<std::int32_t> cell;

  bool operator==(const AbstractStateId& o) const { return cell == o.cell; }
};

struct AbstractStateIdHash {
  std::size_t operator()(const AbstractStateId& id) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : id.cell) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

/// Uniform grid over the selected dimensions; maps raw states to cell ids.
/// Bounds come from the initial rollout, widened by 1% of the range (or by
/// 1.0 for a zero range) so boundary samples fall strictly inside. States
/// outside the bounds clamp to the edge cells.
struct PartitionSpec {
  std::vector<int> kappa;        // selected state-dimension indices
  std::vector<double> lower;     // per-selected-dimension lower bound
  std::vector<double> upper;     // per-selected-dimension upper bound
  std::vector<std::int32_t> mu;  // per-selected-dimension cell count

  std::size_t dims() const { return kappa.size(); }
};

PartitionSpec build_partition(const Matrix& omega, const DimensionSelection& sel,
                              const std::vector<std::int32_t>& mu);

/// Cell lookup by half-open uniform-grid indexing, floor((x - lower)/width),
/// clamped into [0, mu-1]. Equals the nearest-cell-center arg-min on a
/// uniform grid with ties broken toward the upper cell.
AbstractStateId map_state(const PartitionSpec& spec, const Vector& s);

}  // namespace fac
