#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "fac/density.hpp"
#include "fac/partition.hpp"
#include "fac/rng.hpp"

namespace fac {

/// One experience tuple, the unit of replay storage.
struct Transition {
  Vector s;
  Vector a;
  double r = 0.0;
  Vector s_next;
  bool done = false;
};

struct InsertOutcome {
  bool accepted = true;
  double rde_value = 0.0;
  AbstractStateId cell;
};

/// Capacity-bounded FIFO transition store. The training loop is the sole
/// writer; sampling reads an immutable view.
class ReplayBuffer {
 public:
  virtual ~ReplayBuffer() = default;

  virtual InsertOutcome insert(const Transition& t) = 0;
  virtual std::size_t size() const = 0;
  virtual std::size_t capacity() const = 0;
  virtual const Transition& at(std::size_t i) const = 0;

  /// Installs the partition built after warm-up. A gated buffer re-gates its
  /// accumulated contents in arrival order; the plain baseline ignores it.
  virtual void activate(const PartitionSpec& spec) = 0;
};

/// Uniform sampling with replacement; deterministic under a fixed rng.
std::vector<std::size_t> sample_minibatch(const ReplayBuffer& buffer,
                                          std::size_t b, Rng& rng);

/// GAC baseline: every transition is stored unconditionally.
class PlainBuffer final : public ReplayBuffer {
 public:
  explicit PlainBuffer(std::size_t capacity) : capacity_(capacity) {}

  InsertOutcome insert(const Transition& t) override;
  std::size_t size() const override { return storage_.size(); }
  std::size_t capacity() const override { return capacity_; }
  const Transition& at(std::size_t i) const override { return storage_[i]; }
  void activate(const PartitionSpec&) override {}
  std::size_t inserted() const { return inserted_; }

 private:
  std::size_t capacity_;
  std::deque<Transition> storage_;
  std::size_t inserted_ = 0;
};

/// FAC buffer: the insert path maps the state to its abstract cell and runs
/// the reward-density gate. Until a partition is installed, transitions
/// accumulate unconditionally (warm-up phase).
class FrugalBuffer final : public ReplayBuffer {
 public:
  FrugalBuffer(std::size_t capacity, GateConfig cfg)
      : capacity_(capacity), cfg_(cfg) {}

  InsertOutcome insert(const Transition& t) override;
  std::size_t size() const override { return storage_.size(); }
  std::size_t capacity() const override { return capacity_; }
  const Transition& at(std::size_t i) const override { return storage_[i]; }
  void activate(const PartitionSpec& spec) override;

  const RewardLedger& ledger() const { return ledger_; }
  const std::optional<PartitionSpec>& spec() const { return spec_; }
  const GateConfig& config() const { return cfg_; }
  std::size_t inserted() const { return inserted_; }
  std::size_t rejected() const { return rejected_; }

  /// Total reward entries across all ledger cells; equals size() whenever a
  /// partition is active.
  std::size_t ledger_count() const;

 private:
  friend FrugalBuffer snapshot_load(const std::string& path);

  void store(const Transition& t, const AbstractStateId& cell);

  std::size_t capacity_;
  GateConfig cfg_;
  std::deque<Transition> storage_;
  RewardLedger ledger_;
  std::optional<PartitionSpec> spec_;
  std::size_t inserted_ = 0;
  std::size_t rejected_ = 0;
};

/// Binary snapshot (magic "FACB", versioned, CRC32-terminated); load
/// reproduces storage order, ledger, spec, config, and counters exactly.
void snapshot_save(const FrugalBuffer& buffer, const std::string& path);
FrugalBuffer snapshot_load(const std::string& path);

/// Same container with no partition section; loads back as an ungated buffer.
void snapshot_save(const PlainBuffer& buffer, const std::string& path);

}  // namespace fac
