#include "fac/replay.hpp"

#include <algorithm>
#include <cmath>

#include "fac/detail/binio.hpp"

namespace fac {

namespace {

void check_finite(const Transition& t) {
  if (!t.s.allFinite() || !t.a.allFinite() || !t.s_next.allFinite() ||
      !std::isfinite(t.r))
    throw NonFiniteTransition("transition contains NaN/Inf");
}

}  // namespace

std::vector<std::size_t> sample_minibatch(const ReplayBuffer& buffer,
                                          std::size_t b, Rng& rng) {
  if (buffer.size() == 0) throw EmptyBuffer("cannot sample an empty buffer");
  std::vector<std::size_t> idx(b);
  for (auto& i : idx) i = rng.index(buffer.size());
  return idx;
}

InsertOutcome PlainBuffer::insert(const Transition& t) {
  check_finite(t);
  if (storage_.size() == capacity_) storage_.pop_front();
  storage_.push_back(t);
  ++inserted_;
  return {};
}

void FrugalBuffer::store(const Transition& t, const AbstractStateId& cell) {
  if (storage_.size() == capacity_) {
    const Transition& old = storage_.front();
    if (spec_) {
      const AbstractStateId old_cell = map_state(*spec_, old.s);
      auto it = ledger_.find(old_cell);
      if (it != ledger_.end()) {
        auto pos = std::find(it->second.begin(), it->second.end(), old.r);
        if (pos != it->second.end()) it->second.erase(pos);
        if (it->second.empty()) ledger_.erase(it);
      }
    }
    storage_.pop_front();
  }
  storage_.push_back(t);
  if (spec_) ledger_[cell].push_back(t.r);
}

InsertOutcome FrugalBuffer::insert(const Transition& t) {
  check_finite(t);
  if (!spec_) {
    // Warm-up: no partition yet, accumulate unconditionally.
    store(t, {});
    ++inserted_;
    return {};
  }
  const AbstractStateId cell = map_state(*spec_, t.s);
  const GateDecision d = gate_decision(t.r, cell, ledger_, cfg_);
  if (d.accept) {
    store(t, cell);
    ++inserted_;
  } else {
    ++rejected_;
  }
  return {d.accept, d.rde, cell};
}

void FrugalBuffer::activate(const PartitionSpec& spec) {
  spec_ = spec;
  std::deque<Transition> pending;
  pending.swap(storage_);
  ledger_.clear();
  inserted_ = 0;
  rejected_ = 0;
  for (const Transition& t : pending) insert(t);
}

std::size_t FrugalBuffer::ledger_count() const {
  std::size_t n = 0;
  for (const auto& [cell, rewards] : ledger_) n += rewards.size();
  return n;
}

// ---------------------------------------------------------------------------
// Snapshot persistence
// ---------------------------------------------------------------------------

namespace {
constexpr std::uint32_t kSnapshotVersion = 1;
}

void snapshot_save(const FrugalBuffer& buffer, const std::string& path) {
  detail::Writer w;
  w.buf.append("FACB", 4);
  w.u32(kSnapshotVersion);

  const std::size_t count = buffer.size();
  const std::size_t p = count > 0 ? buffer.at(0).s.size() : 0;
  const std::size_t q = count > 0 ? buffer.at(0).a.size() : 0;
  const auto& spec = buffer.spec();
  const std::size_t k = spec ? spec->dims() : 0;

  w.u32(static_cast<std::uint32_t>(p));
  w.u32(static_cast<std::uint32_t>(q));
  w.u64(buffer.capacity());
  w.u64(count);
  w.u32(static_cast<std::uint32_t>(k));

  if (spec) {
    for (int d : spec->kappa) w.i32(d);
    for (double v : spec->lower) w.f64(v);
    for (double v : spec->upper) w.f64(v);
    for (std::int32_t v : spec->mu) w.i32(v);
  }

  const GateConfig& cfg = buffer.config();
  w.f64(cfg.epsilon);
  w.f64(cfg.eta);
  w.f64(cfg.beta);
  w.f64(cfg.bandwidth);
  w.u8(cfg.normalized ? 1 : 0);
  w.u64(buffer.inserted());
  w.u64(buffer.rejected());

  for (std::size_t i = 0; i < count; ++i) {
    const Transition& t = buffer.at(i);
    w.vec(t.s);
    w.vec(t.a);
    w.f64(t.r);
    w.vec(t.s_next);
    w.u8(t.done ? 1 : 0);
  }

  // Ledger cells in a deterministic order.
  std::vector<const RewardLedger::value_type*> cells;
  for (const auto& kv : buffer.ledger()) cells.push_back(&kv);
  std::sort(cells.begin(), cells.end(), [](const auto* a, const auto* b) {
    return a->first.cell < b->first.cell;
  });
  w.u64(cells.size());
  for (const auto* kv : cells) {
    for (std::int32_t c : kv->first.cell) w.i32(c);
    w.u64(kv->second.size());
    for (double r : kv->second) w.f64(r);
  }

  w.finish(path);
}

FrugalBuffer snapshot_load(const std::string& path) {
  detail::Reader r(path, "FACB");
  if (r.u32() != kSnapshotVersion) throw FormatError("unsupported version");
  const std::size_t p = r.u32();
  const std::size_t q = r.u32();
  const std::size_t capacity = r.u64();
  const std::size_t count = r.u64();
  const std::size_t k = r.u32();

  std::optional<PartitionSpec> spec;
  if (k > 0) {
    PartitionSpec s;
    for (std::size_t i = 0; i < k; ++i) s.kappa.push_back(r.i32());
    for (std::size_t i = 0; i < k; ++i) s.lower.push_back(r.f64());
    for (std::size_t i = 0; i < k; ++i) s.upper.push_back(r.f64());
    for (std::size_t i = 0; i < k; ++i) s.mu.push_back(r.i32());
    spec = std::move(s);
  }

  GateConfig cfg;
  cfg.epsilon = r.f64();
  cfg.eta = r.f64();
  cfg.beta = r.f64();
  cfg.bandwidth = r.f64();
  cfg.normalized = r.u8() != 0;

  FrugalBuffer buffer(capacity, cfg);
  buffer.spec_ = spec;
  buffer.inserted_ = r.u64();
  buffer.rejected_ = r.u64();

  for (std::size_t i = 0; i < count; ++i) {
    Transition t;
    t.s = r.vec(p);
    t.a = r.vec(q);
    t.r = r.f64();
    t.s_next = r.vec(p);
    t.done = r.u8() != 0;
    buffer.storage_.push_back(std::move(t));
  }

  const std::size_t ncells = r.u64();
  for (std::size_t i = 0; i < ncells; ++i) {
    AbstractStateId id;
    for (std::size_t d = 0; d < k; ++d) id.cell.push_back(r.i32());
    const std::size_t nr = r.u64();
    std::vector<double> rewards(nr);
    for (auto& v : rewards) v = r.f64();
    buffer.ledger_.emplace(std::move(id), std::move(rewards));
  }

  r.expect_end();
  return buffer;
}

void snapshot_save(const PlainBuffer& buffer, const std::string& path) {
  detail::Writer w;
  w.buf.append("FACB", 4);
  w.u32(kSnapshotVersion);
  const std::size_t count = buffer.size();
  const std::size_t p = count > 0 ? buffer.at(0).s.size() : 0;
  const std::size_t q = count > 0 ? buffer.at(0).a.size() : 0;
  w.u32(static_cast<std::uint32_t>(p));
  w.u32(static_cast<std::uint32_t>(q));
  w.u64(buffer.capacity());
  w.u64(count);
  w.u32(0);  // no partition section

  const GateConfig cfg;
  w.f64(cfg.epsilon);
  w.f64(cfg.eta);
  w.f64(cfg.beta);
  w.f64(cfg.bandwidth);
  w.u8(cfg.normalized ? 1 : 0);
  w.u64(buffer.inserted());
  w.u64(0);

  for (std::size_t i = 0; i < count; ++i) {
    const Transition& t = buffer.at(i);
    w.vec(t.s);
    w.vec(t.a);
    w.f64(t.r);
    w.vec(t.s_next);
    w.u8(t.done ? 1 : 0);
  }
  w.u64(0);  // empty ledger
  w.finish(path);
}

}  // namespace fac
