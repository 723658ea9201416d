#pragma once

#include <string>
#include <vector>

namespace fac {

struct StepRecord {
  long step;
  double reward;
  bool accepted;
  double rde;
  std::size_t buf;  // buffer size after the insertion attempt
};

struct EvalRecord {
  long step;
  double eval_mean;
  double eval_std;
};

/// Per-step training record plus periodic evaluation snapshots.
struct RunLog {
  std::vector<StepRecord> steps;
  std::vector<EvalRecord> evals;
  double wall_time_sec = 0.0;
  std::size_t final_buffer = 0;
};

/// JSON Lines serialization: one object per step, eval objects interleaved at
/// their step, one terminal object with wall time and final buffer size.
void runlog_save(const RunLog& log, const std::string& path);
RunLog runlog_load(const std::string& path);

}  // namespace fac
