#pragma once

#include <cstdint>

#include "fac/envs.hpp"
#include "fac/mlp.hpp"
#include "fac/replay.hpp"
#include "fac/runlog.hpp"

namespace fac {

struct TrainConfig {
  double gamma = 0.99;
  double lr_actor = 1e-3;
  double lr_critic = 1e-3;
  int batch = 64;
  long total_steps = 20000;   // T
  long warmup_steps = 1000;   // initial random rollout length
  double tau = 0.005;         // target smoothing coefficient
  double noise_std = 0.1;     // exploration noise std, times max action
  int policy_delay = 2;
  long eval_interval = 1000;
  int eval_episodes = 10;
  std::vector<int> hidden{64, 64};
  bool use_sgd = false;       // ablation: plain SGD instead of Adam
  double nu = 0.5;            // dimension-selection threshold
  std::int32_t mu = 50;       // grid cells per selected dimension
  std::uint64_t seed = 0;
};

struct TrainResult {
  Mlp policy;
  RunLog log;
};

/// One-step TD error with the max over actions taken by the target actor
/// (deterministic-policy reading).
double td_delta(const Transition& t, const Mlp& critic_target,
                const Mlp& actor_target, const Mlp& critic, double gamma);

/// Runs the full loop against the given buffer: random warm-up collecting the
/// rollout matrix, dimension selection, partition construction and buffer
/// activation, then gated insertion + TD3-style updates (twin critics,
/// delayed actor, Polyak targets) until total_steps. Deterministic given
/// cfg.seed.
TrainResult train(Env& env, ReplayBuffer& buffer, const TrainConfig& cfg);

struct EvalStats {
  double mean;
  double std;
};

/// Noise-free rollouts; sample mean and population std of undiscounted
/// episode returns.
EvalStats evaluate(const Mlp& policy, Env& env, int episodes,
                   std::uint64_t seed);

}  // namespace fac
