#pragma once

#include <memory>
#include <string>

#include "fac/linalg.hpp"
#include "fac/rng.hpp"

namespace fac {

struct EnvSpec {
  std::string name;
  int obs_dim;
  int action_dim;
  double action_low;
  double action_high;
  int max_steps;
};

struct StepResult {
  Vector obs;
  double reward;
  bool done;       // episode ended (goal or horizon)
  bool truncated;  // ended by the time limit, not a true terminal state
};

/// Deterministic continuous-control environment; single-owner, sequential.
class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual Vector reset(Rng& rng) = 0;
  virtual StepResult step(const Vector& action) = 0;
};

/// Inverted pendulum swing-up. Observation (cos t, sin t, tdot); torque in
/// [-2, 2]; reward -(wrap(t)^2 + 0.1 tdot^2 + 0.001 u^2); 200-step horizon.
class Pendulum final : public Env {
 public:
  const EnvSpec& spec() const override;
  Vector reset(Rng& rng) override;
  StepResult step(const Vector& action) override;

  void set_state(double theta, double theta_dot);  // for tests

 private:
  Vector observe() const;
  double theta_ = 0.0;
  double theta_dot_ = 0.0;
  int steps_ = 0;
};

/// Continuous mountain car. Observation (position, velocity); force in
/// [-1, 1]; -0.1 a^2 per step, +100 on reaching position >= 0.45;
/// 999-step horizon.
class MountainCar final : public Env {
 public:
  const EnvSpec& spec() const override;
  Vector reset(Rng& rng) override;
  StepResult step(const Vector& action) override;

  void set_state(double position, double velocity);  // for tests

 private:
  Vector observe() const;
  double position_ = -0.5;
  double velocity_ = 0.0;
  int steps_ = 0;
};

/// Factory for the CLI names "pendulum" and "mountaincar".
std::unique_ptr<Env> make_env(const std::string& name);

}  // namespace fac
