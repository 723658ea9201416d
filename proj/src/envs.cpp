#include "fac/envs.hpp"

#include <algorithm>
#include <cmath>

#include "fac/errors.hpp"

namespace fac {

namespace {

constexpr double kPi = 3.141592653589793238462643;

double wrap_angle(double x) {
  // into [-pi, pi]
  x = std::fmod(x + kPi, 2.0 * kPi);
  if (x < 0.0) x += 2.0 * kPi;
  return x - kPi;
}

void check_action(const Vector& a, int dim) {
  if (a.size() != dim) throw ShapeMismatch("action dimension mismatch");
  if (!a.allFinite()) throw NonFiniteAction("action contains NaN/Inf");
}

}  // namespace

// ---------------------------------------------------------------------------
// Pendulum
// ---------------------------------------------------------------------------

const EnvSpec& Pendulum::spec() const {
  static const EnvSpec s{"pendulum", 3, 1, -2.0, 2.0, 200};
  return s;
}

Vector Pendulum::observe() const {
  Vector o(3);
  o << std::cos(theta_), std::sin(theta_), theta_dot_;
  return o;
}

Vector Pendulum::reset(Rng& rng) {
  theta_ = rng.uniform(-kPi, kPi);
  theta_dot_ = rng.uniform(-1.0, 1.0);
  steps_ = 0;
  return observe();
}

void Pendulum::set_state(double theta, double theta_dot) {
  theta_ = theta;
  theta_dot_ = theta_dot;
  steps_ = 0;
}

StepResult Pendulum::step(const Vector& action) {
  check_action(action, 1);
  constexpr double g = 10.0, m = 1.0, l = 1.0, dt = 0.05;
  const double u = std::clamp(action(0), -2.0, 2.0);

  const double th = wrap_angle(theta_);
  const double reward =
      -(th * th + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u);

  theta_dot_ += (3.0 * g / (2.0 * l) * std::sin(theta_) +
                 3.0 / (m * l * l) * u) *
                dt;
  theta_dot_ = std::clamp(theta_dot_, -8.0, 8.0);
  theta_ += theta_dot_ * dt;

  ++steps_;
  const bool horizon = steps_ >= spec().max_steps;
  return {observe(), reward, horizon, horizon};
}

// ---------------------------------------------------------------------------
// MountainCar (continuous)
// ---------------------------------------------------------------------------

const EnvSpec& MountainCar::spec() const {
  static const EnvSpec s{"mountaincar", 2, 1, -1.0, 1.0, 999};
  return s;
}

Vector MountainCar::observe() const {
  Vector o(2);
  o << position_, velocity_;
  return o;
}

Vector MountainCar::reset(Rng& rng) {
  position_ = rng.uniform(-0.6, -0.4);
  velocity_ = 0.0;
  steps_ = 0;
  return observe();
}

void MountainCar::set_state(double position, double velocity) {
  position_ = position;
  velocity_ = velocity;
  steps_ = 0;
}

StepResult MountainCar::step(const Vector& action) {
  check_action(action, 1);
  const double force = std::clamp(action(0), -1.0, 1.0);

  velocity_ += 0.0015 * force - 0.0025 * std::cos(3.0 * position_);
  velocity_ = std::clamp(velocity_, -0.07, 0.07);
  position_ += velocity_;
  position_ = std::clamp(position_, -1.2, 0.6);
  if (position_ <= -1.2 && velocity_ < 0.0) velocity_ = 0.0;

  ++steps_;
  const bool goal = position_ >= 0.45;
  double reward = -0.1 * force * force;
  if (goal) reward += 100.0;
  const bool horizon = steps_ >= spec().max_steps;
  return {observe(), reward, goal || horizon, horizon && !goal};
}

std::unique_ptr<Env> make_env(const std::string& name) {
  if (name == "pendulum") return std::make_unique<Pendulum>();
  if (name == "mountaincar") return std::make_unique<MountainCar>();
  throw DomainError("unknown environment: " + name);
}

}  // namespace fac
