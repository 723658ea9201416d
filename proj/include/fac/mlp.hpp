#pragma once

#include <vector>

#include "fac/linalg.hpp"
#include "fac/rng.hpp"

namespace fac {

/// Fully connected net with tanh hidden layers. The output head is either
/// linear (critic) or tanh scaled to the action range (actor).
struct Mlp {
  enum class Head { Linear, TanhScaled };

  std::vector<Matrix> w;  // w[l] is out x in
  std::vector<Vector> b;
  Head head = Head::Linear;
  double action_scale = 1.0;

  std::size_t layers() const { return w.size(); }
  Eigen::Index in_dim() const { return w.front().cols(); }
  Eigen::Index out_dim() const { return w.back().rows(); }
  bool finite() const;
};

/// widths = {in, hidden..., out}; weights drawn uniform in +-1/sqrt(fan_in).
Mlp mlp_create(const std::vector<int>& widths, Mlp::Head head, double action_scale,
               Rng& rng);

struct ForwardCache {
  Matrix input;              // n x in
  std::vector<Matrix> act;   // post-activation per layer, act.back() = output
};

/// Rows of x are samples.
Matrix mlp_forward(const Mlp& net, const Matrix& x);
Matrix mlp_forward(const Mlp& net, const Matrix& x, ForwardCache& cache);

struct MlpGrads {
  std::vector<Matrix> w;
  std::vector<Vector> b;
  Matrix input;  // gradient w.r.t. the input batch

  void scale(double f);
  void add(const MlpGrads& o);
};

/// Backpropagates `upstream` (n x out, dLoss/dOutput) through the cached
/// forward pass.
MlpGrads mlp_gradient(const Mlp& net, const ForwardCache& cache,
                      const Matrix& upstream);

/// Adam moment accumulators shaped like the parameters.
struct AdamState {
  std::vector<Matrix> mw, vw;
  std::vector<Vector> mb, vb;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  explicit AdamState(const Mlp& net);
};

/// One Adam descent step: params -= lr * mhat / (sqrt(vhat) + eps).
void adam_step(Mlp& net, const MlpGrads& grads, AdamState& state, double lr);

/// Plain SGD descent step, for the ablation switch.
void sgd_step(Mlp& net, const MlpGrads& grads, double lr);

/// target = tau * online + (1 - tau) * target (Polyak smoothing).
void polyak_update(Mlp& target, const Mlp& online, double tau);

/// Binary checkpoint (magic "FACP", versioned, CRC32-terminated).
void policy_save(const Mlp& net, const std::string& path);
Mlp policy_load(const std::string& path);

}  // namespace fac
