#include "fac/mlp.hpp"

#include <cmath>

#include "fac/detail/binio.hpp"

namespace fac {

bool Mlp::finite() const {
  for (const auto& m : w)
    if (!m.allFinite()) return false;
  for (const auto& v : b)
    if (!v.allFinite()) return false;
  return true;
}

Mlp mlp_create(const std::vector<int>& widths, Mlp::Head head,
               double action_scale, Rng& rng) {
  if (widths.size() < 2) throw ShapeMismatch("need at least input and output");
  Mlp net;
  net.head = head;
  net.action_scale = action_scale;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const int in = widths[l];
    const int out = widths[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Matrix w(out, in);
    for (int i = 0; i < out; ++i)
      for (int j = 0; j < in; ++j) w(i, j) = rng.uniform(-bound, bound);
    Vector b(out);
    for (int i = 0; i < out; ++i) b(i) = rng.uniform(-bound, bound);
    net.w.push_back(std::move(w));
    net.b.push_back(std::move(b));
  }
  return net;
}

Matrix mlp_forward(const Mlp& net, const Matrix& x, ForwardCache& cache) {
  if (x.cols() != net.in_dim()) throw ShapeMismatch("input width mismatch");
  cache.input = x;
  cache.act.clear();
  Matrix a = x;
  for (std::size_t l = 0; l < net.layers(); ++l) {
    Matrix z = (a * net.w[l].transpose()).rowwise() + net.b[l].transpose();
    const bool last = l + 1 == net.layers();
    if (!last) {
      a = z.array().tanh();
    } else if (net.head == Mlp::Head::TanhScaled) {
      a = net.action_scale * z.array().tanh();
    } else {
      a = std::move(z);
    }
    cache.act.push_back(a);
  }
  return cache.act.back();
}

Matrix mlp_forward(const Mlp& net, const Matrix& x) {
  ForwardCache cache;
  return mlp_forward(net, x, cache);
}

MlpGrads mlp_gradient(const Mlp& net, const ForwardCache& cache,
                      const Matrix& upstream) {
  const std::size_t L = net.layers();
  MlpGrads g;
  g.w.resize(L);
  g.b.resize(L);

  Matrix delta;  // dLoss/dz of the current layer
  const Matrix& out = cache.act.back();
  if (net.head == Mlp::Head::TanhScaled) {
    const double s = net.action_scale;
    delta = upstream.array() * (s * (1.0 - (out.array() / s).square()));
  } else {
    delta = upstream;
  }

  for (std::size_t l = L; l-- > 0;) {
    const Matrix& below = l == 0 ? cache.input : cache.act[l - 1];
    g.w[l] = delta.transpose() * below;
    g.b[l] = delta.colwise().sum().transpose();
    Matrix da = delta * net.w[l];
    if (l > 0) {
      const Matrix& a = cache.act[l - 1];
      delta = da.array() * (1.0 - a.array().square());
    } else {
      g.input = std::move(da);
    }
  }
  return g;
}

void MlpGrads::scale(double f) {
  for (auto& m : w) m *= f;
  for (auto& v : b) v *= f;
  if (input.size() > 0) input *= f;
}

void MlpGrads::add(const MlpGrads& o) {
  for (std::size_t l = 0; l < w.size(); ++l) {
    w[l] += o.w[l];
    b[l] += o.b[l];
  }
}

AdamState::AdamState(const Mlp& net) {
  for (const auto& m : net.w) {
    mw.push_back(Matrix::Zero(m.rows(), m.cols()));
    vw.push_back(Matrix::Zero(m.rows(), m.cols()));
  }
  for (const auto& v : net.b) {
    mb.push_back(Vector::Zero(v.size()));
    vb.push_back(Vector::Zero(v.size()));
  }
}

void adam_step(Mlp& net, const MlpGrads& grads, AdamState& st, double lr) {
  ++st.step;
  const double c1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.step));
  const double c2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.step));
  for (std::size_t l = 0; l < net.layers(); ++l) {
    st.mw[l] = st.beta1 * st.mw[l] + (1.0 - st.beta1) * grads.w[l];
    st.vw[l] = st.beta2 * st.vw[l].array() +
               (1.0 - st.beta2) * grads.w[l].array().square();
    net.w[l].array() -= lr * (st.mw[l].array() / c1) /
                        ((st.vw[l].array() / c2).sqrt() + st.eps);

    st.mb[l] = st.beta1 * st.mb[l] + (1.0 - st.beta1) * grads.b[l];
    st.vb[l] = st.beta2 * st.vb[l].array() +
               (1.0 - st.beta2) * grads.b[l].array().square();
    net.b[l].array() -= lr * (st.mb[l].array() / c1) /
                        ((st.vb[l].array() / c2).sqrt() + st.eps);
  }
}

void sgd_step(Mlp& net, const MlpGrads& grads, double lr) {
  for (std::size_t l = 0; l < net.layers(); ++l) {
    net.w[l] -= lr * grads.w[l];
    net.b[l] -= lr * grads.b[l];
  }
}

void polyak_update(Mlp& target, const Mlp& online, double tau) {
  for (std::size_t l = 0; l < target.layers(); ++l) {
    target.w[l] = tau * online.w[l] + (1.0 - tau) * target.w[l];
    target.b[l] = tau * online.b[l] + (1.0 - tau) * target.b[l];
  }
}

// ---------------------------------------------------------------------------
// Checkpoint
// ---------------------------------------------------------------------------

namespace {
constexpr std::uint32_t kPolicyVersion = 1;
}

void policy_save(const Mlp& net, const std::string& path) {
  detail::Writer w;
  w.buf.append("FACP", 4);
  w.u32(kPolicyVersion);
  w.u8(net.head == Mlp::Head::TanhScaled ? 1 : 0);
  w.f64(net.action_scale);
  w.u32(static_cast<std::uint32_t>(net.layers()));
  w.u32(static_cast<std::uint32_t>(net.in_dim()));
  for (const auto& m : net.w) w.u32(static_cast<std::uint32_t>(m.rows()));
  for (std::size_t l = 0; l < net.layers(); ++l) {
    const Matrix& m = net.w[l];
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) w.f64(m(i, j));
    w.vec(net.b[l]);
  }
  w.finish(path);
}

Mlp policy_load(const std::string& path) {
  detail::Reader r(path, "FACP");
  if (r.u32() != kPolicyVersion) throw FormatError("unsupported version");
  Mlp net;
  net.head = r.u8() != 0 ? Mlp::Head::TanhScaled : Mlp::Head::Linear;
  net.action_scale = r.f64();
  const std::size_t layers = r.u32();
  std::vector<std::size_t> widths{r.u32()};
  for (std::size_t l = 0; l < layers; ++l) widths.push_back(r.u32());
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix m(widths[l + 1], widths[l]);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.f64();
    net.w.push_back(std::move(m));
    net.b.push_back(r.vec(widths[l + 1]));
  }
  r.expect_end();
  return net;
}

}  // namespace fac
