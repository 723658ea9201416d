#include "fac/learner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "fac/partition.hpp"

namespace fac {

namespace {

Matrix row_of(const Vector& v) { return v.transpose(); }

Vector clip_to(const Vector& a, double lo, double hi) {
  return a.cwiseMax(lo).cwiseMin(hi);
}

std::vector<int> net_widths(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> w{in};
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(out);
  return w;
}

struct Batch {
  Matrix s, a, s2;
  Vector r, not_done;
};

Batch gather(const ReplayBuffer& buffer, const std::vector<std::size_t>& idx,
             int p, int q) {
  const auto b = static_cast<Eigen::Index>(idx.size());
  Batch out{Matrix(b, p), Matrix(b, q), Matrix(b, p), Vector(b), Vector(b)};
  for (Eigen::Index i = 0; i < b; ++i) {
    const Transition& t = buffer.at(idx[i]);
    out.s.row(i) = t.s;
    out.a.row(i) = t.a;
    out.s2.row(i) = t.s_next;
    out.r(i) = t.r;
    out.not_done(i) = t.done ? 0.0 : 1.0;
  }
  return out;
}

}  // namespace

double td_delta(const Transition& t, const Mlp& critic_target,
                const Mlp& actor_target, const Mlp& critic, double gamma) {
  Matrix sa(1, t.s.size() + t.a.size());
  sa << row_of(t.s), row_of(t.a);
  const double q = mlp_forward(critic, sa)(0, 0);

  const Matrix a2 = mlp_forward(actor_target, row_of(t.s_next));
  Matrix sa2(1, t.s_next.size() + a2.cols());
  sa2 << row_of(t.s_next), a2;
  const double qt = mlp_forward(critic_target, sa2)(0, 0);

  return t.r + (t.done ? 0.0 : gamma * qt) - q;
}

TrainResult train(Env& env, ReplayBuffer& buffer, const TrainConfig& cfg) {
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) throw DomainError("gamma");
  if (cfg.batch < 1) throw DomainError("batch");
  if (cfg.warmup_steps > cfg.total_steps)
    throw DomainError("warmup_steps must not exceed total_steps");

  const EnvSpec& es = env.spec();
  const int p = es.obs_dim;
  const int q = es.action_dim;
  const double amax = es.action_high;

  Rng root(cfg.seed);
  Rng env_rng = root.split(0);
  Rng init_rng = root.split(1);
  Rng sampler_rng = root.split(2);
  Rng noise_rng = root.split(3);
  Rng eval_seed_rng = root.split(4);

  Mlp actor = mlp_create(net_widths(p, cfg.hidden, q), Mlp::Head::TanhScaled,
                         amax, init_rng);
  Mlp critic1 = mlp_create(net_widths(p + q, cfg.hidden, 1), Mlp::Head::Linear,
                           1.0, init_rng);
  Mlp critic2 = mlp_create(net_widths(p + q, cfg.hidden, 1), Mlp::Head::Linear,
                           1.0, init_rng);
  Mlp actor_t = actor, critic1_t = critic1, critic2_t = critic2;
  AdamState opt_actor(actor), opt_c1(critic1), opt_c2(critic2);

  RunLog log;
  const auto t_start = std::chrono::steady_clock::now();

  const long warmup = std::min(cfg.warmup_steps, cfg.total_steps);
  Matrix omega(std::max<long>(warmup, 1), p);

  Vector obs = env.reset(env_rng);
  long t = 0;

  // Initial rollout under a uniform random policy; insertions bypass the
  // gate until the partition exists.
  for (; t < warmup; ++t) {
    omega.row(t) = obs;
    Vector a(q);
    for (int i = 0; i < q; ++i)
      a(i) = noise_rng.uniform(es.action_low, es.action_high);
    const StepResult sr = env.step(a);
    const Transition tr{obs, a, sr.reward, sr.obs, sr.done && !sr.truncated};
    const InsertOutcome out = buffer.insert(tr);
    log.steps.push_back({t, sr.reward, out.accepted, out.rde_value, buffer.size()});
    obs = sr.done ? env.reset(env_rng) : sr.obs;
  }

  if (t < cfg.total_steps) {
    DimensionSelection sel;
    try {
      sel = find_important_dimensions(omega, cfg.nu);
    } catch (const DegenerateRollout&) {
      // Constant rollout: fall back to the full state.
      for (int i = 0; i < p; ++i) {
        sel.kappa.push_back(i);
        sel.pivots.push_back(0.0);
      }
    }
    const std::vector<std::int32_t> mu(sel.kappa.size(), cfg.mu);
    buffer.activate(build_partition(omega, sel, mu));
  }

  for (; t < cfg.total_steps; ++t) {
    Vector a = mlp_forward(actor, row_of(obs)).transpose();
    if (!a.allFinite())
      throw DivergedTraining("non-finite action at step " + std::to_string(t));
    for (int i = 0; i < q; ++i) a(i) += noise_rng.normal() * cfg.noise_std * amax;
    a = clip_to(a, es.action_low, es.action_high);

    const StepResult sr = env.step(a);
    const Transition tr{obs, a, sr.reward, sr.obs, sr.done && !sr.truncated};
    const InsertOutcome out = buffer.insert(tr);
    log.steps.push_back({t, sr.reward, out.accepted, out.rde_value, buffer.size()});
    obs = sr.done ? env.reset(env_rng) : sr.obs;

    if (buffer.size() > 0) {
      const auto idx = sample_minibatch(buffer, cfg.batch, sampler_rng);
      const Batch batch = gather(buffer, idx, p, q);
      const auto b = static_cast<Eigen::Index>(idx.size());

      const Matrix a2 = mlp_forward(actor_t, batch.s2);
      Matrix sa2(b, p + q);
      sa2 << batch.s2, a2;
      const Vector q1t = mlp_forward(critic1_t, sa2);
      const Vector q2t = mlp_forward(critic2_t, sa2);
      const Vector y = batch.r.array() +
                       cfg.gamma * batch.not_done.array() *
                           q1t.array().min(q2t.array());

      Matrix sa(b, p + q);
      sa << batch.s, batch.a;
      const std::pair<Mlp*, AdamState*> critics[] = {{&critic1, &opt_c1},
                                                     {&critic2, &opt_c2}};
      for (auto [critic_ptr, opt_ptr] : critics) {
        Mlp& critic = *critic_ptr;
        AdamState& opt = *opt_ptr;
        ForwardCache cache;
        const Matrix qv = mlp_forward(critic, sa, cache);
        const Matrix upstream =
            (2.0 / static_cast<double>(b)) * (qv.col(0) - y);
        const MlpGrads g = mlp_gradient(critic, cache, upstream);
        if (cfg.use_sgd)
          sgd_step(critic, g, cfg.lr_critic);
        else
          adam_step(critic, g, opt, cfg.lr_critic);
      }

      if ((t + 1) % cfg.policy_delay == 0) {
        ForwardCache actor_cache;
        const Matrix apred = mlp_forward(actor, batch.s, actor_cache);
        Matrix sap(b, p + q);
        sap << batch.s, apred;
        ForwardCache critic_cache;
        mlp_forward(critic1, sap, critic_cache);
        const Matrix upstream =
            Matrix::Constant(b, 1, -1.0 / static_cast<double>(b));
        const MlpGrads cg = mlp_gradient(critic1, critic_cache, upstream);
        const Matrix da = cg.input.rightCols(q);
        const MlpGrads ag = mlp_gradient(actor, actor_cache, da);
        if (cfg.use_sgd)
          sgd_step(actor, ag, cfg.lr_actor);
        else
          adam_step(actor, ag, opt_actor, cfg.lr_actor);

        polyak_update(actor_t, actor, cfg.tau);
        polyak_update(critic1_t, critic1, cfg.tau);
        polyak_update(critic2_t, critic2, cfg.tau);
      }

      if ((t + 1) % 250 == 0 &&
          (!actor.finite() || !critic1.finite() || !critic2.finite()))
        throw DivergedTraining("non-finite parameters at step " +
                               std::to_string(t));
    }

    if (cfg.eval_interval > 0 && (t + 1) % cfg.eval_interval == 0) {
      auto eval_env = make_env(es.name);
      const EvalStats st =
          evaluate(actor, *eval_env, cfg.eval_episodes, eval_seed_rng.next_u64());
      log.evals.push_back({t, st.mean, st.std});
    }
  }

  log.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  log.final_buffer = buffer.size();
  return {std::move(actor), std::move(log)};
}

EvalStats evaluate(const Mlp& policy, Env& env, int episodes,
                   std::uint64_t seed) {
  if (episodes < 1) throw DomainError("episodes must be >= 1");
  Rng rng(seed);
  std::vector<double> returns;
  returns.reserve(episodes);
  for (int e = 0; e < episodes; ++e) {
    Vector obs = env.reset(rng);
    double ret = 0.0;
    while (true) {
      const Vector a = mlp_forward(policy, row_of(obs)).transpose();
      const StepResult sr = env.step(a);
      ret += sr.reward;
      obs = sr.obs;
      if (sr.done) break;
    }
    returns.push_back(ret);
  }
  const double n = static_cast<double>(returns.size());
  double mean = 0.0;
  for (double r : returns) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : returns) var += (r - mean) * (r - mean);
  return {mean, std::sqrt(var / n)};
}

}  // namespace fac
