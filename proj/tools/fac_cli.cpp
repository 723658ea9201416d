#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include <fac/analysis.hpp>
#include <fac/learner.hpp>

#include "selftest.hpp"

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string env = "pendulum";
  std::string buffer = "frugal";
  long steps = 20000;
  long warmup = 1000;
  std::size_t capacity = 20000;
  std::uint64_t seed = 0;
  std::string out;

  fac::GateConfig gate;
  bool literal_kde = false;

  fac::TrainConfig learner;
};

void add_train_flags(CLI::App& cmd, RunConfig& rc) {
  cmd.add_option("--env", rc.env, "Environment name")
      ->check(CLI::IsMember({"pendulum", "mountaincar"}))
      ->capture_default_str();
  cmd.add_option("--buffer", rc.buffer, "Replay buffer kind")
      ->check(CLI::IsMember({"frugal", "plain"}))
      ->capture_default_str();
  cmd.add_option("--steps", rc.steps, "Total environment steps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--warmup", rc.warmup, "Initial random-rollout steps")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd.add_option("--capacity", rc.capacity, "Replay buffer capacity")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--seed", rc.seed, "Root RNG seed")->capture_default_str();
  cmd.add_option("--out", rc.out, "Run directory")
      ->envname("FAC_RUN_DIR")
      ->required();

  cmd.add_option("--epsilon", rc.gate.epsilon, "Gate base threshold")
      ->capture_default_str();
  cmd.add_option("--eta", rc.gate.eta, "Gate threshold decay scale")
      ->capture_default_str();
  cmd.add_option("--beta", rc.gate.beta, "Reward window half-width")
      ->capture_default_str();
  cmd.add_option("--bandwidth", rc.gate.bandwidth, "Kernel bandwidth")
      ->capture_default_str();
  cmd.add_flag("--literal-kde", rc.literal_kde,
               "Skip the 1/n mixture normalization");

  cmd.add_option("--gamma", rc.learner.gamma, "Discount factor")
      ->capture_default_str();
  cmd.add_option("--lr-actor", rc.learner.lr_actor, "Actor learning rate")
      ->capture_default_str();
  cmd.add_option("--lr-critic", rc.learner.lr_critic, "Critic learning rate")
      ->capture_default_str();
  cmd.add_option("--batch", rc.learner.batch, "Minibatch size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--tau", rc.learner.tau, "Target smoothing coefficient")
      ->capture_default_str();
  cmd.add_option("--noise-std", rc.learner.noise_std,
                 "Exploration noise std (times max action)")
      ->capture_default_str();
  cmd.add_option("--policy-delay", rc.learner.policy_delay,
                 "Actor update period")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--eval-interval", rc.learner.eval_interval,
                 "Steps between evaluations (0 disables)")
      ->capture_default_str();
  cmd.add_option("--eval-episodes", rc.learner.eval_episodes,
                 "Episodes per evaluation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_flag("--sgd", rc.learner.use_sgd, "Plain SGD instead of Adam");
  cmd.add_option("--nu", rc.learner.nu, "Dimension-selection threshold")
      ->capture_default_str();
  cmd.add_option("--mu", rc.learner.mu, "Grid cells per selected dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

}

void write_resolved_config(const RunConfig& rc, const fs::path& path) {
  std::ofstream out(path);
  out << std::setprecision(17);
  out << "[train]\n";
  out << "env=" << rc.env << "\n";
  out << "buffer=" << rc.buffer << "\n";
  out << "steps=" << rc.steps << "\n";
  out << "warmup=" << rc.warmup << "\n";
  out << "capacity=" << rc.capacity << "\n";
  out << "seed=" << rc.seed << "\n";
  out << "epsilon=" << rc.gate.epsilon << "\n";
  out << "eta=" << rc.gate.eta << "\n";
  out << "beta=" << rc.gate.beta << "\n";
  out << "bandwidth=" << rc.gate.bandwidth << "\n";
  out << "literal-kde=" << (rc.literal_kde ? "true" : "false") << "\n";
  out << "gamma=" << rc.learner.gamma << "\n";
  out << "lr-actor=" << rc.learner.lr_actor << "\n";
  out << "lr-critic=" << rc.learner.lr_critic << "\n";
  out << "batch=" << rc.learner.batch << "\n";
  out << "tau=" << rc.learner.tau << "\n";
  out << "noise-std=" << rc.learner.noise_std << "\n";
  out << "policy-delay=" << rc.learner.policy_delay << "\n";
  out << "eval-interval=" << rc.learner.eval_interval << "\n";
  out << "eval-episodes=" << rc.learner.eval_episodes << "\n";
  out << "sgd=" << (rc.learner.use_sgd ? "true" : "false") << "\n";
  out << "nu=" << rc.learner.nu << "\n";
  out << "mu=" << rc.learner.mu << "\n";
}

int cmd_train(RunConfig rc) {
  rc.gate.normalized = !rc.literal_kde;
  rc.learner.total_steps = rc.steps;
  rc.learner.warmup_steps = rc.warmup;
  rc.learner.seed = rc.seed;

  std::unique_ptr<fac::Env> env;
  std::unique_ptr<fac::PlainBuffer> plain;
  std::unique_ptr<fac::FrugalBuffer> frugal;
  try {
    env = fac::make_env(rc.env);
    if (rc.buffer == "plain")
      plain = std::make_unique<fac::PlainBuffer>(rc.capacity);
    else
      frugal = std::make_unique<fac::FrugalBuffer>(rc.capacity, rc.gate);
  } catch (const fac::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  fac::ReplayBuffer& buffer =
      plain ? static_cast<fac::ReplayBuffer&>(*plain)
            : static_cast<fac::ReplayBuffer&>(*frugal);

  const fs::path dir(rc.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "config error: cannot create " << dir << ": " << ec.message()
              << "\n";
    return 2;
  }

  fac::TrainResult result;
  try {
    result = fac::train(*env, buffer, rc.learner);
  } catch (const fac::DivergedTraining& e) {
    std::cerr << "training diverged: " << e.what() << "\n";
    return 3;
  } catch (const fac::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  fac::runlog_save(result.log, (dir / "run.jsonl").string());
  if (plain)
    fac::snapshot_save(*plain, (dir / "buffer.facb").string());
  else
    fac::snapshot_save(*frugal, (dir / "buffer.facb").string());
  fac::policy_save(result.policy, (dir / "policy.facp").string());
  write_resolved_config(rc, dir / "config.resolved");

  std::cout << "wrote " << dir.string() << " (final buffer " << buffer.size()
            << ", " << result.log.evals.size() << " evals)\n";
  return 0;
}

std::unordered_map<std::string, std::string> read_resolved_config(
    const fs::path& path) {
  std::unordered_map<std::string, std::string> kv;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

struct RunSummary {
  std::string run_id, env, buffer, seed;
  fac::MetricsRow row;
};

RunSummary summarize_run(const fs::path& dir) {
  const fac::RunLog log = fac::runlog_load((dir / "run.jsonl").string());
  const auto kv = read_resolved_config(dir / "config.resolved");
  RunSummary s;
  s.run_id = dir.filename().string().empty() ? dir.string()
                                             : dir.filename().string();
  auto get = [&](const char* key) {
    const auto it = kv.find(key);
    return it == kv.end() ? std::string("?") : it->second;
  };
  s.env = get("env");
  s.buffer = get("buffer");
  s.seed = get("seed");
  s.row = fac::run_metrics(log);
  return s;
}

int cmd_analyze(const std::vector<std::string>& runs,
                const std::string& baseline, const std::string& candidate,
                const std::string& out_path) {
  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "run_id,env,algo,buffer,seed,cp,buffer_size,reward_mean,reward_std,p\n";
  try {
    for (const auto& r : runs) {
      const RunSummary s = summarize_run(r);
      const double p =
          s.row.buffer_size == 0
              ? 0.0
              : s.row.reward_mean / static_cast<double>(s.row.buffer_size);
      csv << s.run_id << "," << s.env << ",td3," << s.buffer << "," << s.seed
          << "," << s.row.cp << "," << s.row.buffer_size << ","
          << s.row.reward_mean << "," << s.row.reward_std << "," << p << "\n";
    }
    if (!baseline.empty()) {
      const RunSummary b = summarize_run(baseline);
      const RunSummary c = summarize_run(candidate);
      const fac::MetricDeltas d = fac::metric_deltas(b.row, c.row);
      csv << "baseline,candidate,delta_cp,delta_buffer,delta_reward,p\n";
      csv << b.run_id << "," << c.run_id << "," << d.delta_cp << ","
          << d.delta_buffer << "," << d.delta_reward << "," << d.p << "\n";
    }
  } catch (const fac::Error& e) {
    std::cerr << "analyze error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "analyze error: " << e.what() << "\n";
    return 2;
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    out << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frugal actor-critic trainer and analysis harness"};
  app.require_subcommand(1);

  // Config files are only processed by the root app, so the option lives
  // here; train flags reach it via fallthrough and the file carries a
  // [train] section.
  app.set_config("--config", "", "Flat key = value config file");
  app.allow_config_extras(false);

  RunConfig rc;
  CLI::App* train = app.add_subcommand("train", "Run one training job");
  train->fallthrough();
  add_train_flags(*train, rc);

  std::vector<std::string> runs;
  std::string baseline, candidate, out_path;
  CLI::App* analyze =
      app.add_subcommand("analyze", "Summarize run directories into CSV");
  analyze->add_option("runs", runs, "Run directories");
  analyze->add_option("--baseline", baseline, "Baseline run directory");
  analyze->add_option("--candidate", candidate, "Candidate run directory")
      ->needs(analyze->get_option("--baseline"));
  analyze->get_option("--baseline")->needs(analyze->get_option("--candidate"));
  analyze->add_option("--out", out_path, "Write CSV here instead of stdout");

  std::string filter;
  bool perturb = false;
  CLI::App* selftest =
      app.add_subcommand("selftest", "Run the numerical oracle suite");
  selftest->add_option("--filter", filter, "Run only oracles whose name contains this");
  selftest->add_flag("--perturb-kernel", perturb,
                     "Deliberately skew the kernel constant (mutation check)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (train->parsed()) return cmd_train(std::move(rc));
  if (analyze->parsed()) {
    if (runs.empty() && baseline.empty()) {
      std::cerr << "analyze error: no run directories given\n";
      return 2;
    }
    return cmd_analyze(runs, baseline, candidate, out_path);
  }
  return run_selftest(filter, perturb);
}
