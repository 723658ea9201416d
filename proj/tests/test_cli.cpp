#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kTrainArgs =
    "train --env pendulum --buffer frugal --steps 600 --warmup 200 "
    "--eval-interval 300 --eval-episodes 2 --seed 0";

int run(const std::string& args) {
  const std::string cmd =
      std::string(FAC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Everything except the terminal record, whose wall time varies by run.
std::vector<std::string> body_of(const fs::path& p) {
  auto lines = lines_of(p);
  REQUIRE(!lines.empty());
  lines.pop_back();
  return lines;
}

struct Workspace {
  fs::path dir;
  Workspace() : dir(fs::temp_directory_path() / "fac_cli_test") {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string sub(const std::string& name) const {
    return (dir / name).string();
  }
};

}  // namespace

TEST_CASE("train writes the run directory and is deterministic") {
  Workspace ws;
  REQUIRE(run(kTrainArgs + " --out " + ws.sub("a")) == 0);
  for (const char* f :
       {"run.jsonl", "buffer.facb", "policy.facp", "config.resolved"})
    CHECK(fs::exists(ws.dir / "a" / f));

  REQUIRE(run(kTrainArgs + " --out " + ws.sub("b")) == 0);
  CHECK(body_of(ws.dir / "a" / "run.jsonl") ==
        body_of(ws.dir / "b" / "run.jsonl"));

  SUBCASE("the resolved config reproduces the run") {
    REQUIRE(run("train --config " + ws.sub("a") + "/config.resolved --out " +
                ws.sub("c")) == 0);
    CHECK(body_of(ws.dir / "a" / "run.jsonl") ==
          body_of(ws.dir / "c" / "run.jsonl"));
    CHECK(lines_of(ws.dir / "a" / "config.resolved") ==
          lines_of(ws.dir / "c" / "config.resolved"));
  }

  SUBCASE("analyze emits one metrics row per run") {
    const std::string csv = ws.sub("metrics.csv");
    REQUIRE(run("analyze " + ws.sub("a") + " " + ws.sub("b") + " --out " +
                csv) == 0);
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] ==
          "run_id,env,algo,buffer,seed,cp,buffer_size,reward_mean,reward_std,p");
    CHECK(lines[1].rfind("a,pendulum,td3,frugal,0,", 0) == 0);
  }

  SUBCASE("analyze baseline/candidate emits the deltas") {
    const std::string csv = ws.sub("deltas.csv");
    REQUIRE(run("analyze --baseline " + ws.sub("a") + " --candidate " +
                ws.sub("b") + " --out " + csv) == 0);
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == 3);
    CHECK(lines[1] ==
          "baseline,candidate,delta_cp,delta_buffer,delta_reward,p");
  }

  SUBCASE("corrupt run log exits 2") {
    std::ofstream(ws.dir / "a" / "run.jsonl") << "{not json\n";
    CHECK(run("analyze " + ws.sub("a")) == 2);
  }
}

TEST_CASE("bad flags exit 2") {
  Workspace ws;
  CHECK(run("train --env nosuch --out " + ws.sub("x")) == 2);
  CHECK(run("train --buffer ring --out " + ws.sub("x")) == 2);
  CHECK(run("train --steps 0 --out " + ws.sub("x")) == 2);
  CHECK(run("train --env pendulum") == 2);  // no --out, no FAC_RUN_DIR

  std::ofstream(ws.dir / "bad.cfg") << "[train]\nenv=pendulum\nnonsense=1\n";
  CHECK(run("train --config " + ws.sub("bad.cfg") + " --out " + ws.sub("x")) ==
        2);
}

TEST_CASE("FAC_RUN_DIR provides the default output directory") {
  Workspace ws;
  const std::string cmd = "FAC_RUN_DIR=" + ws.sub("envout") + " " +
                          std::string(FAC_CLI_PATH) + " " + kTrainArgs +
                          " >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(ws.dir / "envout" / "run.jsonl"));
}

TEST_CASE("warmup must not exceed steps, reported as a config error") {
  Workspace ws;
  CHECK(run("train --steps 100 --warmup 200 --out " + ws.sub("x")) == 2);
}

TEST_CASE("selftest filter and mutation hook") {
  CHECK(run("selftest --filter entropy") == 0);
  CHECK(run("selftest --filter cp-suffix") == 0);
  CHECK(run("selftest --filter grid") == 0);
  CHECK(run("selftest --filter nosuch-oracle") == 1);
  CHECK(run("selftest --filter rde --perturb-kernel") == 1);
}
