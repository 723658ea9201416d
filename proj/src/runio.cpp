#include "fac/runlog.hpp"

#include <fstream>

#include <json.hpp>

#include "fac/errors.hpp"

namespace fac {

using json = nlohmann::ordered_json;

void runlog_save(const RunLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");

  std::size_t next_eval = 0;
  for (const auto& s : log.steps) {
    json rec{{"step", s.step},
             {"reward", s.reward},
             {"accepted", s.accepted},
             {"rde", s.rde},
             {"buf", s.buf}};
    out << rec.dump() << '\n';
    while (next_eval < log.evals.size() &&
           log.evals[next_eval].step <= s.step) {
      const auto& e = log.evals[next_eval++];
      json erec{{"step", e.step},
                {"eval_mean", e.eval_mean},
                {"eval_std", e.eval_std}};
      out << erec.dump() << '\n';
    }
  }
  json term{{"wall_time_sec", log.wall_time_sec},
            {"final_buf", log.final_buffer}};
  out << term.dump() << '\n';
  if (!out) throw IoError("write failed: " + path);
}

RunLog runlog_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  RunLog log;
  std::string line;
  bool saw_terminal = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error&) {
      throw FormatError("bad JSON line in " + path);
    }
    if (rec.contains("reward")) {
      log.steps.push_back({rec.at("step").get<long>(),
                           rec.at("reward").get<double>(),
                           rec.at("accepted").get<bool>(),
                           rec.at("rde").get<double>(),
                           rec.at("buf").get<std::size_t>()});
    } else if (rec.contains("eval_mean")) {
      log.evals.push_back({rec.at("step").get<long>(),
                           rec.at("eval_mean").get<double>(),
                           rec.at("eval_std").get<double>()});
    } else if (rec.contains("wall_time_sec")) {
      log.wall_time_sec = rec.at("wall_time_sec").get<double>();
      log.final_buffer = rec.at("final_buf").get<std::size_t>();
      saw_terminal = true;
    } else {
      throw FormatError("unknown record in " + path);
    }
  }
  if (!saw_terminal) throw FormatError("missing terminal record in " + path);
  return log;
}

}  // namespace fac
