#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "semadapt/config.hpp"

namespace semadapt {

/// One (agent, ablation, seed) unit of work with its own output files.
struct RunTask {
  AgentKind agent = AgentKind::TcPpo;
  Ablations ablations;
  std::uint64_t seed = 0;

  std::string label() const;
  std::string stem() const;  // "<label>_seed<seed>"
};

/// "tcppo", "tcppo+no_shield", "dqn", ...
std::string run_label(AgentKind agent, const Ablations& ablations);

struct RunResult {
  RunTask task;
  bool ok = false;
  std::string error;
  double wall_s = 0.0;
  std::vector<std::string> files;
  EvalSummary eval;
  std::size_t train_rows = 0;
};

/// Every configured agent x seed; the experiment ablations apply to tcppo only.
std::vector<RunTask> plan_run(const Config& cfg);
/// Unablated tcppo plus each single ablation flag, over every seed.
std::vector<RunTask> plan_ablation(const Config& cfg);

/// Trains (unless eval_only) and evaluates one task, writing
/// <stem>.csv, <stem>_shield.csv (shielded runs) and <stem>.ckpt (learning agents).
RunResult execute_task(const Config& cfg, const RunTask& task, const std::filesystem::path& out);

/// Runs tasks on up to cfg.experiment.workers threads and writes manifest.json.
/// Returns the manifest. log, if given, receives one line per finished run.
nlohmann::json run_tasks(const Config& cfg, const std::vector<RunTask>& tasks,
                         const std::filesystem::path& out, std::ostream* log = nullptr);

/// Sets the PPO update count and gives DQN the same frame budget.
void set_update_budget(Config& cfg, int updates);

struct SummaryReport {
  nlohmann::json summary;
  std::vector<std::string> problems;  // one entry per unreadable file
  std::vector<std::filesystem::path> written;
};

/// Aggregates every metrics file in dir into dir/report. Throws
/// std::runtime_error("no metrics found") when nothing is readable.
SummaryReport summarize(const std::filesystem::path& dir);

}  // namespace semadapt
