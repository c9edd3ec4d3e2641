#include "semadapt/harness.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "semadapt/text.hpp"

namespace semadapt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.3.0";

bool learns(AgentKind a) { return a != AgentKind::Random; }

ExecutionShield execution_shield(const Config& cfg, const RunTask& task) {
  ExecutionShield s;
  s.config = cfg.shield;
  if (task.ablations.reversed_shield_order) s.config.fallback_order = ShieldConfig::reversed_order();
  s.enabled = !task.ablations.no_shield;
  if (task.agent == AgentKind::Dqn) s.enabled = cfg.dqn.shield_on_execution;
  return s;
}

std::vector<int> widths(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> w = {in};
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(out);
  return w;
}

std::map<std::string, std::vector<int>> expected_networks(const Config& cfg, AgentKind agent) {
  const int obs = cfg.env.observation_size();
  if (agent == AgentKind::Dqn) {
    const int actions = static_cast<int>(dqn_templates(cfg.env.n_ues).size());
    return {{"q", widths(obs, cfg.dqn.hidden, actions)}};
  }
  return {{"policy", widths(obs, cfg.train.hidden, kNumPrimitives + cfg.env.n_ues)},
          {"value", widths(obs, cfg.train.hidden, 1)},
          {"cost", widths(obs, cfg.train.hidden, 2)}};
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  body(out);
  out.flush();
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

json moments_json(const Moments& m) {
  return {{"mean", m.mean}, {"std", m.std}, {"se", m.se}, {"p95", m.p95}, {"n", m.n}};
}

json eval_json(const EvalSummary& s) {
  return {{"episodes", s.episodes},
          {"mean_reward", moments_json(s.reward)},
          {"air_overhead_ms", moments_json(s.air_overhead_ms)},
          {"ric_ms", moments_json(s.ric_ms)},
          {"hit_rate", moments_json(s.hit_rate)}};
}

}  // namespace

std::string run_label(AgentKind agent, const Ablations& ablations) {
  std::string label(to_string(agent));
  if (agent == AgentKind::TcPpo && ablations.any()) label += "+" + ablations.label();
  return label;
}

std::string RunTask::label() const { return run_label(agent, ablations); }
std::string RunTask::stem() const { return label() + "_seed" + std::to_string(seed); }

std::vector<RunTask> plan_run(const Config& cfg) {
  std::vector<RunTask> tasks;
  for (AgentKind agent : cfg.experiment.agents) {
    for (std::uint64_t seed : cfg.experiment.seeds) {
      RunTask t;
      t.agent = agent;
      t.seed = seed;
      if (agent == AgentKind::TcPpo) t.ablations = cfg.experiment.ablations;
      tasks.push_back(t);
    }
  }
  return tasks;
}

std::vector<RunTask> plan_ablation(const Config& cfg) {
  std::vector<Ablations> variants(5);
  variants[1].no_shield = true;
  variants[2].no_cost_critics = true;
  variants[3].fixed_duals = true;
  variants[4].reversed_shield_order = true;
  std::vector<RunTask> tasks;
  for (const Ablations& a : variants) {
    for (std::uint64_t seed : cfg.experiment.seeds) tasks.push_back({AgentKind::TcPpo, a, seed});
  }
  return tasks;
}

void set_update_budget(Config& cfg, int updates) {
  cfg.train.updates = updates;
  cfg.dqn.frames = updates * cfg.train.rollout_length;
}

RunResult execute_task(const Config& cfg, const RunTask& task, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.task = task;
  const std::string label = task.label();
  const fs::path ckpt = out / (task.stem() + ".ckpt");
  const ExecutionShield shield = execution_shield(cfg, task);

  std::vector<MetricsRow> rows;
  std::vector<ShieldLogRow> shield_log;
  std::map<std::string, Mlp> nets;

  if (learns(task.agent) && cfg.experiment.eval_only) {
    std::ifstream in(ckpt);
    if (!in) throw std::runtime_error(ckpt.string() + ": checkpoint not found (eval needs a prior train run)");
    nets = read_checkpoint(in, expected_networks(cfg, task.agent));
  } else if (task.agent == AgentKind::Dqn) {
    DqnOutcome o = dqn_train(cfg.env, cfg.dqn, cfg.shield, task.seed, label);
    rows = std::move(o.rows);
    shield_log = std::move(o.shield_log);
    nets.emplace("q", std::move(o.q));
  } else if (learns(task.agent)) {
    PpoVariant variant;
    variant.constrained = task.agent == AgentKind::TcPpo;
    variant.ablations = task.ablations;
    PpoOutcome o = train_ppo(cfg.env, cfg.train, cfg.shield, variant, task.seed, label);
    rows = std::move(o.rows);
    shield_log = std::move(o.shield_log);
    nets.emplace("policy", std::move(o.nets.policy));
    nets.emplace("value", std::move(o.nets.value));
    nets.emplace("cost", std::move(o.nets.cost));
  }
  result.train_rows = rows.size();

  Proposer proposer;
  if (task.agent == AgentKind::Random) {
    proposer = random_proposer();
  } else if (task.agent == AgentKind::Dqn) {
    proposer = dqn_proposer(nets.at("q"), cfg.env.n_ues);
  } else {
    proposer = policy_proposer(nets.at("policy"), cfg.env.n_ues, EvalMode::Greedy);
  }
  result.eval = evaluate_agent(cfg.env, proposer, shield, cfg.experiment.eval_episodes, task.seed,
                               label, &rows, &shield_log);

  const fs::path metrics = out / (task.stem() + ".csv");
  write_file(metrics, [&](std::ostream& os) {
    write_metrics_header(os);
    for (const MetricsRow& r : rows) write_metrics_row(os, r);
  });
  result.files.push_back(metrics.filename().string());
  if (shield.enabled) {
    const fs::path log = out / (task.stem() + "_shield.csv");
    write_file(log, [&](std::ostream& os) { write_shield_log(os, shield_log); });
    result.files.push_back(log.filename().string());
  }
  if (learns(task.agent) && !cfg.experiment.eval_only) {
    std::map<std::string, const Mlp*> refs;
    for (const auto& [name, net] : nets) refs.emplace(name, &net);
    write_file(ckpt, [&](std::ostream& os) { write_checkpoint(os, refs); });
    result.files.push_back(ckpt.filename().string());
  }

  result.ok = true;
  result.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

json run_tasks(const Config& cfg, const std::vector<RunTask>& tasks, const fs::path& out,
               std::ostream* log) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    throw std::runtime_error(out.string() + ": cannot create output directory");
  }

  std::vector<RunResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = execute_task(cfg, tasks[i], out);
      } catch (const std::exception& e) {
        results[i].task = tasks[i];
        results[i].error = e.what();
      }
      if (log) {
        std::lock_guard lock(log_mutex);
        const RunResult& r = results[i];
        *log << (r.ok ? "done  " : "FAILED ") << r.task.stem();
        if (r.ok) {
          *log << "  eval reward " << format_double(r.eval.reward.mean) << "  ("
               << static_cast<int>(r.wall_s) << " s)";
        } else {
          *log << ": " << r.error;
        }
        *log << '\n' << std::flush;
      }
    }
  };
  const int n_workers =
      std::max(1, std::min<int>(cfg.experiment.workers, static_cast<int>(tasks.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  json manifest;
  manifest["version"] = kVersion;
  manifest["versions"] = {{"semadapt", kVersion},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                        std::to_string(EIGEN_MINOR_VERSION)},
                          {"compiler", __VERSION__},
                          {"cxx", static_cast<long>(__cplusplus)}};
  manifest["config_hash"] = config_hash(cfg);
  manifest["scenario"] = cfg.experiment.scenario;
  manifest["seeds"] = cfg.experiment.seeds;
  manifest["workers"] = n_workers;
  manifest["config"] = to_json(cfg);
  json runs = json::array();
  bool all_ok = true;
  for (const RunResult& r : results) {
    json j = {{"label", r.task.label()},
              {"seed", r.task.seed},
              {"status", r.ok ? "ok" : "failed"},
              {"wall_s", r.wall_s},
              {"files", r.files}};
    if (r.ok) {
      j["train_rows"] = r.train_rows;
      j["eval"] = eval_json(r.eval);
    } else {
      j["error"] = r.error;
      all_ok = false;
    }
    runs.push_back(std::move(j));
  }
  manifest["runs"] = std::move(runs);
  manifest["status"] = all_ok ? "ok" : "failed";
  manifest["wall_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(out / "manifest.json", [&](std::ostream& os) { os << manifest.dump(2) << '\n'; });
  return manifest;
}

namespace {

struct MetricDef {
  const char* name;
  double MetricsRow::*field;
};

const std::vector<MetricDef>& summary_metrics() {
  static const std::vector<MetricDef> defs = {
      {"mean_reward", &MetricsRow::mean_reward},   {"mean_utility", &MetricsRow::mean_utility},
      {"air_overhead_ms", &MetricsRow::air_overhead_ms}, {"ric_ms", &MetricsRow::ric_ms},
      {"hit_rate", &MetricsRow::hit_rate},          {"overshoot_ms", &MetricsRow::overshoot_ms}};
  return defs;
}

}  // namespace

SummaryReport summarize(const fs::path& dir) {
  SummaryReport report;
  if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + ": not a directory");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& p = entry.path();
    if (!entry.is_regular_file() || p.extension() != ".csv") continue;
    if (p.stem().string().ends_with("_shield")) continue;
    files.push_back(p);
  }
  std::sort(files.begin(), files.end());

  // agent -> rows, kept in file order
  std::map<std::string, std::vector<MetricsRow>> eval, train;
  for (const fs::path& p : files) {
    try {
      std::ifstream in(p);
      if (!in) throw std::runtime_error("cannot open");
      for (MetricsRow& r : read_metrics(in)) {
        if (r.phase == "eval") {
          eval[r.agent].push_back(std::move(r));
        } else if (r.phase == "train") {
          train[r.agent].push_back(std::move(r));
        } else {
          throw std::runtime_error("unknown phase '" + r.phase + "'");
        }
      }
    } catch (const std::exception& e) {
      report.problems.push_back(p.filename().string() + ": " + e.what());
    }
  }
  if (eval.empty() && train.empty()) throw std::runtime_error("no metrics found in " + dir.string());

  const fs::path out = dir / "report";
  fs::create_directories(out);

  json agents = json::object();
  std::ostringstream csv;
  csv << "agent,metric,n,mean,std,se,p95,seeds,seed_se\n";
  for (const auto& [agent, rows] : eval) {
    json a = json::object();
    std::set<std::uint64_t> seeds;
    for (const MetricsRow& r : rows) seeds.insert(r.seed);
    for (const MetricDef& def : summary_metrics()) {
      std::vector<double> values;
      std::map<std::uint64_t, std::pair<double, int>> per_seed;
      for (const MetricsRow& r : rows) {
        values.push_back(r.*def.field);
        auto& [sum, n] = per_seed[r.seed];
        sum += r.*def.field;
        ++n;
      }
      std::vector<double> seed_means;
      for (const auto& [seed, acc] : per_seed) seed_means.push_back(acc.first / acc.second);
      const Moments m = describe(values);
      const Moments s = describe(seed_means);
      json j = moments_json(m);
      j["seeds"] = s.n;
      j["seed_se"] = s.se;
      a[def.name] = j;
      csv << agent << ',' << def.name << ',' << m.n << ',' << format_double(m.mean) << ','
          << format_double(m.std) << ',' << format_double(m.se) << ',' << format_double(m.p95)
          << ',' << s.n << ',' << format_double(s.se) << '\n';
    }
    int violated = 0;
    for (const MetricsRow& r : rows) violated += r.hit_rate < 1.0 ? 1 : 0;
    a["episodes"] = rows.size();
    a["episodes_with_violation"] = violated;
    a["violation_rate"] = static_cast<double>(violated) / static_cast<double>(rows.size());
    a["seed_list"] = seeds;
    agents[agent] = std::move(a);
  }

  // across-seed mean and std per training update
  std::ostringstream series;
  series << "agent,update,n_seeds,reward_mean,reward_std,air_mean,air_std,ric_mean,ric_std,"
            "lambda1_mean,lambda2_mean,hit_rate_mean\n";
  json train_json = json::object();
  for (const auto& [agent, rows] : train) {
    std::map<int, std::vector<const MetricsRow*>> by_index;
    for (const MetricsRow& r : rows) by_index[r.index].push_back(&r);
    int violated = 0;
    for (const MetricsRow& r : rows) violated += r.hit_rate < 1.0 ? 1 : 0;
    train_json[agent] = {{"rows", rows.size()},
                         {"rows_with_violation", violated},
                         {"violation_rate", static_cast<double>(violated) / rows.size()}};
    for (const auto& [index, group] : by_index) {
      auto stat = [&](double MetricsRow::*f) {
        std::vector<double> v;
        for (const MetricsRow* r : group) v.push_back(r->*f);
        return describe(v);
      };
      const Moments rw = stat(&MetricsRow::mean_reward), air = stat(&MetricsRow::air_overhead_ms),
                    ric = stat(&MetricsRow::ric_ms), l1 = stat(&MetricsRow::lambda1),
                    l2 = stat(&MetricsRow::lambda2), hit = stat(&MetricsRow::hit_rate);
      series << agent << ',' << index << ',' << group.size() << ',' << format_double(rw.mean) << ','
             << format_double(rw.std) << ',' << format_double(air.mean) << ','
             << format_double(air.std) << ',' << format_double(ric.mean) << ','
             << format_double(ric.std) << ',' << format_double(l1.mean) << ','
             << format_double(l2.mean) << ',' << format_double(hit.mean) << '\n';
    }
  }

  report.summary = {{"eval", agents}, {"train", train_json}, {"files", files.size()},
                    {"problems", report.problems}};
  const auto emit = [&](const char* name, const std::string& text) {
    const fs::path p = out / name;
    write_file(p, [&](std::ostream& os) { os << text; });
    report.written.push_back(p);
  };
  emit("summary.json", report.summary.dump(2) + "\n");
  emit("summary.csv", csv.str());
  emit("series_train.csv", series.str());
  return report;
}

}  // namespace semadapt
