#include "semadapt/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ostream>

#include "semadapt/harness.hpp"

namespace semadapt {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string seeds;
  std::string agents;
  std::string ablation;
  int workers = 0;
  int eval_episodes = 0;
  int updates = 0;
  bool allow_any_ue_count = false;
  bool verbose = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || s[0] == '-') throw UsageError("--seeds: bad seed '" + s + "'");
  return v;
}

// "42,43" or "42-46"
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : split(text)) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      seeds.push_back(parse_seed(item));
      continue;
    }
    const std::uint64_t lo = parse_seed(item.substr(0, dash));
    const std::uint64_t hi = parse_seed(item.substr(dash + 1));
    if (hi < lo || hi - lo > 10000) throw UsageError("--seeds: bad range '" + item + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw UsageError("--seeds: no seeds given");
  return seeds;
}

fs::path resolve_out(const std::string& dir) {
  fs::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("SEMADAPT_OUT_ROOT"); root && *root) p = fs::path(root) / p;
  }
  return p;
}

Config build_config(const Options& o) {
  Config cfg = load_config(o.config);
  if (o.allow_any_ue_count) cfg.env.allow_any_ue_count = true;
  if (!o.seeds.empty()) cfg.experiment.seeds = parse_seeds(o.seeds);
  if (!o.agents.empty()) {
    cfg.experiment.agents.clear();
    for (const std::string& name : split(o.agents)) {
      const auto a = parse_agent(name);
      if (!a) throw UsageError("--agents: unknown agent '" + name + "' (expected tcppo, ppo, dqn, random)");
      cfg.experiment.agents.push_back(*a);
    }
  }
  if (!o.ablation.empty()) {
    try {
      cfg.experiment.ablations = parse_ablations(o.ablation);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--ablation: ") + e.what());
    }
  }
  if (o.workers > 0) cfg.experiment.workers = o.workers;
  if (o.eval_episodes > 0) cfg.experiment.eval_episodes = o.eval_episodes;
  if (o.updates > 0) set_update_budget(cfg, o.updates);
  if (!o.out.empty()) cfg.experiment.output_dir = o.out;
  cfg.validate();
  return cfg;
}

void add_run_flags(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON config file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "output directory (relative paths resolve under $SEMADAPT_OUT_ROOT)");
  sub->add_option("--seeds", o.seeds, "seed list, e.g. 42,43 or 42-46");
  sub->add_option("--agents", o.agents, "comma list from tcppo, ppo, dqn, random");
  sub->add_option("--ablation", o.ablation,
                  "tcppo ablation flags: no_shield, no_cost_critics, fixed_duals, reversed_shield_order");
  sub->add_option("--workers", o.workers, "parallel (agent, seed) runs")->check(CLI::PositiveNumber);
  sub->add_option("--eval-episodes", o.eval_episodes, "evaluation episodes per run")
      ->check(CLI::PositiveNumber);
  sub->add_option("--updates", o.updates, "PPO updates; DQN gets the same frame budget")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--allow-any-ue-count", o.allow_any_ue_count, "accept UE counts outside {8, 16}");
  sub->add_flag("-v,--verbose", o.verbose, "print one line per finished run");
}

int finish_runs(const nlohmann::json& manifest, const fs::path& dir, std::ostream& out) {
  out << "wrote " << manifest["runs"].size() << " runs to " << dir.string() << " (config "
      << manifest["config_hash"].get<std::string>() << ")\n";
  if (manifest["status"] != "ok") {
    for (const auto& r : manifest["runs"]) {
      if (r["status"] != "ok") {
        out << "run " << r["label"].get<std::string>() << " seed " << r["seed"] << " failed: "
            << r["error"].get<std::string>() << '\n';
      }
    }
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Latency-aware semantic adaptation simulator and constrained PPO experiments",
               "semadapt"};
  app.require_subcommand(1);
  Options o;
  std::string report_dir;

  CLI::App* train = app.add_subcommand("train", "train and evaluate every (agent, seed)");
  add_run_flags(train, o);
  CLI::App* eval = app.add_subcommand("eval", "evaluate saved checkpoints without training");
  add_run_flags(eval, o);
  CLI::App* ablate = app.add_subcommand("ablate", "tcppo reference plus the four single ablations");
  add_run_flags(ablate, o);
  CLI::App* report = app.add_subcommand("report", "aggregate metrics files into report/");
  report->add_option("dir", report_dir, "directory holding metrics files");
  report->add_option("--out", o.out, "same as dir");
  CLI::App* check = app.add_subcommand("validate-config", "parse and range-check a config");
  check->add_option("--config", o.config, "JSON config file")->required()->check(CLI::ExistingFile);
  check->add_flag("--allow-any-ue-count", o.allow_any_ue_count, "accept UE counts outside {8, 16}");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (report->parsed()) {
      const std::string dir = report_dir.empty() ? o.out : report_dir;
      if (dir.empty()) throw UsageError("report: give a metrics directory");
      const SummaryReport r = summarize(resolve_out(dir));
      for (const std::string& p : r.problems) err << "warning: " << p << '\n';
      for (const fs::path& p : r.written) out << "wrote " << p.string() << '\n';
      return kExitOk;
    }

    const Config cfg = build_config(o);
    if (check->parsed()) {
      out << "config ok: scenario " << cfg.experiment.scenario << ", N=" << cfg.env.n_ues
          << ", hash " << config_hash(cfg) << '\n';
      return kExitOk;
    }

    Config run_cfg = cfg;
    std::vector<RunTask> tasks;
    if (ablate->parsed()) {
      tasks = plan_ablation(run_cfg);
    } else {
      run_cfg.experiment.eval_only = eval->parsed();
      tasks = plan_run(run_cfg);
    }
    const fs::path dir = resolve_out(run_cfg.experiment.output_dir);
    const nlohmann::json manifest = run_tasks(run_cfg, tasks, dir, o.verbose ? &out : nullptr);
    return finish_runs(manifest, dir, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace semadapt
