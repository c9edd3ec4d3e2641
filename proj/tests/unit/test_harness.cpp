#include <doctest.h>

#include <fstream>
#include <sstream>

#include "semadapt/harness.hpp"
#include "tmpdir.hpp"

using namespace semadapt;
namespace fs = std::filesystem;

namespace {

Config tiny() {
  Config c;
  c.env.episode_frames = 20;
  c.train.hidden = {8};
  c.train.rollout_length = 16;
  c.dqn.hidden = {8};
  c.dqn.warmup = 16;
  c.dqn.batch_size = 16;
  c.dqn.log_every = 16;
  set_update_budget(c, 2);
  c.experiment.seeds = {42};
  c.experiment.eval_episodes = 3;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_rows(const fs::path& p, const std::vector<MetricsRow>& rows) {
  std::ofstream out(p);
  write_metrics_header(out);
  for (const MetricsRow& r : rows) write_metrics_row(out, r);
}

MetricsRow eval_row(const std::string& agent, std::uint64_t seed, int index, double reward) {
  MetricsRow r;
  r.phase = "eval";
  r.agent = agent;
  r.seed = seed;
  r.index = index;
  r.mean_reward = reward;
  return r;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("run planning") {
  Config c;
  CHECK(plan_run(c).size() == 20u);
  CHECK(plan_ablation(c).size() == 25u);
  c.experiment.ablations.no_shield = true;
  int ablated = 0;
  for (const RunTask& t : plan_run(c)) ablated += t.label() == "tcppo+no_shield";
  CHECK(ablated == 5);
  CHECK(run_label(AgentKind::Dqn, c.experiment.ablations) == "dqn");
  CHECK(RunTask{AgentKind::Ppo, {}, 43}.stem() == "ppo_seed43");
  std::vector<std::string> labels;
  for (const RunTask& t : plan_ablation(Config{})) {
    if (t.seed == 42) labels.push_back(t.label());
  }
  CHECK(labels == std::vector<std::string>{"tcppo", "tcppo+no_shield", "tcppo+no_cost_critics",
                                           "tcppo+fixed_duals", "tcppo+reversed_shield_order"});
}

TEST_CASE("random agent in eval-only mode writes 30 eval rows and no train rows") {
  TempDir dir("random");
  Config c;
  c.experiment.agents = {AgentKind::Random};
  c.experiment.seeds = {42};
  c.experiment.eval_only = true;
  const auto manifest = run_tasks(c, plan_run(c), dir.path);
  CHECK(manifest["status"] == "ok");
  std::ifstream in(dir.path / "random_seed42.csv");
  const auto rows = read_metrics(in);
  CHECK(rows.size() == 30u);
  for (const MetricsRow& r : rows) {
    CHECK(r.phase == "eval");
    CHECK(r.hit_rate == 1.0);
  }
  CHECK_FALSE(fs::exists(dir.path / "random_seed42.ckpt"));
}

TEST_CASE("identical specs give byte-identical metrics, across worker counts") {
  TempDir a("det_a"), b("det_b");
  Config c = tiny();
  c.experiment.seeds = {42, 43};
  const auto tasks = plan_run(c);
  CHECK(run_tasks(c, tasks, a.path)["status"] == "ok");
  c.experiment.workers = 3;
  CHECK(run_tasks(c, tasks, b.path)["status"] == "ok");
  int compared = 0;
  for (const RunTask& t : tasks) {
    for (const char* suffix : {".csv", "_shield.csv", ".ckpt"}) {
      const fs::path pa = a.path / (t.stem() + suffix);
      if (!fs::exists(pa)) continue;
      CHECK(slurp(pa) == slurp(b.path / (t.stem() + suffix)));
      ++compared;
    }
  }
  CHECK(compared == 2 * (3 * 3 + 2));
}

TEST_CASE("eval-only reloads checkpoints and reproduces evaluation") {
  TempDir dir("reload");
  Config c = tiny();
  c.experiment.agents = {AgentKind::TcPpo, AgentKind::Dqn};
  run_tasks(c, plan_run(c), dir.path);
  std::ifstream first(dir.path / "dqn_seed42.csv");
  std::vector<MetricsRow> trained;
  for (const MetricsRow& r : read_metrics(first)) {
    if (r.phase == "eval") trained.push_back(r);
  }
  c.experiment.eval_only = true;
  const fs::path copy = dir.path / "again";
  fs::create_directories(copy);
  for (const char* f : {"dqn_seed42.ckpt", "tcppo_seed42.ckpt"}) fs::copy_file(dir.path / f, copy / f);
  CHECK(run_tasks(c, plan_run(c), copy)["status"] == "ok");
  std::ifstream second(copy / "dqn_seed42.csv");
  const auto reloaded = read_metrics(second);
  REQUIRE(reloaded.size() == trained.size());
  for (std::size_t k = 0; k < trained.size(); ++k) CHECK(reloaded[k].mean_reward == trained[k].mean_reward);

  TempDir empty("nockpt");
  const auto manifest = run_tasks(c, plan_run(c), empty.path);
  CHECK(manifest["status"] == "failed");
  CHECK(manifest["runs"][0]["error"].get<std::string>().find("checkpoint") != std::string::npos);
}

TEST_CASE("no_shield runs leave no shield log; manifest records the hash") {
  TempDir dir("noshield");
  Config c = tiny();
  c.experiment.agents = {AgentKind::TcPpo};
  c.experiment.ablations.no_shield = true;
  const auto manifest = run_tasks(c, plan_run(c), dir.path);
  CHECK(fs::exists(dir.path / "tcppo+no_shield_seed42.csv"));
  CHECK_FALSE(fs::exists(dir.path / "tcppo+no_shield_seed42_shield.csv"));
  CHECK(manifest["config_hash"] == config_hash(c));
  CHECK(fs::exists(dir.path / "manifest.json"));
  CHECK(manifest["runs"][0]["wall_s"].get<double>() >= 0.0);
}

TEST_CASE("summary statistics across seeds") {
  TempDir dir("summary");
  write_rows(dir.path / "a_seed1.csv", {eval_row("a", 1, 0, 1.0)});
  write_rows(dir.path / "a_seed2.csv", {eval_row("a", 2, 0, 2.0)});
  write_rows(dir.path / "b_seed1.csv", {eval_row("b", 1, 0, 0.7), eval_row("b", 1, 1, 0.7)});
  const SummaryReport r = summarize(dir.path);
  const auto& a = r.summary["eval"]["a"]["mean_reward"];
  CHECK(a["mean"].get<double>() == 1.5);
  CHECK(a["se"].get<double>() == doctest::Approx(0.5));
  CHECK(a["seed_se"].get<double>() == doctest::Approx(0.5));
  CHECK(r.summary["eval"]["b"]["mean_reward"]["se"].get<double>() == 0.0);
  CHECK(fs::exists(dir.path / "report" / "summary.csv"));
  CHECK(fs::exists(dir.path / "report" / "series_train.csv"));

  // pure function of the files
  const std::string first = slurp(dir.path / "report" / "summary.json");
  summarize(dir.path);
  CHECK(slurp(dir.path / "report" / "summary.json") == first);
}

TEST_CASE("corrupt files are reported and aggregation continues") {
  TempDir dir("corrupt");
  write_rows(dir.path / "a_seed1.csv", {eval_row("a", 1, 0, 1.0)});
  std::ofstream(dir.path / "broken_seed1.csv") << "phase,agent\neval\n";
  std::ofstream(dir.path / "a_seed1_shield.csv") << "phase,index\n";
  const SummaryReport r = summarize(dir.path);
  REQUIRE(r.problems.size() == 1u);
  CHECK(r.problems[0].find("broken_seed1.csv") != std::string::npos);
  CHECK(r.summary["eval"].contains("a"));
}

TEST_CASE("empty directory has no metrics") {
  TempDir dir("empty");
  CHECK_THROWS_WITH(summarize(dir.path), doctest::Contains("no metrics found"));
}

TEST_CASE("training series aggregate across seeds") {
  TempDir dir("series");
  MetricsRow t1;
  t1.phase = "train";
  t1.agent = "tcppo";
  t1.seed = 1;
  t1.index = 0;
  t1.mean_reward = 1.0;
  MetricsRow t2 = t1;
  t2.seed = 2;
  t2.mean_reward = 3.0;
  write_rows(dir.path / "tcppo_seed1.csv", {t1});
  write_rows(dir.path / "tcppo_seed2.csv", {t2});
  summarize(dir.path);
  const std::string series = slurp(dir.path / "report" / "series_train.csv");
  CHECK(series.find("tcppo,0,2,2,1.414") != std::string::npos);
}

}
