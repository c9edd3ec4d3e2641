#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "semadapt/cli.hpp"
#include "semadapt/config.hpp"
#include "tmpdir.hpp"

using namespace semadapt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_config(const fs::path& dir, const nlohmann::json& j) {
  const fs::path p = dir / "cfg.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate-config accepts the shipped config") {
  const Outcome o = cli({"validate-config", "--config", SEMADAPT_CONFIG_DIR "/n8.json"});
  CHECK(o.code == 0);
  CHECK(o.out.find("config ok") != std::string::npos);
}

TEST_CASE("N=7 without the override is a config error citing {8, 16}") {
  TempDir dir("cli_n7");
  const fs::path cfg = write_config(dir.path, {{"env", {{"n_ues", 7}}}});
  const Outcome o = cli({"train", "--config", cfg.string(), "--out", (dir.path / "runs").string()});
  CHECK(o.code == 1);
  CHECK(o.err.find("{8, 16}") != std::string::npos);
  CHECK(std::count(o.err.begin(), o.err.end(), '\n') == 1);
  CHECK_FALSE(fs::exists(dir.path / "runs"));
}

TEST_CASE("report on an empty directory exits 2") {
  TempDir dir("cli_empty");
  const Outcome o = cli({"report", dir.path.string()});
  CHECK(o.code == 2);
  CHECK(o.err.find("no metrics found") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"train"}).code == 1);
  CHECK(cli({"train", "--config", "/nonexistent.json"}).code == 1);
  CHECK(cli({"dance"}).code == 1);
  CHECK(cli({"validate-config", "--config", SEMADAPT_CONFIG_DIR "/n8.json", "--bogus"}).code == 1);
  CHECK(cli({"train", "--config", SEMADAPT_CONFIG_DIR "/n8.json", "--agents", "a2c"}).code == 1);
  CHECK(cli({"train", "--config", SEMADAPT_CONFIG_DIR "/n8.json", "--ablation", "no_critics"}).code == 1);
  CHECK(cli({"train", "--config", SEMADAPT_CONFIG_DIR "/n8.json", "--seeds", "4x"}).code == 1);
  TempDir dir("cli_badjson");
  std::ofstream(dir.path / "bad.json") << "{ not json";
  CHECK(cli({"validate-config", "--config", (dir.path / "bad.json").string()}).code == 1);
}

TEST_CASE("help documents every flag") {
  const Outcome top = cli({"--help"});
  CHECK(top.code == 0);
  for (const char* sub : {"train", "eval", "ablate", "report", "validate-config"}) {
    CHECK(top.out.find(sub) != std::string::npos);
  }
  const Outcome train = cli({"train", "--help"});
  CHECK(train.code == 0);
  for (const char* flag : {"--config", "--out", "--seeds", "--agents", "--ablation", "--workers",
                           "--eval-episodes", "--updates", "--verbose"}) {
    CHECK(train.out.find(flag) != std::string::npos);
  }
}

TEST_CASE("train, eval and report end to end with the output root override") {
  TempDir dir("cli_run");
  Config c;
  c.env.episode_frames = 20;
  c.train.hidden = {8};
  c.train.rollout_length = 16;
  c.dqn.hidden = {8};
  c.dqn.warmup = 16;
  c.dqn.batch_size = 16;
  const fs::path cfg = write_config(dir.path, to_json(c));
  ::setenv("SEMADAPT_OUT_ROOT", dir.path.string().c_str(), 1);
  const Outcome t = cli({"train", "--config", cfg.string(), "--out", "runs", "--seeds", "42-43",
                         "--agents", "ppo,random", "--updates", "2", "--eval-episodes", "2", "-v"});
  ::unsetenv("SEMADAPT_OUT_ROOT");
  CHECK(t.code == 0);
  const fs::path runs = dir.path / "runs";
  for (const char* f : {"ppo_seed42.csv", "ppo_seed43.ckpt", "random_seed43.csv", "manifest.json"}) {
    CHECK(fs::exists(runs / f));
  }
  CHECK(t.out.find("done  ppo_seed42") != std::string::npos);

  const Outcome e = cli({"eval", "--config", cfg.string(), "--out", runs.string(), "--seeds", "42",
                         "--agents", "ppo", "--eval-episodes", "2"});
  CHECK(e.code == 0);
  const Outcome r = cli({"report", runs.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(runs / "report" / "summary.json"));

  const Outcome missing = cli({"eval", "--config", cfg.string(), "--out", (dir.path / "none").string(),
                               "--agents", "dqn", "--seeds", "42"});
  CHECK(missing.code == 2);
}

}
