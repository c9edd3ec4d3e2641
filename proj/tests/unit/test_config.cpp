#include <doctest.h>

#include "semadapt/config.hpp"

using namespace semadapt;
using nlohmann::json;

TEST_SUITE("config") {

TEST_CASE("shipped configs load") {
  const Config n8 = load_config(SEMADAPT_CONFIG_DIR "/n8.json");
  CHECK(n8.env.n_ues == 8);
  CHECK(n8.experiment.seeds == std::vector<std::uint64_t>{42, 43, 44, 45, 46});
  CHECK(n8.experiment.eval_episodes == 30);
  CHECK(n8.train.updates == 120);
  CHECK(n8.train.rollout_length == 64);
  const Config n16 = load_config(SEMADAPT_CONFIG_DIR "/n16.json");
  CHECK(n16.env.n_ues == 16);
}

TEST_CASE("dump then parse is the identity") {
  Config c;
  c.env.n_ues = 16;
  c.train.fixed_lambda = {0.3, 0.4};
  c.shield.fallback_order = ShieldConfig::reversed_order();
  c.shield.predictor = PredictorMode::Oracle;
  c.experiment.agents = {AgentKind::Dqn};
  c.experiment.ablations.no_shield = true;
  const json j = to_json(c);
  const Config back = parse_config(j);
  CHECK(to_json(back) == j);
  CHECK(config_hash(back) == config_hash(c));
}

TEST_CASE("missing keys keep defaults") {
  const Config c = parse_config(json::parse(R"({"env": {"n_ues": 16}})"));
  CHECK(c.env.n_ues == 16);
  CHECK(c.train.gamma == 0.99);
}

TEST_CASE("unknown keys are errors naming the path") {
  CHECK_THROWS_WITH_AS(parse_config(json::parse(R"({"env": {"latency": {"ric": 1}}})")),
                       doctest::Contains("env.latency.ric"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(json::parse(R"({"trian": {}})")), doctest::Contains("trian"),
                       ConfigError);
}

TEST_CASE("type and range errors") {
  CHECK_THROWS_WITH_AS(parse_config(json::parse(R"({"train": {"gamma": "high"}})")),
                       doctest::Contains("train.gamma"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(json::parse(R"({"env": {"n_ues": 7}})")),
                       doctest::Contains("{8, 16}"), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"shield": {"fallback_order": ["NoOp"]}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"experiment": {"agents": ["a2c"]}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"experiment": {"seeds": []}})")), ConfigError);
  CHECK_NOTHROW(parse_config(json::parse(R"({"env": {"n_ues": 7, "allow_any_ue_count": true}})")));
}

TEST_CASE("hash changes with any field") {
  const Config base;
  const std::string h = config_hash(base);
  CHECK(h.size() == 16u);
  Config a = base;
  a.env.latency.jitter_sigma = 0.051;
  Config b = base;
  b.dqn.warmup = 257;
  Config c = base;
  c.experiment.seeds.push_back(47);
  Config d = base;
  d.env.grants.symbol_choices = {2, 4};
  for (const Config* x : {&a, &b, &c, &d}) CHECK(config_hash(*x) != h);
  CHECK(config_hash(Config{}) == h);
}

TEST_CASE("ablation and agent names") {
  const Ablations a = parse_ablations("no_shield,reversed_shield_order");
  CHECK(a.no_shield);
  CHECK(a.reversed_shield_order);
  CHECK_FALSE(a.fixed_duals);
  CHECK(a.label() == "no_shield+reversed_shield_order");
  CHECK_FALSE(parse_ablations("none").any());
  CHECK_THROWS_AS(parse_ablations("no_critics"), std::invalid_argument);
  for (AgentKind k : kAllAgents) CHECK(parse_agent(to_string(k)) == k);
}

}
