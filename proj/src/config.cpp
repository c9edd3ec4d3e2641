#include "semadapt/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace semadapt {

using nlohmann::json;

std::string_view to_string(AgentKind a) {
  switch (a) {
    case AgentKind::TcPpo: return "tcppo";
    case AgentKind::Ppo: return "ppo";
    case AgentKind::Dqn: return "dqn";
    case AgentKind::Random: return "random";
  }
  return "unknown";
}

std::optional<AgentKind> parse_agent(std::string_view name) {
  for (AgentKind a : kAllAgents) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view to_string(PredictorMode m) {
  switch (m) {
    case PredictorMode::Nominal: return "nominal";
    case PredictorMode::Bounded: return "bounded";
    case PredictorMode::Oracle: return "oracle";
  }
  return "unknown";
}

std::optional<PredictorMode> parse_predictor(std::string_view name) {
  for (PredictorMode m : {PredictorMode::Nominal, PredictorMode::Bounded, PredictorMode::Oracle}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

Ablations parse_ablations(std::string_view list) {
  Ablations a;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    const std::string_view item = list.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty() || item == "none") continue;
    if (item == "no_shield") {
      a.no_shield = true;
    } else if (item == "no_cost_critics") {
      a.no_cost_critics = true;
    } else if (item == "fixed_duals") {
      a.fixed_duals = true;
    } else if (item == "reversed_shield_order") {
      a.reversed_shield_order = true;
    } else {
      throw std::invalid_argument(
          "unknown ablation '" + std::string(item) +
          "' (expected no_shield, no_cost_critics, fixed_duals, reversed_shield_order)");
    }
  }
  return a;
}

namespace {

// One visitor drives both directions so parser and writer cannot drift.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
  }

  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) fail(key_path(item.key()), "unknown key");
    }
  }

  template <typename T>
  void operator()(const char* key, T& value) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    read(*it, value, key_path(key));
  }

  template <typename Fn>
  void section(const char* key, Fn&& fn) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    Reader sub(*it, key_path(key));
    fn(sub);
  }

 private:
  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  static void read(const json& j, int& v, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    v = j.get<int>();
  }
  static void read(const json& j, std::uint64_t& v, const std::string& where) {
    if (!j.is_number_unsigned()) fail(where, "expected a nonnegative integer");
    v = j.get<std::uint64_t>();
  }
  static void read(const json& j, double& v, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    v = j.get<double>();
  }
  static void read(const json& j, bool& v, const std::string& where) {
    if (!j.is_boolean()) fail(where, "expected true or false");
    v = j.get<bool>();
  }
  static void read(const json& j, std::string& v, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    v = j.get<std::string>();
  }
  static void read(const json& j, Primitive& v, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a primitive name");
    const auto p = parse_primitive(j.get<std::string>());
    if (!p) fail(where, "unknown primitive '" + j.get<std::string>() + "'");
    v = *p;
  }
  static void read(const json& j, PredictorMode& v, const std::string& where) {
    if (!j.is_string()) fail(where, "expected nominal, bounded or oracle");
    const auto m = parse_predictor(j.get<std::string>());
    if (!m) fail(where, "unknown predictor '" + j.get<std::string>() + "'");
    v = *m;
  }
  static void read(const json& j, AgentKind& v, const std::string& where) {
    if (!j.is_string()) fail(where, "expected an agent name");
    const auto a = parse_agent(j.get<std::string>());
    if (!a) fail(where, "unknown agent '" + j.get<std::string>() + "' (expected tcppo, ppo, dqn, random)");
    v = *a;
  }
  template <typename T>
  static void read(const json& j, std::vector<T>& v, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array");
    std::vector<T> out(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) read(j[i], out[i], where + "[" + std::to_string(i) + "]");
    v = std::move(out);
  }
  template <typename T, std::size_t N>
  static void read(const json& j, std::array<T, N>& v, const std::string& where) {
    if (!j.is_array() || j.size() != N) fail(where, "expected an array of " + std::to_string(N));
    for (std::size_t i = 0; i < N; ++i) read(j[i], v[i], where + "[" + std::to_string(i) + "]");
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

class Writer {
 public:
  explicit Writer(json& obj) : obj_(obj) { obj_ = json::object(); }

  template <typename T>
  void operator()(const char* key, const T& value) {
    obj_[key] = write(value);
  }

  template <typename Fn>
  void section(const char* key, Fn&& fn) {
    json sub;
    Writer w(sub);
    fn(w);
    obj_[key] = std::move(sub);
  }

 private:
  template <typename T>
  static json write(const T& v) {
    if constexpr (std::is_same_v<T, Primitive> || std::is_same_v<T, PredictorMode> ||
                  std::is_same_v<T, AgentKind>) {
      return std::string(to_string(v));
    } else if constexpr (requires { v.begin(); } && !std::is_same_v<T, std::string>) {
      json arr = json::array();
      for (const auto& x : v) arr.push_back(write(x));
      return arr;
    } else {
      return v;
    }
  }

  json& obj_;
};

template <typename V, typename C>
void visit(V& v, C& c) {
  v.section("experiment", [&](auto& s) {
    auto& e = c.experiment;
    s("scenario", e.scenario);
    s("agents", e.agents);
    s("seeds", e.seeds);
    s("eval_episodes", e.eval_episodes);
    s("eval_only", e.eval_only);
    s("output_dir", e.output_dir);
    s("workers", e.workers);
    s.section("ablations", [&](auto& a) {
      a("no_shield", e.ablations.no_shield);
      a("no_cost_critics", e.ablations.no_cost_critics);
      a("fixed_duals", e.ablations.fixed_duals);
      a("reversed_shield_order", e.ablations.reversed_shield_order);
    });
  });
  v.section("env", [&](auto& s) {
    auto& e = c.env;
    s("n_ues", e.n_ues);
    s("allow_any_ue_count", e.allow_any_ue_count);
    s("episode_frames", e.episode_frames);
    s("frame_ms", e.frame_ms);
    s("weights", e.weights);
    s("beta_u", e.beta_u);
    s("beta_delta", e.beta_delta);
    s("chi", e.chi);
    s("gain_mean", e.gain_mean);
    s("gain_sigma", e.gain_sigma);
    s("quality_decay", e.quality_decay);
    s("initial_quality_min", e.initial_quality_min);
    s("initial_quality_max", e.initial_quality_max);
    s("eta", e.eta);
    s("alpha", e.alpha);
    s("feedback_sigma", e.feedback_sigma);
    s("tardiness_penalty", e.tardiness_penalty);
    s("arrival_prob", e.arrival_prob);
    s("job_mean_ms", e.job_mean_ms);
    s("channel_mean", e.channel_mean);
    s("channel_persistence", e.channel_persistence);
    s("channel_sigma", e.channel_sigma);
    s("deadline_min_ms", e.deadline_min_ms);
    s("deadline_max_ms", e.deadline_max_ms);
    s("obs_max_overshoot", e.obs_max_overshoot);
    s.section("latency", [&](auto& l) {
      auto& m = e.latency;
      l("ric_ms", m.ric_ms);
      l("total_ms", m.total_ms);
      l("fb_share", m.fb_share);
      l("tx_share", m.tx_share);
      l("reconf_share", m.reconf_share);
      l("congestion_coeff", m.congestion_coeff);
      l("fading_coeff", m.fading_coeff);
      l("jitter_sigma", m.jitter_sigma);
      l("jitter_clip_sigmas", m.jitter_clip_sigmas);
      l("queue_max_ms", m.queue_max_ms);
    });
    s.section("grants", [&](auto& g) {
      auto& d = e.grants;
      g("numerologies", d.numerologies);
      g("grants_min", d.grants_min);
      g("grants_max", d.grants_max);
      g("symbol_choices", d.symbol_choices);
      g("control_mean_ms", d.control_mean_ms);
      g("control_sigma_ms", d.control_sigma_ms);
    });
  });
  v.section("train", [&](auto& s) {
    auto& t = c.train;
    s("gamma", t.gamma);
    s("lambda_gae", t.lambda_gae);
    s("clip_eps", t.clip_eps);
    s("rollout_length", t.rollout_length);
    s("minibatch_size", t.minibatch_size);
    s("updates", t.updates);
    s("epochs", t.epochs);
    s("entropy_coef", t.entropy_coef);
    s("policy_lr", t.policy_lr);
    s("critic_lr", t.critic_lr);
    s("max_grad_norm", t.max_grad_norm);
    s("hidden", t.hidden);
    s("policy_init_scale", t.policy_init_scale);
    s("per_frame_values", t.per_frame_values);
    s("dual_step", t.dual_step);
    s("dual_ema", t.dual_ema);
    s("initial_lambda", t.initial_lambda);
    s("deadline_budget_ms", t.deadline_budget_ms);
    s("fixed_lambda", t.fixed_lambda);
    s("ratio_on_shielded_action", t.ratio_on_shielded_action);
  });
  v.section("dqn", [&](auto& s) {
    auto& d = c.dqn;
    s("replay_capacity", d.replay_capacity);
    s("batch_size", d.batch_size);
    s("target_sync", d.target_sync);
    s("eps_start", d.eps_start);
    s("eps_end", d.eps_end);
    s("eps_decay_fraction", d.eps_decay_fraction);
    s("lr", d.lr);
    s("gamma", d.gamma);
    s("train_every", d.train_every);
    s("warmup", d.warmup);
    s("frames", d.frames);
    s("log_every", d.log_every);
    s("max_grad_norm", d.max_grad_norm);
    s("hidden", d.hidden);
    s("ric_target_fraction", d.ric_target_fraction);
    s("air_target_ms", d.air_target_ms);
    s("penalty", d.penalty);
    s("shield_on_execution", d.shield_on_execution);
  });
  v.section("shield", [&](auto& s) {
    s("fallback_order", c.shield.fallback_order);
    s("predictor", c.shield.predictor);
  });
}

}  // namespace

void Config::validate() const {
  auto wrap = [](const char* section, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(section) + ": " + e.what());
    }
  };
  wrap("env", [&] { env.validate(); });
  wrap("train", [&] { train.validate(); });
  wrap("dqn", [&] { dqn.validate(); });
  wrap("shield", [&] { shield.validate(); });
  const ExperimentSpec& e = experiment;
  if (e.seeds.empty()) throw ConfigError("experiment.seeds: must list at least one seed");
  if (e.agents.empty()) throw ConfigError("experiment.agents: must list at least one agent");
  if (e.eval_episodes < 1) throw ConfigError("experiment.eval_episodes: must be >= 1");
  if (e.workers < 1) throw ConfigError("experiment.workers: must be >= 1");
  if (e.scenario.empty()) throw ConfigError("experiment.scenario: must be nonempty");
}

Config parse_config(const json& doc) {
  Config cfg;
  {
    Reader r(doc, "");
    visit(r, cfg);
  }
  cfg.validate();
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const Config& cfg) {
  json doc;
  Writer w(doc);
  visit(w, cfg);
  return doc;
}

std::string config_hash(const Config& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace semadapt
