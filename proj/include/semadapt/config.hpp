#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "semadapt/baselines.hpp"
#include "semadapt/cppo.hpp"
#include "semadapt/environment.hpp"
#include "semadapt/shield.hpp"

namespace semadapt {

enum class AgentKind { TcPpo, Ppo, Dqn, Random };

inline constexpr std::array<AgentKind, 4> kAllAgents = {AgentKind::TcPpo, AgentKind::Ppo,
                                                       AgentKind::Dqn, AgentKind::Random};

std::string_view to_string(AgentKind a);
std::optional<AgentKind> parse_agent(std::string_view name);

std::string_view to_string(PredictorMode m);
std::optional<PredictorMode> parse_predictor(std::string_view name);

/// Parses "no_shield,fixed_duals" style lists; "none" or "" gives no flags.
/// Throws std::invalid_argument on an unknown name.
Ablations parse_ablations(std::string_view list);

struct ExperimentSpec {
  std::string scenario = "n8";
  std::vector<AgentKind> agents = {kAllAgents.begin(), kAllAgents.end()};
  std::vector<std::uint64_t> seeds = {42, 43, 44, 45, 46};
  int eval_episodes = 30;
  // skip training; learning agents load <label>_seed<seed>.ckpt instead
  bool eval_only = false;
  // applied to the tcppo agent
  Ablations ablations;
  std::string output_dir = "runs";
  int workers = 1;
};

struct Config {
  ExperimentSpec experiment;
  EnvConfig env;
  TrainConfig train;
  DqnConfig dqn;
  ShieldConfig shield;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing keys keep their defaults; unknown keys and type mismatches throw
/// ConfigError. The result is validated.
Config parse_config(const nlohmann::json& doc);
Config load_config(const std::filesystem::path& path);
nlohmann::json to_json(const Config& cfg);
/// FNV-1a over the canonical JSON dump, as 16 hex digits.
std::string config_hash(const Config& cfg);

}  // namespace semadapt
