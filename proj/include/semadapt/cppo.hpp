#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "semadapt/environment.hpp"
#include "semadapt/metrics.hpp"
#include "semadapt/nn.hpp"
#include "semadapt/policy.hpp"
#include "semadapt/shield.hpp"

namespace semadapt {

struct Ablations {
  bool no_shield = false;
  bool no_cost_critics = false;
  bool fixed_duals = false;
  bool reversed_shield_order = false;

  bool any() const { return no_shield || no_cost_critics || fixed_duals || reversed_shield_order; }
  /// "+"-joined active flag names, empty when none are set.
  std::string label() const;
  bool operator==(const Ablations&) const = default;
};

struct TrainConfig {
  double gamma = 0.99;
  double lambda_gae = 0.95;
  double clip_eps = 0.2;
  int rollout_length = 64;
  int minibatch_size = 256;
  int updates = 120;
  int epochs = 4;
  double entropy_coef = 0.01;
  double policy_lr = 3e-4;
  double critic_lr = 3e-4;
  double max_grad_norm = 0.5;
  std::vector<int> hidden = {256, 128};
  double policy_init_scale = 0.01;
  // critic heads predict per-frame averages; values are output / (1 - gamma)
  bool per_frame_values = true;
  double value_scale() const { return per_frame_values ? 1.0 / (1.0 - gamma) : 1.0; }

  // dual ascent
  double dual_step = 1e-3;
  double dual_ema = 0.9;
  std::array<double, 2> initial_lambda = {0.0, 0.0};
  double deadline_budget_ms = 0.0;  // d2
  // multipliers used when the duals are frozen or costs are folded into the reward
  std::array<double, 2> fixed_lambda = {0.01, 0.01};

  // ratio uses the log-prob of the shielded (executed) action; false stores
  // the log-prob of the raw sampled proposal instead
  bool ratio_on_shielded_action = true;

  /// Throws std::invalid_argument on an out-of-range value.
  void validate() const;
};

struct DualState {
  std::array<double, 2> lambda = {0.0, 0.0};
  double ema = 0.9;
  double step = 1e-3;
};

/// Projected dual ascent followed by EMA smoothing. raw_out, if given,
/// receives the projected pre-EMA multipliers.
DualState dual_update(const DualState& duals, double mean_c1, double mean_c2, double budget_c1,
                      double budget_c2, std::array<double, 2>* raw_out = nullptr);

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// values has one more entry than signals (the bootstrap). A true done flag
/// at t cuts the recursion and treats V(t+1) as zero.
GaeResult gae(std::span<const double> values, std::span<const double> signals, double gamma,
              double lambda_gae, std::span<const bool> dones = {});

struct Transition {
  std::vector<double> observation;
  Action action;
  double log_prob = 0.0;
  double reward = 0.0;
  CostVector costs;
  double value_r = 0.0;
  double value_c1 = 0.0;
  double value_c2 = 0.0;
  bool done = false;

  // bookkeeping for metrics
  double t_avail_ms = 0.0;
  double utility = 0.0;
  double air_ms = 0.0;
  int adaptations = 0;
  int hits = 0;
  bool fallback = false;
};

/// Mini-batch fed to the surrogate; columns of obs are samples.
struct PolicyBatch {
  Eigen::MatrixXd obs;
  std::vector<Action> actions;
  std::vector<double> old_log_probs;
  std::vector<double> adv_r;
  std::array<std::vector<double>, 2> adv_c;
};

struct PolicyLoss {
  double loss = 0.0;
  double surrogate = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
};

/// Negative clipped Lagrangian surrogate minus the entropy bonus. If grad is
/// non-empty the parameter gradient is accumulated into it.
PolicyLoss policy_loss(const Mlp& policy, const PolicyBatch& batch, std::array<double, 2> lambda,
                       double clip_eps, double entropy_coef, std::span<double> grad = {});

/// Half mean-squared error summed over the critic heads. targets holds one
/// vector per output; an empty vector leaves that head out of the loss.
double critic_loss(const Mlp& critic, const Eigen::MatrixXd& obs,
                   const std::vector<std::vector<double>>& targets, std::span<double> grad = {});

/// In-place standardization to zero mean / unit variance.
void standardize(std::vector<double>& values);

/// Owns one environment and restarts it with a fresh derived seed whenever an
/// episode finishes.
class EpisodeRunner {
 public:
  EpisodeRunner(EnvConfig cfg, std::uint64_t seed);

  Environment& env() { return env_; }
  const std::vector<double>& observation() const { return obs_; }
  StepResult step(const Action& action);
  int episodes_started() const { return episodes_; }

 private:
  void start_episode();

  Environment env_;
  Rng seeds_;
  std::vector<double> obs_;
  int episodes_ = 0;
};

SampledAction sample_action(const Mlp& policy, std::span<const double> obs, int n_ues, Rng& rng);

/// Shield settings actually used at execution time; nullptr-like when off.
struct ExecutionShield {
  bool enabled = true;
  ShieldConfig config;
};

/// Collects exactly `length` transitions, storing the executed (shielded)
/// action with its log-prob under the current policy.
struct PpoNetworks {
  Mlp policy;
  Mlp value;  // reward critic, one output
  Mlp cost;   // cost critics, outputs (c1, c2)
};

PpoNetworks make_ppo_networks(const EnvConfig& env, const TrainConfig& train, Rng& rng);

std::vector<Transition> collect_rollout(EpisodeRunner& runner, const PpoNetworks& nets,
                                        const ExecutionShield& shield,
                                        int length, Rng& rng, bool ratio_on_shielded_action = true,
                                        std::vector<ShieldLogRow>* shield_log = nullptr,
                                        int update_index = 0, double value_scale = 1.0);

struct PpoOutcome {
  PpoNetworks nets;
  DualState duals;
  std::vector<MetricsRow> rows;
  std::vector<ShieldLogRow> shield_log;
  std::int64_t frames = 0;
};

struct PpoVariant {
  // false gives the unconstrained baseline: multipliers held at 0 and the
  // cost heads receive no gradient
  bool constrained = true;
  Ablations ablations;
};

PpoOutcome train_ppo(const EnvConfig& env_cfg, const TrainConfig& train_cfg,
                     const ShieldConfig& shield_cfg, const PpoVariant& variant, std::uint64_t seed,
                     const std::string& agent_label);

/// Proposes a raw action for the current frame; the shield is applied after.
using Proposer = std::function<Action(const Environment&, std::span<const double> obs, Rng&)>;

struct EvalSummary {
  Moments reward, utility, air_overhead_ms, ric_ms, hit_rate, overshoot_ms;
  std::size_t episodes = 0;
};

EvalSummary summarize_rows(const std::vector<MetricsRow>& rows);

/// Runs `episodes` evaluation episodes. Episode seeds derive from `seed` and
/// never coincide with training seeds.
EvalSummary evaluate_agent(const EnvConfig& env_cfg, const Proposer& proposer,
                           const ExecutionShield& shield, int episodes, std::uint64_t seed,
                           const std::string& agent_label, std::vector<MetricsRow>* rows = nullptr,
                           std::vector<ShieldLogRow>* shield_log = nullptr);

enum class EvalMode { Greedy, Stochastic };

Proposer policy_proposer(const Mlp& policy, int n_ues, EvalMode mode);

EvalSummary evaluate(const Mlp& policy, const EnvConfig& env_cfg, int episodes,
                     const ExecutionShield& shield, std::uint64_t seed,
                     EvalMode mode = EvalMode::Greedy, std::vector<MetricsRow>* rows = nullptr);

/// Seed for the k-th item of a named stream derived from a run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t k);

}  // namespace semadapt
