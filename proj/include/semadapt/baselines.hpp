#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semadapt/cppo.hpp"

namespace semadapt {

// DQN action: one primitive applied to the k most urgent UEs.
struct DqnTemplate {
  Primitive primitive = Primitive::NoOp;
  int k = 0;
};

/// 5 primitives x k in {0, 1, ceil(N/4), ceil(N/2), N}; index = primitive * 5 + selector.
std::vector<DqnTemplate> dqn_templates(int n_ues);
Action realize_template(const DqnTemplate& t, const FeasibilityContext& ctx);

struct DqnConfig {
  int replay_capacity = 50000;
  int batch_size = 256;
  int target_sync = 200;  // gradient steps
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_decay_fraction = 0.5;
  double lr = 3e-4;
  double gamma = 0.99;
  int train_every = 4;
  int warmup = 256;
  int frames = 7680;
  int log_every = 64;
  double max_grad_norm = 10.0;
  std::vector<int> hidden = {256, 128};

  // under-utilisation penalty
  double ric_target_fraction = 0.3;
  double air_target_ms = 0.5;
  double penalty = 0.2;

  bool shield_on_execution = true;

  void validate() const;
};

/// Deduction applied to the DQN reward. Zero whenever t_avail is zero.
double underutilisation_penalty(double ric_ms, double air_ms, double t_avail_ms,
                                const DqnConfig& cfg);

double dqn_epsilon(const DqnConfig& cfg, int frame);

/// Fixed-capacity ring buffer of transitions.
class ReplayBuffer {
 public:
  struct Item {
    std::vector<double> obs;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_obs;
    bool done = false;
  };

  explicit ReplayBuffer(std::size_t capacity);
  void push(Item item);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Item& operator[](std::size_t i) const { return items_[i]; }

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Item> items_;
};

struct DqnOutcome {
  Mlp q;
  std::vector<MetricsRow> rows;
  std::vector<ShieldLogRow> shield_log;
  std::int64_t frames = 0;
};

DqnOutcome dqn_train(const EnvConfig& env_cfg, const DqnConfig& cfg,
                     const ShieldConfig& shield_cfg, std::uint64_t seed,
                     const std::string& agent_label = "dqn");

/// Greedy template choice realized to an Action (shield applied by the caller).
Proposer dqn_proposer(const Mlp& q, int n_ues);

/// Primitive uniform over the five, each mask bit Bernoulli(0.5); not projected.
Action random_proposal(int n_ues, Rng& rng);
/// random_proposal followed by the shield.
Action random_feasible_act(const Environment& env, const ShieldConfig& shield_cfg, Rng& rng);
Proposer random_proposer();

/// Unconstrained PPO: multipliers held at 0, cost heads untrained, shield on.
PpoOutcome unconstrained_ppo_train(const EnvConfig& env_cfg, const TrainConfig& train_cfg,
                                   const ShieldConfig& shield_cfg, std::uint64_t seed,
                                   const std::string& agent_label = "ppo");

}  // namespace semadapt
