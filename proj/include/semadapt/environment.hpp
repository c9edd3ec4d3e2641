#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "semadapt/latency.hpp"

namespace semadapt {

/// Composite adaptation decision: one primitive plus the UEs that run it.
struct Action {
  Primitive primitive = Primitive::NoOp;
  std::vector<bool> mask;

  static Action noop(int n_ues) { return Action{Primitive::NoOp, std::vector<bool>(n_ues, false)}; }
  int scheduled_count() const;
  bool operator==(const Action&) const = default;
};

struct UEState {
  double quality = 0.0;
  double utility_ema = 0.0;
  double slack_ms = 0.0;
  double debt = 0.0;
  double queue_ms = 0.0;
  double channel = 0.0;
  double deadline_ms = 0.0;
};

struct CostVector {
  double ric_time_ms = 0.0;  // c1
  double overshoot_ms = 0.0; // c2
};

/// How the per-frame latency table handed to the shield is predicted.
enum class PredictorMode {
  Nominal,  // means + deterministic congestion/fading, no jitter
  Bounded,  // as Nominal, scaled by the jitter upper bound
  Oracle,   // the realized values for this frame
};

struct EnvConfig {
  int n_ues = 8;
  bool allow_any_ue_count = false;
  int episode_frames = 200;
  double frame_ms = 10.0;

  std::vector<double> weights;  // empty means uniform 1/N
  double beta_u = 0.02;
  double beta_delta = 0.5;
  std::array<double, kNumPrimitives> chi = {2.7, 1.6, 0.7, 0.9, 0.0};
  std::array<double, kNumPrimitives> gain_mean = {0.028, 0.019, 0.011, 0.014, 0.0};
  double gain_sigma = 0.005;
  double quality_decay = 0.008;
  double initial_quality_min = 0.5;
  double initial_quality_max = 0.8;

  double eta = 0.5;
  double alpha = 0.2;
  double feedback_sigma = 0.05;
  double tardiness_penalty = 0.5;

  double arrival_prob = 0.3;
  double job_mean_ms = 1.0;

  double channel_mean = 0.8;
  double channel_persistence = 0.9;
  double channel_sigma = 0.05;

  double deadline_min_ms = 6.0;
  double deadline_max_ms = 12.0;

  // Observation clip for slack/deadline on the negative side.
  double obs_max_overshoot = 2.0;

  LatencyModel latency;
  GrantDistribution grants;

  std::vector<double> resolved_weights() const;
  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
  int observation_size() const { return 6 * n_ues + 1; }
};

struct StepInfo {
  int frame = 0;
  double t_avail_ms = 0.0;
  std::vector<LatencyComponents> latencies;  // zero for unscheduled UEs
  std::vector<bool> scheduled;
  std::vector<bool> deadline_hit;  // meaningful for scheduled UEs only
  int adaptations = 0;
  int hits = 0;
  int overflowed = 0;  // scheduled UEs whose RIC work spilled past the window
  double air_overhead_ms = 0.0;
  double mean_utility = 0.0;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  CostVector costs;
  StepInfo info;
  bool done = false;
};

class EpisodeOver : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Building blocks of the transition, exposed for direct testing.
double semantic_gain(Primitive p, bool scheduled, double on_time_factor, double channel,
                     const EnvConfig& cfg, Rng& rng);
double semantic_gain(Primitive p, bool scheduled, double on_time_factor, double channel,
                     double noise, const EnvConfig& cfg);
double feedback_oracle(double quality, double debt, const EnvConfig& cfg, Rng& rng);
double feedback_oracle(double quality, double debt, double noise, const EnvConfig& cfg);
double fuse_utility(double quality, double feedback, double eta);
double ewma_update(double ema, double fused, double alpha);
double queue_update(double queue_ms, double arrival_ms, bool scheduled, double ric_ms,
                    double queue_max_ms);
double compute_reward(const std::vector<double>& next_emas, Primitive p,
                      const std::vector<double>& next_debts, const EnvConfig& cfg);
CostVector compute_costs(const Action& action, const std::vector<LatencyComponents>& latencies,
                         const std::vector<double>& deadlines);

class Environment {
 public:
  explicit Environment(EnvConfig cfg);

  std::vector<double> reset(std::uint64_t seed);
  StepResult step(const Action& action);

  const EnvConfig& config() const { return cfg_; }
  const std::vector<UEState>& ues() const { return ues_; }
  const FrameRadio& radio() const { return radio_; }
  int frame() const { return frame_; }
  bool done() const { return frame_ >= cfg_.episode_frames; }
  std::vector<double> observation() const;

  /// Latency of UE i under primitive p in the current frame, as seen by the
  /// given predictor.
  LatencyComponents predicted_latency(int ue, Primitive p, PredictorMode mode) const;

 private:
  void begin_frame();

  EnvConfig cfg_;
  std::vector<double> weights_;
  double obs_window_scale_ = 1.0;
  Rng rng_;
  std::vector<UEState> ues_;
  FrameRadio radio_;
  std::vector<double> jitter_;  // pre-drawn for the current frame
  int frame_ = 0;
  bool started_ = false;
};

}  // namespace semadapt
