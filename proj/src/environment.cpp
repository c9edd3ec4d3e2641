#include "semadapt/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace semadapt {

namespace {

[[noreturn]] void reject(const std::string& what) { throw std::invalid_argument(what); }

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) reject(std::string(name) + " must lie in [0, 1]");
}

void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) reject(std::string(name) + " must be finite and >= 0");
}

}  // namespace

int Action::scheduled_count() const {
  return static_cast<int>(std::count(mask.begin(), mask.end(), true));
}

std::vector<double> EnvConfig::resolved_weights() const {
  if (weights.empty()) return std::vector<double>(n_ues, 1.0 / n_ues);
  return weights;
}

void EnvConfig::validate() const {
  if (allow_any_ue_count) {
    if (n_ues < 1) reject("n_ues must be >= 1");
  } else if (n_ues != 8 && n_ues != 16) {
    reject("n_ues must be in {8, 16} (got " + std::to_string(n_ues) +
           "); set allow_any_ue_count to override");
  }
  if (episode_frames < 1) reject("episode_frames must be >= 1");
  require_nonneg(frame_ms, "frame_ms");
  if (!weights.empty()) {
    if (static_cast<int>(weights.size()) != n_ues) reject("weights must have n_ues entries");
    double sum = 0.0;
    for (double w : weights) {
      require_nonneg(w, "weights");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) reject("weights must sum to 1");
  }
  require_nonneg(beta_u, "beta_u");
  require_nonneg(beta_delta, "beta_delta");
  for (double c : chi) require_nonneg(c, "chi");
  for (double g : gain_mean) require_nonneg(g, "gain_mean");
  require_nonneg(gain_sigma, "gain_sigma");
  require_nonneg(quality_decay, "quality_decay");
  require_unit(initial_quality_min, "initial_quality_min");
  require_unit(initial_quality_max, "initial_quality_max");
  if (initial_quality_min > initial_quality_max) reject("initial_quality_min > initial_quality_max");
  require_unit(eta, "eta");
  if (!(alpha > 0.0 && alpha <= 1.0)) reject("alpha must lie in (0, 1]");
  require_nonneg(feedback_sigma, "feedback_sigma");
  require_nonneg(tardiness_penalty, "tardiness_penalty");
  require_unit(arrival_prob, "arrival_prob");
  require_nonneg(job_mean_ms, "job_mean_ms");
  require_unit(channel_mean, "channel_mean");
  require_unit(channel_persistence, "channel_persistence");
  require_nonneg(channel_sigma, "channel_sigma");
  if (!(deadline_min_ms > 0.0 && deadline_min_ms <= deadline_max_ms)) {
    reject("deadlines need 0 < deadline_min_ms <= deadline_max_ms");
  }
  require_nonneg(obs_max_overshoot, "obs_max_overshoot");

  const LatencyModel& lm = latency;
  for (int k = 0; k < kNumPrimitives; ++k) {
    require_nonneg(lm.ric_ms[k], "latency.ric_ms");
    require_nonneg(lm.total_ms[k], "latency.total_ms");
    if (lm.ric_ms[k] > lm.total_ms[k]) reject("latency.ric_ms exceeds latency.total_ms");
  }
  require_nonneg(lm.fb_share, "latency.fb_share");
  require_nonneg(lm.tx_share, "latency.tx_share");
  require_nonneg(lm.reconf_share, "latency.reconf_share");
  if (std::abs(lm.fb_share + lm.tx_share + lm.reconf_share - 1.0) > 1e-9) {
    reject("latency shares must sum to 1");
  }
  require_nonneg(lm.congestion_coeff, "latency.congestion_coeff");
  require_nonneg(lm.fading_coeff, "latency.fading_coeff");
  require_nonneg(lm.jitter_sigma, "latency.jitter_sigma");
  require_nonneg(lm.jitter_clip_sigmas, "latency.jitter_clip_sigmas");
  if (!(lm.queue_max_ms > 0.0)) reject("latency.queue_max_ms must be > 0");

  const GrantDistribution& g = grants;
  if (g.numerologies.empty()) reject("grants.numerologies must be nonempty");
  for (int mu : g.numerologies) {
    if (mu < 0 || mu > 2) reject("grants.numerologies entries must be in {0,1,2}");
  }
  if (g.symbol_choices.empty()) reject("grants.symbol_choices must be nonempty");
  for (int s : g.symbol_choices) {
    if (s != 2 && s != 4 && s != 7) reject("grants.symbol_choices entries must be in {2,4,7}");
  }
  if (g.grants_min < 0 || g.grants_min > g.grants_max) {
    reject("grants need 0 <= grants_min <= grants_max");
  }
  require_nonneg(g.control_mean_ms, "grants.control_mean_ms");
  require_nonneg(g.control_sigma_ms, "grants.control_sigma_ms");
}

double semantic_gain(Primitive p, bool scheduled, double on_time_factor, double channel,
                     double noise, const EnvConfig& cfg) {
  if (!scheduled) return -cfg.quality_decay;
  const double raw = std::max(cfg.gain_mean[index_of(p)] + noise, 0.0);
  return raw * channel * on_time_factor - cfg.quality_decay;
}

double semantic_gain(Primitive p, bool scheduled, double on_time_factor, double channel,
                     const EnvConfig& cfg, Rng& rng) {
  return semantic_gain(p, scheduled, on_time_factor, channel,
                       cfg.gain_sigma * standard_normal(rng), cfg);
}

double feedback_oracle(double quality, double debt, double noise, const EnvConfig& cfg) {
  return std::clamp(quality - cfg.tardiness_penalty * std::min(debt, 1.0) + noise, 0.0, 1.0);
}

double feedback_oracle(double quality, double debt, const EnvConfig& cfg, Rng& rng) {
  return feedback_oracle(quality, debt, cfg.feedback_sigma * standard_normal(rng), cfg);
}

double fuse_utility(double quality, double feedback, double eta) {
  return (1.0 - eta) * quality + eta * feedback;
}

double ewma_update(double ema, double fused, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  return (1.0 - alpha) * ema + alpha * fused;
}

double queue_update(double queue_ms, double arrival_ms, bool scheduled, double ric_ms,
                    double queue_max_ms) {
  const double served = scheduled ? ric_ms : 0.0;
  return std::min(std::max(queue_ms + arrival_ms - served, 0.0), queue_max_ms);
}

double compute_reward(const std::vector<double>& next_emas, Primitive p,
                      const std::vector<double>& next_debts, const EnvConfig& cfg) {
  const std::vector<double> w = cfg.resolved_weights();
  double utility = 0.0;
  for (std::size_t i = 0; i < next_emas.size(); ++i) utility += w[i] * next_emas[i];
  double debt = 0.0;
  for (double d : next_debts) debt += d;
  return utility - cfg.beta_u * cfg.chi[index_of(p)] - cfg.beta_delta * debt;
}

CostVector compute_costs(const Action& action, const std::vector<LatencyComponents>& latencies,
                         const std::vector<double>& deadlines) {
  CostVector c;
  if (action.primitive == Primitive::NoOp) return c;
  for (std::size_t i = 0; i < action.mask.size(); ++i) {
    if (!action.mask[i]) continue;
    c.ric_time_ms += latencies[i].ric_ms;
    c.overshoot_ms += std::max(latencies[i].total_ms - deadlines[i], 0.0);
  }
  return c;
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  weights_ = cfg_.resolved_weights();
  obs_window_scale_ = cfg_.grants.max_window_ms();
  if (!(obs_window_scale_ > 0.0)) obs_window_scale_ = 1.0;
}

std::vector<double> Environment::reset(std::uint64_t seed) {
  rng_.seed(seed);
  const int n = cfg_.n_ues;
  ues_.assign(n, UEState{});
  std::uniform_real_distribution<double> deadline(cfg_.deadline_min_ms, cfg_.deadline_max_ms);
  std::uniform_real_distribution<double> quality(cfg_.initial_quality_min,
                                                 cfg_.initial_quality_max);
  const double stationary_sd =
      cfg_.channel_sigma / std::sqrt(std::max(1.0 - cfg_.channel_persistence * cfg_.channel_persistence, 1e-12));
  for (UEState& ue : ues_) {
    ue.deadline_ms = deadline(rng_);
    ue.quality = quality(rng_);
    ue.utility_ema = ue.quality;
    ue.slack_ms = ue.deadline_ms;
    ue.debt = 0.0;
    ue.queue_ms = 0.0;
    ue.channel = std::clamp(cfg_.channel_mean + stationary_sd * standard_normal(rng_), 0.0, 1.0);
  }
  frame_ = 0;
  started_ = true;
  begin_frame();
  return observation();
}

void Environment::begin_frame() {
  radio_ = sample_frame_radio(cfg_.grants, rng_);
  jitter_.resize(cfg_.n_ues);
  for (double& j : jitter_) j = sample_jitter(cfg_.latency, rng_);
}

std::vector<double> Environment::observation() const {
  std::vector<double> obs;
  obs.reserve(cfg_.observation_size());
  const double qmax = cfg_.latency.queue_max_ms;
  for (const UEState& ue : ues_) {
    obs.push_back(ue.quality);
    obs.push_back(ue.utility_ema);
    obs.push_back(std::clamp(ue.slack_ms / ue.deadline_ms, -cfg_.obs_max_overshoot, 1.0));
    obs.push_back(std::min(ue.debt, 1.0));
    obs.push_back(ue.queue_ms / qmax);
    obs.push_back(ue.channel);
  }
  obs.push_back(std::clamp(radio_.t_avail_ms / obs_window_scale_, 0.0, 1.0));
  return obs;
}

LatencyComponents Environment::predicted_latency(int ue, Primitive p, PredictorMode mode) const {
  const UEState& s = ues_[ue];
  double jitter = 1.0;
  switch (mode) {
    case PredictorMode::Nominal: jitter = 1.0; break;
    case PredictorMode::Bounded: jitter = cfg_.latency.jitter_upper_bound(); break;
    case PredictorMode::Oracle: jitter = jitter_[ue]; break;
  }
  return scaled_latency(p, s.queue_ms, s.channel, jitter, cfg_.latency);
}

StepResult Environment::step(const Action& proposed) {
  if (!started_ || done()) throw EpisodeOver("step called outside a live episode; call reset()");
  const int n = cfg_.n_ues;
  if (static_cast<int>(proposed.mask.size()) != n) {
    throw std::invalid_argument("action mask length " + std::to_string(proposed.mask.size()) +
                                " does not match n_ues " + std::to_string(n));
  }
  Action action = proposed;
  if (action.primitive == Primitive::NoOp) std::fill(action.mask.begin(), action.mask.end(), false);

  StepResult out;
  StepInfo& info = out.info;
  info.frame = frame_;
  info.t_avail_ms = radio_.t_avail_ms;
  info.latencies.assign(n, LatencyComponents{});
  info.scheduled = action.mask;
  info.deadline_hit.assign(n, false);

  // RIC work is served in index order; anything beyond the window waits
  // for the next frame.
  double cumulative_ric = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!action.mask[i]) continue;
    UEState& ue = ues_[i];
    LatencyComponents lat =
        scaled_latency(action.primitive, ue.queue_ms, ue.channel, jitter_[i], cfg_.latency);
    cumulative_ric += lat.ric_ms;
    if (cumulative_ric > radio_.t_avail_ms) {
      lat = LatencyComponents::from_parts(lat.fb_ms, lat.ric_ms + cfg_.frame_ms, lat.tx_ms,
                                          lat.reconf_ms);
      ++info.overflowed;
    }
    const SlackDebt sd = slack_and_debt(lat.total_ms, ue.deadline_ms);
    ue.slack_ms = sd.slack_ms;
    ue.debt = sd.debt;
    info.latencies[i] = lat;
    info.deadline_hit[i] = lat.total_ms <= ue.deadline_ms;
    ++info.adaptations;
    if (info.deadline_hit[i]) ++info.hits;
    info.air_overhead_ms += lat.air_ms();
  }

  std::exponential_distribution<double> job(cfg_.job_mean_ms > 0.0 ? 1.0 / cfg_.job_mean_ms : 1.0);
  std::vector<double> emas(n), debts(n), deadlines(n);
  for (int i = 0; i < n; ++i) {
    UEState& ue = ues_[i];
    // fixed draw count per UE keeps the stream independent of the action
    const double gain_noise = cfg_.gain_sigma * standard_normal(rng_);
    const bool arrives = uniform01(rng_) < cfg_.arrival_prob;
    const double job_ms = job(rng_);
    const double fb_noise = cfg_.feedback_sigma * standard_normal(rng_);
    const double ch_noise = cfg_.channel_sigma * standard_normal(rng_);

    const bool sched = action.mask[i];
    const double on_time = std::max(1.0 - ue.debt, 0.0);
    ue.quality = std::clamp(
        ue.quality + semantic_gain(action.primitive, sched, on_time, ue.channel, gain_noise, cfg_),
        0.0, 1.0);
    const double arrival = (arrives && cfg_.job_mean_ms > 0.0) ? job_ms : 0.0;
    ue.queue_ms = queue_update(ue.queue_ms, arrival, sched, info.latencies[i].ric_ms,
                               cfg_.latency.queue_max_ms);
    const double feedback = feedback_oracle(ue.quality, ue.debt, fb_noise, cfg_);
    ue.utility_ema = std::clamp(
        ewma_update(ue.utility_ema, fuse_utility(ue.quality, feedback, cfg_.eta), cfg_.alpha), 0.0,
        1.0);
    ue.channel = std::clamp(cfg_.channel_mean +
                                cfg_.channel_persistence * (ue.channel - cfg_.channel_mean) +
                                ch_noise,
                            0.0, 1.0);
    emas[i] = ue.utility_ema;
    debts[i] = ue.debt;
    deadlines[i] = ue.deadline_ms;
  }

  out.reward = compute_reward(emas, action.primitive, debts, cfg_);
  out.costs = compute_costs(action, info.latencies, deadlines);
  double mean_u = 0.0;
  for (double e : emas) mean_u += e;
  info.mean_utility = mean_u / n;

  ++frame_;
  out.done = done();
  if (!out.done) begin_frame();
  out.observation = observation();
  return out;
}

}  // namespace semadapt
