#include "semadapt/cppo.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace semadapt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Eigen::MatrixXd stack_observations(const std::vector<Transition>& traj,
                                   std::span<const int> idx) {
  const auto rows = static_cast<Eigen::Index>(traj.front().observation.size());
  Eigen::MatrixXd obs(rows, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const auto& o = traj[idx[c]].observation;
    obs.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXd>(o.data(), rows);
  }
  return obs;
}

std::string join_chain(const std::vector<Primitive>& chain) {
  std::string s;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) s += '>';
    s += to_string(chain[i]);
  }
  return s;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
  return splitmix64(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL)) + k);
}

std::string Ablations::label() const {
  std::string s;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!s.empty()) s += '+';
    s += name;
  };
  add(no_shield, "no_shield");
  add(no_cost_critics, "no_cost_critics");
  add(fixed_duals, "fixed_duals");
  add(reversed_shield_order, "reversed_shield_order");
  return s;
}

void TrainConfig::validate() const {
  auto bad = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(gamma > 0.0 && gamma < 1.0)) bad("train.gamma must lie in (0, 1)");
  if (!(lambda_gae > 0.0 && lambda_gae <= 1.0)) bad("train.lambda_gae must lie in (0, 1]");
  if (!(clip_eps > 0.0)) bad("train.clip_eps must be > 0");
  if (rollout_length < 1) bad("train.rollout_length must be >= 1");
  if (minibatch_size < 1) bad("train.minibatch_size must be >= 1");
  if (updates < 0) bad("train.updates must be >= 0");
  if (epochs < 1) bad("train.epochs must be >= 1");
  if (!(entropy_coef >= 0.0)) bad("train.entropy_coef must be >= 0");
  if (!(policy_lr > 0.0) || !(critic_lr > 0.0)) bad("train learning rates must be > 0");
  if (!(max_grad_norm >= 0.0)) bad("train.max_grad_norm must be >= 0");
  if (hidden.empty()) bad("train.hidden must list at least one layer");
  for (int h : hidden) {
    if (h < 1) bad("train.hidden widths must be >= 1");
  }
  if (!(policy_init_scale > 0.0)) bad("train.policy_init_scale must be > 0");
  if (!(dual_step >= 0.0)) bad("train.dual_step must be >= 0");
  if (!(dual_ema >= 0.0 && dual_ema < 1.0)) bad("train.dual_ema must lie in [0, 1)");
  for (double l : initial_lambda) {
    if (!(l >= 0.0)) bad("train.initial_lambda entries must be >= 0");
  }
  for (double l : fixed_lambda) {
    if (!(l >= 0.0)) bad("train.fixed_lambda entries must be >= 0");
  }
  if (!(deadline_budget_ms >= 0.0)) bad("train.deadline_budget_ms must be >= 0");
}

DualState dual_update(const DualState& duals, double mean_c1, double mean_c2, double budget_c1,
                      double budget_c2, std::array<double, 2>* raw_out) {
  const std::array<double, 2> mean = {mean_c1, mean_c2};
  const std::array<double, 2> budget = {budget_c1, budget_c2};
  DualState next = duals;
  std::array<double, 2> raw{};
  for (int j = 0; j < 2; ++j) {
    raw[j] = std::max(duals.lambda[j] + duals.step * (mean[j] - budget[j]), 0.0);
    next.lambda[j] = duals.ema * duals.lambda[j] + (1.0 - duals.ema) * raw[j];
  }
  if (raw_out) *raw_out = raw;
  return next;
}

GaeResult gae(std::span<const double> values, std::span<const double> signals, double gamma,
              double lambda_gae, std::span<const bool> dones) {
  const std::size_t len = signals.size();
  if (values.size() != len + 1) {
    throw std::invalid_argument("gae: values must have exactly one more entry than signals");
  }
  if (!dones.empty() && dones.size() != len) throw std::invalid_argument("gae: dones length mismatch");
  GaeResult out;
  out.advantages.assign(len, 0.0);
  out.returns.assign(len, 0.0);
  double running = 0.0;
  for (std::size_t k = len; k-- > 0;) {
    const bool done = !dones.empty() && dones[k];
    const double next_value = done ? 0.0 : values[k + 1];
    const double delta = signals[k] + gamma * next_value - values[k];
    running = delta + (done ? 0.0 : gamma * lambda_gae * running);
    out.advantages[k] = running;
    out.returns[k] = running + values[k];
  }
  return out;
}

void standardize(std::vector<double>& values) {
  if (values.empty()) return;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / n);
  for (double& v : values) v = (v - mean) / (sd + 1e-8);
}

PolicyLoss policy_loss(const Mlp& policy, const PolicyBatch& batch, std::array<double, 2> lambda,
                       double clip_eps, double entropy_coef, std::span<double> grad) {
  const Eigen::Index count = batch.obs.cols();
  if (static_cast<std::size_t>(count) != batch.actions.size() ||
      batch.actions.size() != batch.old_log_probs.size() ||
      batch.actions.size() != batch.adv_r.size()) {
    throw std::invalid_argument("policy_loss: inconsistent batch sizes");
  }
  for (const auto& ac : batch.adv_c) {
    if (!ac.empty() && ac.size() != batch.actions.size()) {
      throw std::invalid_argument("policy_loss: cost advantage length mismatch");
    }
  }
  const int n_ues = policy.output_size() - kNumPrimitives;
  Mlp::Cache cache;
  const Eigen::MatrixXd out = policy.forward(batch.obs, grad.empty() ? nullptr : &cache);
  Eigen::MatrixXd out_grad;
  if (!grad.empty()) out_grad = Eigen::MatrixXd::Zero(out.rows(), out.cols());

  const double inv_b = 1.0 / static_cast<double>(count);
  PolicyLoss res;
  std::vector<double> glp(static_cast<std::size_t>(out.rows()));
  for (Eigen::Index t = 0; t < count; ++t) {
    std::span<const double> logits(out.col(t).data(), static_cast<std::size_t>(out.rows()));
    const Action& a = batch.actions[t];
    const double lp = action_log_prob(logits, a);
    const double log_ratio = lp - batch.old_log_probs[t];
    const double clipped_log_ratio = std::clamp(log_ratio, -20.0, 20.0);
    const double rho = std::exp(clipped_log_ratio);
    const double adv = batch.adv_r[t];
    const double unclipped = rho * adv;
    const double clipped = std::clamp(rho, 1.0 - clip_eps, 1.0 + clip_eps) * adv;
    double cost = 0.0;
    for (int j = 0; j < 2; ++j) {
      if (!batch.adv_c[j].empty()) cost += lambda[j] * batch.adv_c[j][t];
    }
    const double term = std::min(unclipped, clipped) - rho * cost;
    res.surrogate += term;
    const double h = policy_entropy(logits, n_ues);
    res.entropy += h;
    if (std::abs(rho - 1.0) > clip_eps) res.clip_fraction += 1.0;

    if (!grad.empty()) {
      const bool ratio_live = log_ratio == clipped_log_ratio;
      const double d_term_d_lp =
          ratio_live ? rho * ((unclipped <= clipped ? adv : 0.0) - cost) : 0.0;
      action_log_prob_grad(logits, a, glp);
      std::span<double> g(out_grad.col(t).data(), static_cast<std::size_t>(out.rows()));
      for (std::size_t k = 0; k < glp.size(); ++k) g[k] = -inv_b * d_term_d_lp * glp[k];
      add_entropy_grad(logits, n_ues, -entropy_coef * inv_b, g);
    }
  }
  res.surrogate *= inv_b;
  res.entropy *= inv_b;
  res.clip_fraction *= inv_b;
  res.loss = -res.surrogate - entropy_coef * res.entropy;
  if (!grad.empty()) policy.backward(cache, out_grad, grad);
  return res;
}

double critic_loss(const Mlp& critic, const Eigen::MatrixXd& obs,
                   const std::vector<std::vector<double>>& targets, std::span<double> grad) {
  const Eigen::Index count = obs.cols();
  if (static_cast<int>(targets.size()) != critic.output_size()) {
    throw std::invalid_argument("critic_loss: need one target vector per head");
  }
  for (const auto& t : targets) {
    if (!t.empty() && t.size() != static_cast<std::size_t>(count)) {
      throw std::invalid_argument("critic_loss: target length mismatch");
    }
  }
  Mlp::Cache cache;
  const Eigen::MatrixXd out = critic.forward(obs, grad.empty() ? nullptr : &cache);
  Eigen::MatrixXd out_grad = Eigen::MatrixXd::Zero(out.rows(), count);
  const double inv_b = 1.0 / static_cast<double>(count);
  double loss = 0.0;
  for (Eigen::Index h = 0; h < out.rows(); ++h) {
    if (targets[h].empty()) continue;
    for (Eigen::Index t = 0; t < count; ++t) {
      const double err = out(h, t) - targets[h][t];
      loss += 0.5 * err * err * inv_b;
      out_grad(h, t) = err * inv_b;
    }
  }
  if (!grad.empty()) critic.backward(cache, out_grad, grad);
  return loss;
}

EpisodeRunner::EpisodeRunner(EnvConfig cfg, std::uint64_t seed)
    : env_(std::move(cfg)), seeds_(derive_seed(seed, 1, 0)) {
  start_episode();
}

void EpisodeRunner::start_episode() {
  obs_ = env_.reset(seeds_());
  ++episodes_;
}

StepResult EpisodeRunner::step(const Action& action) {
  StepResult res = env_.step(action);
  if (res.done) {
    start_episode();
  } else {
    obs_ = res.observation;
  }
  return res;
}

SampledAction sample_action(const Mlp& policy, std::span<const double> obs, int n_ues, Rng& rng) {
  const std::vector<double> logits = policy.forward(obs);
  return sample_from_logits(logits, n_ues, rng);
}

std::vector<Transition> collect_rollout(EpisodeRunner& runner, const PpoNetworks& nets,
                                        const ExecutionShield& shield,
                                        int length, Rng& rng, bool ratio_on_shielded_action,
                                        std::vector<ShieldLogRow>* shield_log, int update_index,
                                        double value_scale) {
  const int n = runner.env().config().n_ues;
  std::vector<Transition> out;
  out.reserve(length);
  for (int t = 0; t < length; ++t) {
    Transition tr;
    tr.observation = runner.observation();
    const std::vector<double> logits = nets.policy.forward(tr.observation);
    const std::vector<double> value = nets.value.forward(tr.observation);
    const std::vector<double> cost = nets.cost.forward(tr.observation);
    SampledAction sampled = sample_from_logits(logits, n, rng);
    tr.action = sampled.action;
    tr.log_prob = sampled.log_prob;
    tr.t_avail_ms = runner.env().radio().t_avail_ms;
    if (shield.enabled) {
      const FeasibilityContext ctx =
          FeasibilityContext::from_environment(runner.env(), shield.config.predictor);
      Projection proj = project(ctx, sampled.action, shield.config);
      tr.fallback = !proj.report.fallbacks.empty();
      if (shield_log && proj.report.changed()) {
        shield_log->push_back({"train", update_index, runner.env().frame(),
                               std::string(to_string(sampled.action.primitive)),
                               std::string(to_string(proj.action.primitive)),
                               proj.report.limit_drops, proj.report.budget_drops,
                               join_chain(proj.report.fallbacks)});
      }
      tr.action = std::move(proj.action);
      if (ratio_on_shielded_action) tr.log_prob = action_log_prob(logits, tr.action);
    }
    const StepResult res = runner.step(tr.action);
    tr.reward = res.reward;
    tr.costs = res.costs;
    tr.value_r = value[0] * value_scale;
    tr.value_c1 = cost[0] * value_scale;
    tr.value_c2 = cost[1] * value_scale;
    tr.done = res.done;
    tr.utility = res.info.mean_utility;
    tr.air_ms = res.info.air_overhead_ms;
    tr.adaptations = res.info.adaptations;
    tr.hits = res.info.hits;
    out.push_back(std::move(tr));
  }
  return out;
}

PpoNetworks make_ppo_networks(const EnvConfig& env, const TrainConfig& train, Rng& rng) {
  std::vector<int> pw = {env.observation_size()};
  pw.insert(pw.end(), train.hidden.begin(), train.hidden.end());
  std::vector<int> vw = pw;
  std::vector<int> cw = pw;
  pw.push_back(kNumPrimitives + env.n_ues);
  vw.push_back(1);
  cw.push_back(2);
  PpoNetworks nets;
  nets.policy = Mlp(pw, rng, train.policy_init_scale);
  nets.value = Mlp(vw, rng, 1.0);
  nets.cost = Mlp(cw, rng, 1.0);
  return nets;
}

PpoOutcome train_ppo(const EnvConfig& env_cfg, const TrainConfig& cfg,
                     const ShieldConfig& shield_cfg, const PpoVariant& variant, std::uint64_t seed,
                     const std::string& agent_label) {
  env_cfg.validate();
  cfg.validate();
  shield_cfg.validate();
  const Ablations& abl = variant.ablations;

  PpoOutcome result;
  Rng init_rng(derive_seed(seed, 0, 0));
  result.nets = make_ppo_networks(env_cfg, cfg, init_rng);
  Mlp& policy = result.nets.policy;
  Mlp& value = result.nets.value;
  Mlp& cost = result.nets.cost;
  Adam policy_opt(policy.parameter_count(), AdamConfig{cfg.policy_lr});
  Adam value_opt(value.parameter_count(), AdamConfig{cfg.critic_lr});
  Adam cost_opt(cost.parameter_count(), AdamConfig{cfg.critic_lr});

  // How the multipliers behave for this variant.
  const bool adaptive_duals = variant.constrained && !abl.fixed_duals && !abl.no_cost_critics;
  const bool cost_critics = variant.constrained && !abl.no_cost_critics;
  DualState duals;
  duals.ema = cfg.dual_ema;
  duals.step = cfg.dual_step;
  if (!variant.constrained) {
    duals.lambda = {0.0, 0.0};
  } else if (abl.fixed_duals || abl.no_cost_critics) {
    duals.lambda = cfg.fixed_lambda;
  } else {
    duals.lambda = cfg.initial_lambda;
  }

  ExecutionShield exec;
  exec.enabled = !abl.no_shield;
  exec.config = shield_cfg;
  if (abl.reversed_shield_order) exec.config.fallback_order = ShieldConfig::reversed_order();

  EpisodeRunner runner(env_cfg, seed);
  Rng action_rng(derive_seed(seed, 2, 0));
  Rng shuffle_rng(derive_seed(seed, 3, 0));
  double t_avail_sum = 0.0;
  std::int64_t t_avail_count = 0;

  std::vector<double> policy_grad(policy.parameter_count());
  std::vector<double> value_grad(value.parameter_count());
  std::vector<double> cost_grad(cost.parameter_count());
  const int len = cfg.rollout_length;
  const int mb = std::min(cfg.minibatch_size, len);
  std::vector<int> order(len);
  const double vscale = cfg.value_scale();

  for (int update = 0; update < cfg.updates; ++update) {
    const std::vector<Transition> traj =
        collect_rollout(runner, result.nets, exec, len, action_rng,
                        cfg.ratio_on_shielded_action, exec.enabled ? &result.shield_log : nullptr,
                        update, vscale);
    result.frames += len;

    std::vector<double> vr(len + 1), vc1(len + 1), vc2(len + 1);
    std::vector<double> sr(len), sc1(len), sc2(len);
    std::vector<bool> done_flags(len);
    for (int t = 0; t < len; ++t) {
      const Transition& tr = traj[t];
      vr[t] = tr.value_r;
      vc1[t] = tr.value_c1;
      vc2[t] = tr.value_c2;
      sr[t] = tr.reward;
      if (variant.constrained && abl.no_cost_critics) {
        sr[t] -= cfg.fixed_lambda[0] * tr.costs.ric_time_ms + cfg.fixed_lambda[1] * tr.costs.overshoot_ms;
      }
      sc1[t] = tr.costs.ric_time_ms;
      sc2[t] = tr.costs.overshoot_ms;
      done_flags[t] = tr.done;
    }
    if (!traj.back().done) {
      const std::vector<double> boot_r = value.forward(runner.observation());
      const std::vector<double> boot_c = cost.forward(runner.observation());
      vr[len] = boot_r[0] * vscale;
      vc1[len] = boot_c[0] * vscale;
      vc2[len] = boot_c[1] * vscale;
    }
    std::unique_ptr<bool[]> dones(new bool[len]);
    for (int t = 0; t < len; ++t) dones[t] = done_flags[t];
    std::span<const bool> dspan(dones.get(), len);
    const GaeResult ar = gae(vr, sr, cfg.gamma, cfg.lambda_gae, dspan);
    const GaeResult ac1 = gae(vc1, sc1, cfg.gamma, cfg.lambda_gae, dspan);
    const GaeResult ac2 = gae(vc2, sc2, cfg.gamma, cfg.lambda_gae, dspan);

    // critics
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), shuffle_rng);
      for (int start = 0; start < len; start += mb) {
        const std::span<const int> idx(order.data() + start, std::min(mb, len - start));
        const Eigen::MatrixXd obs = stack_observations(traj, idx);
        std::vector<std::vector<double>> tr(1), tc(2);
        for (int i : idx) {
          tr[0].push_back(ar.returns[i] / vscale);
          tc[0].push_back(ac1.returns[i] / vscale);
          tc[1].push_back(ac2.returns[i] / vscale);
        }
        std::fill(value_grad.begin(), value_grad.end(), 0.0);
        critic_loss(value, obs, tr, value_grad);
        value_opt.step(value.parameters(), value_grad);
        value.mark_updated();
        if (cost_critics) {
          std::fill(cost_grad.begin(), cost_grad.end(), 0.0);
          critic_loss(cost, obs, tc, cost_grad);
          cost_opt.step(cost.parameters(), cost_grad);
          cost.mark_updated();
        }
      }
    }

    // policy
    const std::array<double, 2> policy_lambda =
        cost_critics ? duals.lambda : std::array<double, 2>{0.0, 0.0};
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), shuffle_rng);
      for (int start = 0; start < len; start += mb) {
        const std::span<const int> idx(order.data() + start, std::min(mb, len - start));
        PolicyBatch batch;
        batch.obs = stack_observations(traj, idx);
        for (int i : idx) {
          batch.actions.push_back(traj[i].action);
          batch.old_log_probs.push_back(traj[i].log_prob);
          batch.adv_r.push_back(ar.advantages[i]);
          if (cost_critics) {
            batch.adv_c[0].push_back(ac1.advantages[i]);
            batch.adv_c[1].push_back(ac2.advantages[i]);
          }
        }
        standardize(batch.adv_r);
        std::fill(policy_grad.begin(), policy_grad.end(), 0.0);
        policy_loss(policy, batch, policy_lambda, cfg.clip_eps, cfg.entropy_coef, policy_grad);
        clip_grad_norm(policy_grad, cfg.max_grad_norm);
        policy_opt.step(policy.parameters(), policy_grad);
        policy.mark_updated();
      }
    }

    // duals
    double c1 = 0.0, c2 = 0.0;
    FrameAccumulator acc;
    for (const Transition& tr : traj) {
      t_avail_sum += tr.t_avail_ms;
      ++t_avail_count;
      c1 += tr.costs.ric_time_ms;
      c2 += tr.costs.overshoot_ms;
      acc.add(tr.reward, tr.utility, tr.air_ms, tr.costs.ric_time_ms, tr.costs.overshoot_ms,
              tr.adaptations, tr.hits, tr.fallback);
    }
    c1 /= len;
    c2 /= len;
    if (adaptive_duals) {
      const double d1 = t_avail_sum / static_cast<double>(t_avail_count);
      duals = dual_update(duals, c1, c2, d1, cfg.deadline_budget_ms);
    }

    MetricsRow row;
    row.phase = "train";
    row.agent = agent_label;
    row.seed = seed;
    row.index = update;
    acc.fill(row);
    row.lambda1 = duals.lambda[0];
    row.lambda2 = duals.lambda[1];
    result.rows.push_back(row);
  }
  result.duals = duals;
  return result;
}

EvalSummary summarize_rows(const std::vector<MetricsRow>& rows) {
  std::vector<double> reward, utility, air, ric, hit, over;
  for (const MetricsRow& r : rows) {
    reward.push_back(r.mean_reward);
    utility.push_back(r.mean_utility);
    air.push_back(r.air_overhead_ms);
    ric.push_back(r.ric_ms);
    hit.push_back(r.hit_rate);
    over.push_back(r.overshoot_ms);
  }
  EvalSummary s;
  s.reward = describe(reward);
  s.utility = describe(utility);
  s.air_overhead_ms = describe(air);
  s.ric_ms = describe(ric);
  s.hit_rate = describe(hit);
  s.overshoot_ms = describe(over);
  s.episodes = rows.size();
  return s;
}

EvalSummary evaluate_agent(const EnvConfig& env_cfg, const Proposer& proposer,
                           const ExecutionShield& shield, int episodes, std::uint64_t seed,
                           const std::string& agent_label, std::vector<MetricsRow>* rows,
                           std::vector<ShieldLogRow>* shield_log) {
  std::vector<MetricsRow> local;
  Environment env(env_cfg);
  for (int ep = 0; ep < episodes; ++ep) {
    std::vector<double> obs = env.reset(derive_seed(seed, 7, ep));
    Rng rng(derive_seed(seed, 8, ep));
    FrameAccumulator acc;
    while (!env.done()) {
      Action action = proposer(env, obs, rng);
      bool fallback = false;
      if (shield.enabled) {
        const FeasibilityContext ctx =
            FeasibilityContext::from_environment(env, shield.config.predictor);
        Projection proj = project(ctx, action, shield.config);
        fallback = !proj.report.fallbacks.empty();
        if (shield_log && proj.report.changed()) {
          shield_log->push_back({"eval", ep, env.frame(), std::string(to_string(action.primitive)),
                                 std::string(to_string(proj.action.primitive)),
                                 proj.report.limit_drops, proj.report.budget_drops,
                                 join_chain(proj.report.fallbacks)});
        }
        action = std::move(proj.action);
      }
      const StepResult res = env.step(action);
      acc.add(res.reward, res.info.mean_utility, res.info.air_overhead_ms, res.costs.ric_time_ms,
              res.costs.overshoot_ms, res.info.adaptations, res.info.hits, fallback);
      obs = res.observation;
    }
    MetricsRow row;
    row.phase = "eval";
    row.agent = agent_label;
    row.seed = seed;
    row.index = ep;
    acc.fill(row);
    local.push_back(row);
  }
  EvalSummary s = summarize_rows(local);
  if (rows) rows->insert(rows->end(), local.begin(), local.end());
  return s;
}

Proposer policy_proposer(const Mlp& policy, int n_ues, EvalMode mode) {
  return [&policy, n_ues, mode](const Environment&, std::span<const double> obs, Rng& rng) {
    const std::vector<double> logits = policy.forward(obs);
    if (mode == EvalMode::Greedy) return greedy_from_logits(logits, n_ues);
    return sample_from_logits(logits, n_ues, rng).action;
  };
}

EvalSummary evaluate(const Mlp& policy, const EnvConfig& env_cfg, int episodes,
                     const ExecutionShield& shield, std::uint64_t seed, EvalMode mode,
                     std::vector<MetricsRow>* rows) {
  return evaluate_agent(env_cfg, policy_proposer(policy, env_cfg.n_ues, mode), shield, episodes,
                        seed, "policy", rows);
}

}  // namespace semadapt
