#include "semadapt/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace semadapt {

std::vector<DqnTemplate> dqn_templates(int n_ues) {
  if (n_ues < 1) throw std::invalid_argument("dqn_templates: n_ues must be >= 1");
  const std::array<int, 5> ks = {0, 1, (n_ues + 3) / 4, (n_ues + 1) / 2, n_ues};
  std::vector<DqnTemplate> out;
  for (Primitive p : kAllPrimitives) {
    for (int k : ks) out.push_back({p, k});
  }
  return out;
}

Action realize_template(const DqnTemplate& t, const FeasibilityContext& ctx) {
  const int n = ctx.n_ues();
  Action a;
  a.primitive = t.primitive;
  a.mask.assign(n, false);
  if (t.primitive == Primitive::NoOp) return a;
  const std::vector<int> order = urgency_order(ctx);
  for (int j = 0; j < std::min(t.k, n); ++j) a.mask[order[j]] = true;
  return a;
}

void DqnConfig::validate() const {
  auto bad = [](const std::string& what) { throw std::invalid_argument(what); };
  if (replay_capacity < 1) bad("dqn.replay_capacity must be >= 1");
  if (batch_size < 1) bad("dqn.batch_size must be >= 1");
  if (target_sync < 1) bad("dqn.target_sync must be >= 1");
  if (!(eps_start >= 0.0 && eps_start <= 1.0) || !(eps_end >= 0.0 && eps_end <= 1.0)) {
    bad("dqn epsilon values must lie in [0, 1]");
  }
  if (!(eps_decay_fraction > 0.0 && eps_decay_fraction <= 1.0)) {
    bad("dqn.eps_decay_fraction must lie in (0, 1]");
  }
  if (!(lr > 0.0)) bad("dqn.lr must be > 0");
  if (!(gamma > 0.0 && gamma < 1.0)) bad("dqn.gamma must lie in (0, 1)");
  if (train_every < 1) bad("dqn.train_every must be >= 1");
  if (warmup < 0) bad("dqn.warmup must be >= 0");
  if (frames < 0) bad("dqn.frames must be >= 0");
  if (log_every < 1) bad("dqn.log_every must be >= 1");
  if (!(max_grad_norm >= 0.0)) bad("dqn.max_grad_norm must be >= 0");
  if (hidden.empty()) bad("dqn.hidden must list at least one layer");
  for (int h : hidden) {
    if (h < 1) bad("dqn.hidden widths must be >= 1");
  }
  if (!(ric_target_fraction >= 0.0) || !(air_target_ms >= 0.0) || !(penalty >= 0.0)) {
    bad("dqn under-utilisation targets and penalty must be >= 0");
  }
}

double underutilisation_penalty(double ric_ms, double air_ms, double t_avail_ms,
                                const DqnConfig& cfg) {
  if (!(t_avail_ms > 0.0)) return 0.0;
  double p = 0.0;
  if (ric_ms < cfg.ric_target_fraction * t_avail_ms) p += cfg.penalty;
  if (air_ms < cfg.air_target_ms) p += cfg.penalty;
  return p;
}

double dqn_epsilon(const DqnConfig& cfg, int frame) {
  const double span = cfg.eps_decay_fraction * static_cast<double>(cfg.frames);
  if (span <= 0.0) return cfg.eps_end;
  const double f = std::min(static_cast<double>(frame) / span, 1.0);
  return cfg.eps_start + f * (cfg.eps_end - cfg.eps_start);
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::push(Item item) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(item));
  } else {
    items_[next_] = std::move(item);
  }
  next_ = (next_ + 1) % capacity_;
}

namespace {

int argmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

DqnOutcome dqn_train(const EnvConfig& env_cfg, const DqnConfig& cfg,
                     const ShieldConfig& shield_cfg, std::uint64_t seed,
                     const std::string& agent_label) {
  env_cfg.validate();
  cfg.validate();
  shield_cfg.validate();
  const int n = env_cfg.n_ues;
  const std::vector<DqnTemplate> templates = dqn_templates(n);
  const int n_actions = static_cast<int>(templates.size());

  DqnOutcome result;
  Rng init_rng(derive_seed(seed, 0, 0));
  std::vector<int> widths = {env_cfg.observation_size()};
  widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
  widths.push_back(n_actions);
  result.q = Mlp(widths, init_rng);
  Mlp& q = result.q;
  Mlp target = q;
  Adam opt(q.parameter_count(), AdamConfig{cfg.lr});
  std::vector<double> grad(q.parameter_count());

  EpisodeRunner runner(env_cfg, seed);
  Rng act_rng(derive_seed(seed, 2, 0));
  Rng batch_rng(derive_seed(seed, 3, 0));
  ReplayBuffer replay(static_cast<std::size_t>(cfg.replay_capacity));
  FrameAccumulator acc;
  int grad_steps = 0;
  const auto obs_rows = static_cast<Eigen::Index>(env_cfg.observation_size());

  for (int f = 0; f < cfg.frames; ++f) {
    const std::vector<double> obs = runner.observation();
    const FeasibilityContext ctx =
        FeasibilityContext::from_environment(runner.env(), shield_cfg.predictor);
    int choice;
    if (uniform01(act_rng) < dqn_epsilon(cfg, f)) {
      choice = std::min(static_cast<int>(uniform01(act_rng) * n_actions), n_actions - 1);
    } else {
      choice = argmax(q.forward(obs));
    }
    Action action = realize_template(templates[choice], ctx);
    bool fallback = false;
    if (cfg.shield_on_execution) {
      Projection proj = project(ctx, action, shield_cfg);
      fallback = !proj.report.fallbacks.empty();
      if (proj.report.changed()) {
        std::string chain;
        for (Primitive p : proj.report.fallbacks) {
          if (!chain.empty()) chain += '>';
          chain += to_string(p);
        }
        result.shield_log.push_back({"train", f / cfg.log_every, runner.env().frame(),
                                     std::string(to_string(action.primitive)),
                                     std::string(to_string(proj.action.primitive)),
                                     proj.report.limit_drops, proj.report.budget_drops, chain});
      }
      action = std::move(proj.action);
    }
    const double t_avail = runner.env().radio().t_avail_ms;
    const StepResult res = runner.step(action);
    const double pen =
        underutilisation_penalty(res.costs.ric_time_ms, res.info.air_overhead_ms, t_avail, cfg);
    replay.push({obs, choice, res.reward - pen, res.observation, res.done});
    acc.add(res.reward, res.info.mean_utility, res.info.air_overhead_ms, res.costs.ric_time_ms,
            res.costs.overshoot_ms, res.info.adaptations, res.info.hits, fallback);
    ++result.frames;

    if (static_cast<int>(replay.size()) >= std::max(cfg.warmup, 1) &&
        (f + 1) % cfg.train_every == 0) {
      const int b = cfg.batch_size;
      Eigen::MatrixXd s(obs_rows, b), s2(obs_rows, b);
      std::vector<const ReplayBuffer::Item*> items(b);
      for (int j = 0; j < b; ++j) {
        const auto idx = std::min(static_cast<std::size_t>(uniform01(batch_rng) * replay.size()),
                                  replay.size() - 1);
        items[j] = &replay[idx];
        s.col(j) = Eigen::Map<const Eigen::VectorXd>(items[j]->obs.data(), obs_rows);
        s2.col(j) = Eigen::Map<const Eigen::VectorXd>(items[j]->next_obs.data(), obs_rows);
      }
      const Eigen::MatrixXd next_q = target.forward(s2);
      Mlp::Cache cache;
      const Eigen::MatrixXd cur = q.forward(s, &cache);
      Eigen::MatrixXd out_grad = Eigen::MatrixXd::Zero(cur.rows(), cur.cols());
      for (int j = 0; j < b; ++j) {
        const double boot = items[j]->done ? 0.0 : next_q.col(j).maxCoeff();
        const double y = items[j]->reward + cfg.gamma * boot;
        const double err = cur(items[j]->action, j) - y;
        out_grad(items[j]->action, j) = std::clamp(err, -1.0, 1.0) / b;  // Huber
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      q.backward(cache, out_grad, grad);
      clip_grad_norm(grad, cfg.max_grad_norm);
      opt.step(q.parameters(), grad);
      q.mark_updated();
      if (++grad_steps % cfg.target_sync == 0) target = q;
    }

    if ((f + 1) % cfg.log_every == 0) {
      MetricsRow row;
      row.phase = "train";
      row.agent = agent_label;
      row.seed = seed;
      row.index = f / cfg.log_every;
      acc.fill(row);
      result.rows.push_back(row);
      acc = FrameAccumulator{};
    }
  }
  return result;
}

Proposer dqn_proposer(const Mlp& q, int n_ues) {
  auto templates = dqn_templates(n_ues);
  return [&q, templates](const Environment& env, std::span<const double> obs, Rng&) {
    const FeasibilityContext ctx = FeasibilityContext::from_environment(env, PredictorMode::Nominal);
    return realize_template(templates[argmax(q.forward(obs))], ctx);
  };
}

Action random_proposal(int n_ues, Rng& rng) {
  Action a;
  const int k = std::min(static_cast<int>(uniform01(rng) * kNumPrimitives), kNumPrimitives - 1);
  a.primitive = static_cast<Primitive>(k);
  a.mask.assign(n_ues, false);
  for (int i = 0; i < n_ues; ++i) {
    const bool bit = uniform01(rng) < 0.5;
    a.mask[i] = bit && a.primitive != Primitive::NoOp;
  }
  return a;
}

Action random_feasible_act(const Environment& env, const ShieldConfig& shield_cfg, Rng& rng) {
  const Action raw = random_proposal(env.config().n_ues, rng);
  const FeasibilityContext ctx = FeasibilityContext::from_environment(env, shield_cfg.predictor);
  return project(ctx, raw, shield_cfg).action;
}

Proposer random_proposer() {
  return [](const Environment& env, std::span<const double>, Rng& rng) {
    return random_proposal(env.config().n_ues, rng);
  };
}

PpoOutcome unconstrained_ppo_train(const EnvConfig& env_cfg, const TrainConfig& train_cfg,
                                   const ShieldConfig& shield_cfg, std::uint64_t seed,
                                   const std::string& agent_label) {
  PpoVariant v;
  v.constrained = false;
  return train_ppo(env_cfg, train_cfg, shield_cfg, v, seed, agent_label);
}

}  // namespace semadapt
