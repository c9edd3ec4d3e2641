#include "semadapt/shield.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace semadapt {

namespace {

void check_dims(const FeasibilityContext& ctx, const Action& action) {
  const std::size_t n = ctx.predicted.size();
  if (action.mask.size() != n || ctx.deadlines_ms.size() != n || ctx.debt.size() != n ||
      ctx.queue_ms.size() != n) {
    throw std::invalid_argument("feasibility context and action disagree on the UE count");
  }
}

// Summation in index order; project() relies on is_feasible() seeing the
// exact same floating-point sum.
double ric_load(const FeasibilityContext& ctx, Primitive p, const std::vector<bool>& mask) {
  double sum = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) sum += ctx.at(static_cast<int>(i), p).ric_ms;
  }
  return sum;
}

bool any(const std::vector<bool>& mask) {
  return std::find(mask.begin(), mask.end(), true) != mask.end();
}

}  // namespace

FeasibilityContext FeasibilityContext::from_environment(const Environment& env,
                                                        PredictorMode mode) {
  FeasibilityContext ctx;
  ctx.t_avail_ms = env.radio().t_avail_ms;
  const int n = env.config().n_ues;
  ctx.predicted.resize(n);
  for (int i = 0; i < n; ++i) {
    for (Primitive p : kAllPrimitives) {
      ctx.predicted[i][index_of(p)] = env.predicted_latency(i, p, mode);
    }
    const UEState& ue = env.ues()[i];
    ctx.deadlines_ms.push_back(ue.deadline_ms);
    ctx.debt.push_back(ue.debt);
    ctx.queue_ms.push_back(ue.queue_ms);
  }
  return ctx;
}

std::array<Primitive, kNumPrimitives> ShieldConfig::default_order() {
  return {Primitive::FullRetrain, Primitive::FeatRefine, Primitive::DeployCached,
          Primitive::LightAdapt, Primitive::NoOp};
}

std::array<Primitive, kNumPrimitives> ShieldConfig::reversed_order() {
  return {Primitive::LightAdapt, Primitive::FeatRefine, Primitive::FullRetrain,
          Primitive::DeployCached, Primitive::NoOp};
}

void ShieldConfig::validate() const {
  std::array<bool, kNumPrimitives> seen{};
  for (Primitive p : fallback_order) {
    const int k = index_of(p);
    if (k < 0 || k >= kNumPrimitives || seen[k]) {
      throw std::invalid_argument("shield fallback_order must be a permutation of the primitives");
    }
    seen[k] = true;
  }
  if (fallback_order.back() != Primitive::NoOp) {
    throw std::invalid_argument("shield fallback_order must end with NoOp");
  }
}

bool is_feasible(const FeasibilityContext& ctx, const Action& action) {
  check_dims(ctx, action);
  if (action.primitive == Primitive::NoOp) return true;
  for (std::size_t i = 0; i < action.mask.size(); ++i) {
    if (action.mask[i] &&
        ctx.at(static_cast<int>(i), action.primitive).total_ms > ctx.deadlines_ms[i]) {
      return false;
    }
  }
  return ric_load(ctx, action.primitive, action.mask) <= ctx.t_avail_ms;
}

bool more_urgent(const FeasibilityContext& ctx, int a, int b) {
  if (ctx.debt[a] != ctx.debt[b]) return ctx.debt[a] > ctx.debt[b];
  if (ctx.queue_ms[a] != ctx.queue_ms[b]) return ctx.queue_ms[a] > ctx.queue_ms[b];
  return a < b;
}

std::vector<int> urgency_order(const FeasibilityContext& ctx) {
  std::vector<int> order(ctx.n_ues());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return more_urgent(ctx, a, b); });
  return order;
}

Projection project(const FeasibilityContext& ctx, const Action& proposed,
                   const ShieldConfig& config) {
  check_dims(ctx, proposed);
  Projection out;
  const int n = ctx.n_ues();
  if (proposed.primitive == Primitive::NoOp) {
    out.action = Action::noop(n);
    return out;
  }
  if (!any(proposed.mask)) {
    out.action = proposed;
    return out;
  }

  const std::vector<int> by_urgency = urgency_order(ctx);
  const auto& ladder = config.fallback_order;
  auto rung = std::find(ladder.begin(), ladder.end(), proposed.primitive);
  Primitive current = proposed.primitive;

  while (current != Primitive::NoOp) {
    std::vector<bool> mask = proposed.mask;
    // (1) per-UE limits: deadline, and a RIC share that can never fit alone
    for (int i = 0; i < n; ++i) {
      if (!mask[i]) continue;
      const LatencyComponents& lat = ctx.at(i, current);
      if (lat.total_ms > ctx.deadlines_ms[i] || lat.ric_ms > ctx.t_avail_ms) {
        mask[i] = false;
        ++out.report.limit_drops;
      }
    }
    // (2) shed the least urgent UEs until the window fits
    for (auto it = by_urgency.rbegin();
         it != by_urgency.rend() && ric_load(ctx, current, mask) > ctx.t_avail_ms; ++it) {
      if (mask[*it]) {
        mask[*it] = false;
        ++out.report.budget_drops;
      }
    }
    if (any(mask)) {
      out.action = Action{current, std::move(mask)};
      return out;
    }
    // (3) next lighter primitive on the ladder
    ++rung;
    current = rung == ladder.end() ? Primitive::NoOp : *rung;
    out.report.fallbacks.push_back(current);
  }
  out.action = Action::noop(n);
  return out;
}

}  // namespace semadapt
