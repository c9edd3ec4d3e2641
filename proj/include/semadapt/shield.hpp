#pragma once

#include <array>
#include <vector>

#include "semadapt/environment.hpp"
#include "semadapt/latency.hpp"

namespace semadapt {

/// Everything the shield needs to decide feasibility for one frame.
struct FeasibilityContext {
  double t_avail_ms = 0.0;
  // predicted[ue][primitive]
  std::vector<std::array<LatencyComponents, kNumPrimitives>> predicted;
  std::vector<double> deadlines_ms;
  std::vector<double> debt;
  std::vector<double> queue_ms;

  int n_ues() const { return static_cast<int>(predicted.size()); }
  const LatencyComponents& at(int ue, Primitive p) const { return predicted[ue][index_of(p)]; }

  /// Builds the table from the environment's current frame.
  static FeasibilityContext from_environment(const Environment& env, PredictorMode mode);
};

struct ShieldConfig {
  std::array<Primitive, kNumPrimitives> fallback_order = {
      Primitive::FullRetrain, Primitive::FeatRefine, Primitive::DeployCached,
      Primitive::LightAdapt, Primitive::NoOp};
  PredictorMode predictor = PredictorMode::Bounded;

  static std::array<Primitive, kNumPrimitives> default_order();
  static std::array<Primitive, kNumPrimitives> reversed_order();
  /// Throws std::invalid_argument unless the order is a permutation ending in NoOp.
  void validate() const;
};

struct ShieldReport {
  int limit_drops = 0;
  int budget_drops = 0;
  std::vector<Primitive> fallbacks;  // primitives moved to, in order

  int drops() const { return limit_drops + budget_drops; }
  bool changed() const { return drops() > 0 || !fallbacks.empty(); }
};

struct Projection {
  Action action;
  ShieldReport report;
};

/// Throws std::invalid_argument on dimension mismatch.
bool is_feasible(const FeasibilityContext& ctx, const Action& action);

/// Maps a proposed action onto the feasible set: prune the mask by per-UE
/// limits, then by urgency until the RIC window fits, then step down the
/// fallback ladder. Ends at (NoOp, all-false) when nothing survives.
Projection project(const FeasibilityContext& ctx, const Action& proposed,
                   const ShieldConfig& config);

/// True when UE a is strictly more urgent than UE b: larger debt, then larger
/// queue, then lower index.
bool more_urgent(const FeasibilityContext& ctx, int a, int b);

/// UE indices from most to least urgent.
std::vector<int> urgency_order(const FeasibilityContext& ctx);

}  // namespace semadapt
