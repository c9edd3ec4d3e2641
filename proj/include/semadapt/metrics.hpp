#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace semadapt {

/// One logged record: a training update or an evaluation episode.
struct MetricsRow {
  std::string phase;  // "train" or "eval"
  std::string agent;
  std::uint64_t seed = 0;
  int index = 0;
  double mean_reward = 0.0;
  double mean_utility = 0.0;
  double air_overhead_ms = 0.0;  // fb + tx per frame
  double ric_ms = 0.0;           // c1 per frame
  double hit_rate = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int shield_fallback_count = 0;
  double overshoot_ms = 0.0;  // c2 per frame
};

/// Column names in file order.
const std::vector<std::string>& metrics_columns();
void write_metrics_header(std::ostream& out);
void write_metrics_row(std::ostream& out, const MetricsRow& row);
/// Parses a metrics file written by any version that uses the same column
/// names; columns are matched by header name. Throws std::runtime_error.
std::vector<MetricsRow> read_metrics(std::istream& in);

/// A frame where the shield altered the proposed action.
struct ShieldLogRow {
  std::string phase;
  int index = 0;  // update or episode
  int frame = 0;
  std::string proposed;
  std::string executed;
  int limit_drops = 0;
  int budget_drops = 0;
  std::string fallback_chain;  // e.g. "FeatRefine>DeployCached"
};

void write_shield_log(std::ostream& out, const std::vector<ShieldLogRow>& rows);

/// Accumulates per-frame quantities into one MetricsRow.
class FrameAccumulator {
 public:
  void add(double reward, double utility, double air_ms, double ric_ms, double overshoot_ms,
           int adaptations, int hits, bool fallback);
  /// Fills the averaged fields of row (phase/agent/seed/index/lambdas untouched).
  void fill(MetricsRow& row) const;
  int frames() const { return frames_; }

 private:
  int frames_ = 0;
  double reward_ = 0.0, utility_ = 0.0, air_ = 0.0, ric_ = 0.0, overshoot_ = 0.0;
  long adaptations_ = 0, hits_ = 0;
  int fallbacks_ = 0;
};

struct Moments {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n-1), 0 for n < 2
  double se = 0.0;   // std / sqrt(n)
  double p95 = 0.0;  // linear interpolation between order statistics
  std::size_t n = 0;
};

Moments describe(std::span<const double> values);
double percentile(std::vector<double> values, double q);

}  // namespace semadapt
