#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace semadapt {

using Rng = std::mt19937_64;

double standard_normal(Rng& rng);
double uniform01(Rng& rng);

/// The five adaptation primitives, in the canonical table order.
enum class Primitive : int {
  FullRetrain = 0,
  FeatRefine = 1,
  LightAdapt = 2,
  DeployCached = 3,
  NoOp = 4,
};

inline constexpr int kNumPrimitives = 5;
inline constexpr std::array<Primitive, kNumPrimitives> kAllPrimitives = {
    Primitive::FullRetrain, Primitive::FeatRefine, Primitive::LightAdapt,
    Primitive::DeployCached, Primitive::NoOp};

constexpr int index_of(Primitive p) { return static_cast<int>(p); }
std::string_view to_string(Primitive p);
std::optional<Primitive> parse_primitive(std::string_view name);

struct SlotTiming {
  double slot_ms = 1.0;
  double symbol_ms = 1.0 / 14.0;
};

/// Slot and symbol duration for numerology mu in {0,1,2}. Throws
/// std::invalid_argument for any other value.
SlotTiming slot_timing(int mu);

struct GrantAllocation {
  int grants = 0;             // kappa
  int symbols_per_grant = 7;  // n_sym in {2,4,7}
  double control_ms = 0.0;
};

/// Processing window granted to the semantic slice, clamped at zero.
double available_window(const GrantAllocation& grant, const SlotTiming& timing);

struct LatencyComponents {
  double fb_ms = 0.0;
  double ric_ms = 0.0;
  double tx_ms = 0.0;
  double reconf_ms = 0.0;
  double total_ms = 0.0;

  static LatencyComponents from_parts(double fb, double ric, double tx, double reconf);
  double air_ms() const { return fb_ms + tx_ms; }
};

/// Per-primitive latency means plus the coefficients of the stochastic
/// congestion / fading / jitter penalties.
struct LatencyModel {
  std::array<double, kNumPrimitives> ric_ms = {5.0, 2.8, 1.1, 1.5, 0.0};
  std::array<double, kNumPrimitives> total_ms = {8.4, 5.0, 2.4, 3.1, 0.1};
  // split of the non-RIC residual
  double fb_share = 0.30;
  double tx_share = 0.45;
  double reconf_share = 0.25;

  double congestion_coeff = 0.5;
  double fading_coeff = 0.5;
  double jitter_sigma = 0.05;
  // realized jitter is truncated to [max(0, 1 - k*sigma), 1 + k*sigma]
  double jitter_clip_sigmas = 3.0;
  double queue_max_ms = 20.0;

  double jitter_upper_bound() const { return 1.0 + jitter_clip_sigmas * jitter_sigma; }
};

LatencyComponents nominal_latency(Primitive p, const LatencyModel& model = {});

/// Draws one truncated-Gaussian jitter factor.
double sample_jitter(const LatencyModel& model, Rng& rng);

/// Deterministic part of the perturbation: backlog congestion on the RIC
/// share, fading on the dissemination share, and a given multiplicative
/// jitter on fb/ric/reconf. Component sums are recomputed.
LatencyComponents scaled_latency(Primitive p, double queue_ms, double channel_quality,
                                 double jitter, const LatencyModel& model);

LatencyComponents perturbed_latency(Primitive p, double queue_ms, double channel_quality,
                                    const LatencyModel& model, Rng& rng);

struct SlackDebt {
  double slack_ms = 0.0;
  double debt = 0.0;
};

/// Throws std::invalid_argument if deadline_ms <= 0.
SlackDebt slack_and_debt(double total_ms, double deadline_ms);

/// Distribution of per-frame radio resources granted to the semantic slice.
struct GrantDistribution {
  std::vector<int> numerologies = {0};  // drawn uniformly per frame
  int grants_min = 8;
  int grants_max = 20;
  std::vector<int> symbol_choices = {2, 4, 7};
  double control_mean_ms = 0.1;
  double control_sigma_ms = 0.02;

  /// Largest window this distribution can produce (used for normalization).
  double max_window_ms() const;
};

struct FrameRadio {
  int mu = 0;
  GrantAllocation grant;
  double t_avail_ms = 0.0;
};

FrameRadio sample_frame_radio(const GrantDistribution& dist, Rng& rng);

}  // namespace semadapt
