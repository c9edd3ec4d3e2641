#include "semadapt/latency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace semadapt {

double standard_normal(Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

double uniform01(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

std::string_view to_string(Primitive p) {
  switch (p) {
    case Primitive::FullRetrain: return "FullRetrain";
    case Primitive::FeatRefine: return "FeatRefine";
    case Primitive::LightAdapt: return "LightAdapt";
    case Primitive::DeployCached: return "DeployCached";
    case Primitive::NoOp: return "NoOp";
  }
  return "?";
}

std::optional<Primitive> parse_primitive(std::string_view name) {
  for (Primitive p : kAllPrimitives) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

SlotTiming slot_timing(int mu) {
  if (mu < 0 || mu > 2) {
    throw std::invalid_argument("numerology mu must be 0, 1 or 2 (got " + std::to_string(mu) +
                                ")");
  }
  SlotTiming t;
  t.slot_ms = 1.0 / static_cast<double>(1 << mu);
  t.symbol_ms = t.slot_ms / 14.0;
  return t;
}

double available_window(const GrantAllocation& grant, const SlotTiming& timing) {
  const double raw = static_cast<double>(grant.grants) *
                     static_cast<double>(grant.symbols_per_grant) * timing.symbol_ms;
  return std::max(raw - grant.control_ms, 0.0);
}

LatencyComponents LatencyComponents::from_parts(double fb, double ric, double tx,
                                                double reconf) {
  LatencyComponents c;
  c.fb_ms = fb;
  c.ric_ms = ric;
  c.tx_ms = tx;
  c.reconf_ms = reconf;
  c.total_ms = fb + ric + tx + reconf;
  return c;
}

LatencyComponents nominal_latency(Primitive p, const LatencyModel& model) {
  const int k = index_of(p);
  const double ric = model.ric_ms[k];
  const double residual = model.total_ms[k] - ric;
  LatencyComponents c;
  c.fb_ms = model.fb_share * residual;
  c.ric_ms = ric;
  c.tx_ms = model.tx_share * residual;
  c.reconf_ms = model.reconf_share * residual;
  // the published end-to-end value is kept exact rather than re-summed
  c.total_ms = model.total_ms[k];
  return c;
}

double sample_jitter(const LatencyModel& model, Rng& rng) {
  const double z = standard_normal(rng);
  const double k = model.jitter_clip_sigmas;
  const double clipped = std::clamp(z, -k, k);
  return std::max(1.0 + model.jitter_sigma * clipped, 0.0);
}

LatencyComponents scaled_latency(Primitive p, double queue_ms, double channel_quality,
                                 double jitter, const LatencyModel& model) {
  const LatencyComponents base = nominal_latency(p, model);
  if (model.congestion_coeff == 0.0 && model.fading_coeff == 0.0 && jitter == 1.0) {
    return base;
  }
  const double load =
      model.queue_max_ms > 0.0 ? std::min(std::max(queue_ms, 0.0) / model.queue_max_ms, 1.0)
                               : 0.0;
  const double congestion = 1.0 + model.congestion_coeff * load;
  const double fading = 1.0 + model.fading_coeff * (1.0 - std::clamp(channel_quality, 0.0, 1.0));
  return LatencyComponents::from_parts(base.fb_ms * jitter, base.ric_ms * congestion * jitter,
                                       base.tx_ms * fading, base.reconf_ms * jitter);
}

LatencyComponents perturbed_latency(Primitive p, double queue_ms, double channel_quality,
                                    const LatencyModel& model, Rng& rng) {
  return scaled_latency(p, queue_ms, channel_quality, sample_jitter(model, rng), model);
}

SlackDebt slack_and_debt(double total_ms, double deadline_ms) {
  if (!(deadline_ms > 0.0)) {
    throw std::invalid_argument("deadline must be positive");
  }
  SlackDebt sd;
  sd.slack_ms = deadline_ms - total_ms;
  sd.debt = std::max(-sd.slack_ms, 0.0) / deadline_ms;
  return sd;
}

double GrantDistribution::max_window_ms() const {
  int best_mu = 2;
  for (int mu : numerologies) best_mu = std::min(best_mu, mu);
  int best_sym = 0;
  for (int s : symbol_choices) best_sym = std::max(best_sym, s);
  GrantAllocation g{grants_max, best_sym, 0.0};
  return available_window(g, slot_timing(best_mu));
}

FrameRadio sample_frame_radio(const GrantDistribution& dist, Rng& rng) {
  FrameRadio radio;
  std::uniform_int_distribution<std::size_t> pick_mu(0, dist.numerologies.size() - 1);
  radio.mu = dist.numerologies[pick_mu(rng)];
  std::uniform_int_distribution<int> pick_kappa(dist.grants_min, dist.grants_max);
  radio.grant.grants = pick_kappa(rng);
  std::uniform_int_distribution<std::size_t> pick_sym(0, dist.symbol_choices.size() - 1);
  radio.grant.symbols_per_grant = dist.symbol_choices[pick_sym(rng)];
  radio.grant.control_ms =
      std::max(dist.control_mean_ms + dist.control_sigma_ms * standard_normal(rng), 0.0);
  radio.t_avail_ms = available_window(radio.grant, slot_timing(radio.mu));
  return radio;
}

}  // namespace semadapt
