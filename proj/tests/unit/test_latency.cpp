#include <doctest.h>

#include "../common/checks.hpp"

using namespace semadapt;

TEST_SUITE("latency") {

TEST_CASE("hand-computed timing examples") {
  const checks::Result r = checks::latency_suite();
  INFO(r.detail);
  CHECK(r.ok);
}

TEST_CASE("slot timing rejects numerologies outside 0..2") {
  CHECK_THROWS_AS(slot_timing(3), std::invalid_argument);
  CHECK_THROWS_AS(slot_timing(-1), std::invalid_argument);
  for (int mu = 0; mu < 2; ++mu) CHECK(slot_timing(mu + 1).slot_ms == slot_timing(mu).slot_ms / 2);
}

TEST_CASE("available window is monotone and never negative") {
  const SlotTiming t = slot_timing(1);
  double prev = -1.0;
  for (int k = 0; k <= 20; ++k) {
    const double w = available_window({k, 4, 0.3}, t);
    CHECK(w >= 0.0);
    CHECK(w >= prev);
    prev = w;
  }
  CHECK(available_window({8, 7, 0.1}, t) >= available_window({8, 4, 0.1}, t));
  CHECK(available_window({8, 4, 0.1}, t) >= available_window({8, 4, 0.4}, t));
}

TEST_CASE("nominal latencies follow the table") {
  CHECK(nominal_latency(Primitive::NoOp).ric_ms == 0.0);
  CHECK(nominal_latency(Primitive::NoOp).total_ms == 0.1);
  CHECK(nominal_latency(Primitive::LightAdapt).ric_ms == 1.1);
  CHECK(nominal_latency(Primitive::LightAdapt).total_ms == 2.4);
  for (Primitive p : kAllPrimitives) {
    const LatencyComponents c = nominal_latency(p);
    CHECK(c.fb_ms + c.ric_ms + c.tx_ms + c.reconf_ms == doctest::Approx(c.total_ms).epsilon(1e-12));
  }
}

TEST_CASE("perturbation formulas with jitter disabled") {
  LatencyModel m;
  m.jitter_sigma = 0.0;
  const LatencyComponents light = scaled_latency(Primitive::LightAdapt, m.queue_max_ms, 1.0, 1.0, m);
  CHECK(light.ric_ms == doctest::Approx(1.65).epsilon(1e-12));

  const LatencyComponents feat = scaled_latency(Primitive::FeatRefine, 0.0, 0.5, 1.0, m);
  const double tx_nominal = 0.45 * (5.0 - 2.8);
  CHECK(feat.tx_ms == doctest::Approx(tx_nominal * 1.25).epsilon(1e-12));
  CHECK(feat.ric_ms == 2.8);
  CHECK(feat.total_ms == doctest::Approx(feat.fb_ms + feat.ric_ms + feat.tx_ms + feat.reconf_ms));

  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const LatencyComponents noop = perturbed_latency(Primitive::NoOp, 10.0, 0.2, LatencyModel{}, rng);
    CHECK(noop.ric_ms == 0.0);
  }
}

TEST_CASE("perturbed components always sum to the total") {
  Rng rng(9);
  const LatencyModel m;
  for (int k = 0; k < 1000; ++k) {
    const auto p = static_cast<Primitive>(k % kNumPrimitives);
    const LatencyComponents c = perturbed_latency(p, 20.0 * uniform01(rng), uniform01(rng), m, rng);
    CHECK(c.total_ms == c.fb_ms + c.ric_ms + c.tx_ms + c.reconf_ms);
    CHECK(c.ric_ms >= 0.0);
    CHECK(c.ric_ms <= m.ric_ms[index_of(p)] * 1.5 * m.jitter_upper_bound() + 1e-12);
  }
}

TEST_CASE("debt is positive exactly when the deadline is missed") {
  Rng rng(4);
  for (int k = 0; k < 1000; ++k) {
    const double total = 15.0 * uniform01(rng), d = 6.0 + 6.0 * uniform01(rng);
    const SlackDebt sd = slack_and_debt(total, d);
    CHECK(sd.debt >= 0.0);
    CHECK((sd.debt > 0.0) == (total > d));
  }
  CHECK_THROWS_AS(slack_and_debt(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("frame radio respects the grant distribution") {
  GrantDistribution g;
  g.numerologies = {0, 1, 2};
  Rng rng(5);
  for (int k = 0; k < 500; ++k) {
    const FrameRadio f = sample_frame_radio(g, rng);
    CHECK(f.mu >= 0);
    CHECK(f.mu <= 2);
    CHECK(f.grant.grants >= g.grants_min);
    CHECK(f.grant.grants <= g.grants_max);
    CHECK(f.t_avail_ms >= 0.0);
    CHECK(f.t_avail_ms <= g.max_window_ms() + 1e-12);
  }
}

TEST_CASE("primitive names round-trip") {
  for (Primitive p : kAllPrimitives) CHECK(parse_primitive(to_string(p)) == p);
  CHECK_FALSE(parse_primitive("Retrain").has_value());
}

}
