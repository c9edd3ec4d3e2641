#include <doctest.h>

#include <cmath>

#include "semadapt/policy.hpp"

using namespace semadapt;

TEST_SUITE("policy") {

TEST_CASE("uniform logits give the uniform factored log-prob") {
  const int n = 8;
  const std::vector<double> logits(kNumPrimitives + n, 0.0);
  Rng rng(1);
  const double expected = std::log(1.0 / 5.0) + n * std::log(0.5);
  for (int k = 0; k < 200; ++k) {
    const SampledAction s = sample_from_logits(logits, n, rng);
    CHECK(s.log_prob == doctest::Approx(expected).epsilon(1e-12));
    CHECK(action_log_prob(logits, s.action) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("a dominant NoOp logit always samples NoOp") {
  std::vector<double> logits(kNumPrimitives + 4, 0.0);
  logits[index_of(Primitive::NoOp)] = 50.0;
  Rng rng(2);
  for (int k = 0; k < 1000; ++k) {
    const SampledAction s = sample_from_logits(logits, 4, rng);
    CHECK(s.action.primitive == Primitive::NoOp);
    CHECK(s.action.scheduled_count() == 0);
  }
}

TEST_CASE("sampled frequencies match the closed form within 3 sigma") {
  const int n = 3, draws = 100000;
  const std::vector<double> logits = {0.3, -1.0, 1.2, 0.0, -0.4, 0.8, -1.5, 0.1};
  const std::vector<double> p = primitive_probabilities(logits);
  std::vector<int> prim(kNumPrimitives, 0), bit(n, 0);
  int non_noop = 0;
  Rng rng(3);
  for (int k = 0; k < draws; ++k) {
    const SampledAction s = sample_from_logits(logits, n, rng);
    ++prim[index_of(s.action.primitive)];
    if (s.action.primitive == Primitive::NoOp) continue;
    ++non_noop;
    for (int i = 0; i < n; ++i) bit[i] += s.action.mask[i];
  }
  for (int k = 0; k < kNumPrimitives; ++k) {
    const double sd = std::sqrt(p[k] * (1.0 - p[k]) / draws);
    CHECK(std::abs(prim[k] / double(draws) - p[k]) <= 3.0 * sd);
  }
  for (int i = 0; i < n; ++i) {
    const double q = sigmoid(logits[kNumPrimitives + i]);
    const double sd = std::sqrt(q * (1.0 - q) / non_noop);
    CHECK(std::abs(bit[i] / double(non_noop) - q) <= 3.0 * sd);
  }
}

TEST_CASE("log-probs over the whole action space sum to one") {
  const int n = 3;
  const std::vector<double> logits = {0.2, 0.5, -0.3, 1.0, -0.7, 0.4, -0.2, 2.0};
  double total = 0.0;
  for (Primitive pr : kAllPrimitives) {
    for (unsigned bits = 0; bits < 8; ++bits) {
      Action a{pr, {bool(bits & 1u), bool(bits & 2u), bool(bits & 4u)}};
      total += std::exp(action_log_prob(logits, a));
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("greedy picks the mode") {
  const std::vector<double> logits = {0.1, 2.0, -1.0, 0.0, 0.5, 0.3, -0.3};
  const Action a = greedy_from_logits(logits, 2);
  CHECK(a.primitive == Primitive::FeatRefine);
  CHECK(a.mask == std::vector<bool>{true, false});
}

TEST_CASE("non-finite or misshapen logits are rejected") {
  Rng rng(4);
  std::vector<double> logits(kNumPrimitives + 2, 0.0);
  logits[1] = std::nan("");
  CHECK_THROWS_AS(sample_from_logits(logits, 2, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_from_logits(std::vector<double>(4, 0.0), 2, rng), std::invalid_argument);
}

}
