#pragma once

#include <span>
#include <vector>

#include "semadapt/environment.hpp"
#include "semadapt/latency.hpp"

namespace semadapt {

// Factored policy head layout: [5 primitive logits | N mask logits].
// p(u, b) = softmax(primitive_logits)[u] * prod_i Bernoulli(b_i; sigmoid(mask_logit_i)).

struct SampledAction {
  Action action;
  double log_prob = 0.0;
};

/// Throws std::invalid_argument on a non-finite logit or wrong length.
SampledAction sample_from_logits(std::span<const double> logits, int n_ues, Rng& rng);
double action_log_prob(std::span<const double> logits, const Action& action);
/// d log p(action) / d logits, written into grad (same length as logits).
void action_log_prob_grad(std::span<const double> logits, const Action& action,
                          std::span<double> grad);
double policy_entropy(std::span<const double> logits, int n_ues);
/// Adds scale * d entropy / d logits into grad.
void add_entropy_grad(std::span<const double> logits, int n_ues, double scale,
                      std::span<double> grad);
/// Mode of the distribution: argmax primitive, mask bits with probability > 0.5.
Action greedy_from_logits(std::span<const double> logits, int n_ues);

std::vector<double> primitive_probabilities(std::span<const double> logits);
double sigmoid(double x);

}  // namespace semadapt
