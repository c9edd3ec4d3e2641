#include "semadapt/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semadapt {

namespace {

void check_logits(std::span<const double> logits, int n_ues) {
  if (static_cast<int>(logits.size()) != kNumPrimitives + n_ues) {
    throw std::invalid_argument("policy logits have the wrong length");
  }
  for (double v : logits) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite policy logit");
  }
}

// log(sigmoid(x)) without overflow
double log_sigmoid(double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

std::vector<double> log_softmax(std::span<const double> z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - zmax);
  const double lse = zmax + std::log(sum);
  std::vector<double> out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = z[k] - lse;
  return out;
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> primitive_probabilities(std::span<const double> logits) {
  std::vector<double> lp = log_softmax(logits.first(kNumPrimitives));
  for (double& v : lp) v = std::exp(v);
  return lp;
}

double action_log_prob(std::span<const double> logits, const Action& action) {
  const int n = static_cast<int>(action.mask.size());
  check_logits(logits, n);
  const std::vector<double> lp = log_softmax(logits.first(kNumPrimitives));
  double total = lp[index_of(action.primitive)];
  for (int i = 0; i < n; ++i) {
    const double m = logits[kNumPrimitives + i];
    total += action.mask[i] ? log_sigmoid(m) : log_sigmoid(-m);
  }
  return total;
}

void action_log_prob_grad(std::span<const double> logits, const Action& action,
                          std::span<double> grad) {
  const int n = static_cast<int>(action.mask.size());
  check_logits(logits, n);
  const std::vector<double> p = primitive_probabilities(logits);
  for (int k = 0; k < kNumPrimitives; ++k) {
    grad[k] = (k == index_of(action.primitive) ? 1.0 : 0.0) - p[k];
  }
  for (int i = 0; i < n; ++i) {
    grad[kNumPrimitives + i] = (action.mask[i] ? 1.0 : 0.0) - sigmoid(logits[kNumPrimitives + i]);
  }
}

double policy_entropy(std::span<const double> logits, int n_ues) {
  check_logits(logits, n_ues);
  const std::vector<double> lp = log_softmax(logits.first(kNumPrimitives));
  double h = 0.0;
  for (double v : lp) h -= std::exp(v) * v;
  for (int i = 0; i < n_ues; ++i) {
    const double m = logits[kNumPrimitives + i];
    const double s = sigmoid(m);
    h -= s * log_sigmoid(m) + (1.0 - s) * log_sigmoid(-m);
  }
  return h;
}

void add_entropy_grad(std::span<const double> logits, int n_ues, double scale,
                      std::span<double> grad) {
  check_logits(logits, n_ues);
  const std::vector<double> lp = log_softmax(logits.first(kNumPrimitives));
  double h_cat = 0.0;
  for (double v : lp) h_cat -= std::exp(v) * v;
  for (int k = 0; k < kNumPrimitives; ++k) {
    const double p = std::exp(lp[k]);
    grad[k] += scale * (-p * (lp[k] + h_cat));
  }
  for (int i = 0; i < n_ues; ++i) {
    const double m = logits[kNumPrimitives + i];
    const double s = sigmoid(m);
    grad[kNumPrimitives + i] += scale * (-s * (1.0 - s) * m);
  }
}

SampledAction sample_from_logits(std::span<const double> logits, int n_ues, Rng& rng) {
  check_logits(logits, n_ues);
  const std::vector<double> p = primitive_probabilities(logits);
  const double u = uniform01(rng);
  int chosen = kNumPrimitives - 1;
  double acc = 0.0;
  for (int k = 0; k < kNumPrimitives; ++k) {
    acc += p[k];
    if (u < acc) {
      chosen = k;
      break;
    }
  }
  SampledAction out;
  out.action.primitive = static_cast<Primitive>(chosen);
  out.action.mask.assign(n_ues, false);
  // mask bits are always drawn so the stream does not depend on the primitive
  for (int i = 0; i < n_ues; ++i) {
    const bool bit = uniform01(rng) < sigmoid(logits[kNumPrimitives + i]);
    out.action.mask[i] = bit && out.action.primitive != Primitive::NoOp;
  }
  out.log_prob = action_log_prob(logits, out.action);
  return out;
}

Action greedy_from_logits(std::span<const double> logits, int n_ues) {
  check_logits(logits, n_ues);
  const auto first = logits.begin();
  const int best = static_cast<int>(std::max_element(first, first + kNumPrimitives) - first);
  Action a;
  a.primitive = static_cast<Primitive>(best);
  a.mask.assign(n_ues, false);
  if (a.primitive != Primitive::NoOp) {
    for (int i = 0; i < n_ues; ++i) a.mask[i] = logits[kNumPrimitives + i] > 0.0;
  }
  return a;
}

}  // namespace semadapt
