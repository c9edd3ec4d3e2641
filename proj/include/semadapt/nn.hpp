#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "semadapt/latency.hpp"

namespace semadapt {

/// Dense feed-forward network: ReLU on hidden layers, identity on the output.
/// Parameters live in one contiguous buffer so optimizers and checkpoints can
/// treat them as a flat vector.
class Mlp {
 public:
  /// Activations of one forward pass, tagged with the parameter version they
  /// were computed under.
  struct Cache {
    std::vector<Eigen::MatrixXd> activations;  // [0] = input, back() = output
    std::uint64_t version = 0;
    const Mlp* owner = nullptr;
  };

  Mlp() = default;
  /// Fan-in scaled uniform initialization; the output layer is further scaled
  /// by output_scale. Biases start at zero.
  Mlp(std::vector<int> widths, Rng& rng, double output_scale = 1.0);
  /// Rebuilds a network from stored widths and flat parameters.
  static Mlp from_parameters(std::vector<int> widths, std::vector<double> params);

  const std::vector<int>& widths() const { return widths_; }
  int input_size() const { return widths_.front(); }
  int output_size() const { return widths_.back(); }
  int layer_count() const { return static_cast<int>(widths_.size()) - 1; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  /// Call after any in-place parameter change; invalidates older caches.
  void mark_updated() { ++version_; }
  std::uint64_t version() const { return version_; }

  Eigen::Map<Eigen::MatrixXd> weight(int layer);
  Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
  Eigen::Map<Eigen::VectorXd> bias(int layer);
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;

  /// input: one column per sample. Throws on width mismatch or non-finite input.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Cache* cache = nullptr) const;
  std::vector<double> forward(std::span<const double> input) const;

  /// Accumulates d(loss)/d(params) into grad given d(loss)/d(output). Throws
  /// std::logic_error when the cache predates the last parameter update.
  void backward(const Cache& cache, const Eigen::MatrixXd& output_grad, std::span<double> grad,
                Eigen::MatrixXd* input_grad = nullptr) const;

 private:
  void layout();

  std::vector<int> widths_;
  std::vector<double> params_;
  std::vector<std::size_t> weight_offset_;
  std::vector<std::size_t> bias_offset_;
  std::uint64_t version_ = 0;
};

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(std::size_t parameter_count, AdamConfig config);

  /// One bias-corrected update. Throws std::invalid_argument on size mismatch.
  void step(std::span<double> params, std::span<const double> grads);
  std::int64_t steps() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::int64_t t_ = 0;
};

/// Scales grads in place so that their global L2 norm is at most max_norm.
/// Returns the norm before scaling.
double clip_grad_norm(std::span<double> grads, double max_norm);

/// Versioned structured-text checkpoint of named networks.
void write_checkpoint(std::ostream& out, const std::map<std::string, const Mlp*>& nets);
/// Reads a checkpoint; each expected network must be present with the given
/// widths. Throws std::runtime_error on any mismatch or parse failure.
std::map<std::string, Mlp> read_checkpoint(std::istream& in,
                                           const std::map<std::string, std::vector<int>>& expected);

}  // namespace semadapt
