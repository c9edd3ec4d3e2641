#include "semadapt/nn.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "semadapt/text.hpp"

namespace semadapt {

namespace {
constexpr const char* kCheckpointMagic = "semadapt-checkpoint";
constexpr int kCheckpointVersion = 1;
}  // namespace

void Mlp::layout() {
  if (widths_.size() < 2) throw std::invalid_argument("an MLP needs at least input and output widths");
  weight_offset_.clear();
  bias_offset_.clear();
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    if (widths_[l] < 1 || widths_[l + 1] < 1) throw std::invalid_argument("layer widths must be >= 1");
    weight_offset_.push_back(offset);
    offset += static_cast<std::size_t>(widths_[l]) * widths_[l + 1];
    bias_offset_.push_back(offset);
    offset += widths_[l + 1];
  }
  params_.assign(offset, 0.0);
}

Mlp::Mlp(std::vector<int> widths, Rng& rng, double output_scale) : widths_(std::move(widths)) {
  layout();
  for (int l = 0; l < layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths_[l]));
    const double scale = (l + 1 == layer_count()) ? output_scale : 1.0;
    std::uniform_real_distribution<double> init(-bound, bound);
    auto w = weight(l);
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = scale * init(rng);
    }
  }
}

Mlp Mlp::from_parameters(std::vector<int> widths, std::vector<double> params) {
  Mlp net;
  net.widths_ = std::move(widths);
  net.layout();
  if (params.size() != net.params_.size()) {
    throw std::invalid_argument("parameter count does not match the layer widths");
  }
  net.params_ = std::move(params);
  return net;
}

Eigen::Map<Eigen::MatrixXd> Mlp::weight(int layer) {
  return {params_.data() + weight_offset_[layer], widths_[layer + 1], widths_[layer]};
}
Eigen::Map<const Eigen::MatrixXd> Mlp::weight(int layer) const {
  return {params_.data() + weight_offset_[layer], widths_[layer + 1], widths_[layer]};
}
Eigen::Map<Eigen::VectorXd> Mlp::bias(int layer) {
  return {params_.data() + bias_offset_[layer], widths_[layer + 1]};
}
Eigen::Map<const Eigen::VectorXd> Mlp::bias(int layer) const {
  return {params_.data() + bias_offset_[layer], widths_[layer + 1]};
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, Cache* cache) const {
  if (input.rows() != input_size()) {
    throw std::invalid_argument("input width " + std::to_string(input.rows()) +
                                " does not match network input " + std::to_string(input_size()));
  }
  if (!input.allFinite()) throw std::invalid_argument("non-finite network input");
  if (cache) {
    cache->activations.clear();
    cache->activations.push_back(input);
    cache->version = version_;
    cache->owner = this;
  }
  Eigen::MatrixXd a = input;
  for (int l = 0; l < layer_count(); ++l) {
    Eigen::MatrixXd z = weight(l) * a;
    z.colwise() += bias(l);
    if (l + 1 < layer_count()) z = z.cwiseMax(0.0);
    a = std::move(z);
    if (cache) cache->activations.push_back(a);
  }
  return a;
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Eigen::Map<const Eigen::MatrixXd> x(input.data(), static_cast<Eigen::Index>(input.size()), 1);
  const Eigen::MatrixXd y = forward(Eigen::MatrixXd(x));
  return std::vector<double>(y.data(), y.data() + y.size());
}

void Mlp::backward(const Cache& cache, const Eigen::MatrixXd& output_grad, std::span<double> grad,
                   Eigen::MatrixXd* input_grad) const {
  if (cache.owner != this || cache.version != version_ ||
      static_cast<int>(cache.activations.size()) != layer_count() + 1) {
    throw std::logic_error("stale forward cache: parameters changed since forward()");
  }
  if (grad.size() != params_.size()) throw std::invalid_argument("gradient buffer size mismatch");
  const Eigen::MatrixXd& out = cache.activations.back();
  if (output_grad.rows() != out.rows() || output_grad.cols() != out.cols()) {
    throw std::invalid_argument("output gradient shape mismatch");
  }
  Eigen::MatrixXd delta = output_grad;
  for (int l = layer_count() - 1; l >= 0; --l) {
    const Eigen::MatrixXd& a_prev = cache.activations[l];
    Eigen::Map<Eigen::MatrixXd> gw(grad.data() + weight_offset_[l], widths_[l + 1], widths_[l]);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + bias_offset_[l], widths_[l + 1]);
    gw.noalias() += delta * a_prev.transpose();
    gb += delta.rowwise().sum();
    if (l == 0 && input_grad == nullptr) break;
    Eigen::MatrixXd prev = weight(l).transpose() * delta;
    if (l > 0) prev = prev.cwiseProduct((a_prev.array() > 0.0).cast<double>().matrix());
    delta = std::move(prev);
  }
  if (input_grad) *input_grad = std::move(delta);
}

Adam::Adam(std::size_t parameter_count, AdamConfig config)
    : config_(config), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw std::invalid_argument("Adam: parameter/gradient size mismatch");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * g;
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * g * g;
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps);
  }
}

double clip_grad_norm(std::span<double> grads, double max_norm) {
  double sq = 0.0;
  for (double g : grads) sq += g * g;
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (double& g : grads) g *= scale;
  }
  return norm;
}

void write_checkpoint(std::ostream& out, const std::map<std::string, const Mlp*>& nets) {
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  for (const auto& [name, net] : nets) {
    out << "network " << name << '\n';
    out << "widths " << net->widths().size();
    for (int w : net->widths()) out << ' ' << w;
    out << '\n';
    out << "params " << net->parameter_count() << '\n';
    for (double p : net->parameters()) out << format_double(p) << '\n';
  }
  out << "end\n";
}

std::map<std::string, Mlp> read_checkpoint(std::istream& in,
                                           const std::map<std::string, std::vector<int>>& expected) {
  auto fail = [](const std::string& why) -> void {
    throw std::runtime_error("checkpoint: " + why);
  };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kCheckpointMagic) fail("bad header");
  if (version != kCheckpointVersion) fail("unsupported version " + std::to_string(version));

  std::map<std::string, Mlp> nets;
  std::string tag;
  while (in >> tag) {
    if (tag == "end") break;
    if (tag != "network") fail("expected 'network', got '" + tag + "'");
    std::string name;
    in >> name;
    std::size_t nw = 0;
    if (!(in >> tag >> nw) || tag != "widths") fail("missing widths for " + name);
    std::vector<int> widths(nw);
    for (int& w : widths) in >> w;
    std::size_t np = 0;
    if (!(in >> tag >> np) || tag != "params") fail("missing params for " + name);
    std::vector<double> params(np);
    std::string token;
    for (double& p : params) {
      if (!(in >> token)) fail("truncated parameters for " + name);
      p = parse_double(token);
    }
    if (!in) fail("read error in " + name);
    nets.emplace(name, Mlp::from_parameters(std::move(widths), std::move(params)));
  }
  if (tag != "end") fail("missing end marker");
  for (const auto& [name, widths] : expected) {
    auto it = nets.find(name);
    if (it == nets.end()) fail("network '" + name + "' not found");
    if (it->second.widths() != widths) fail("network '" + name + "' widths do not match config");
  }
  return nets;
}

}  // namespace semadapt
