#include "dem/mlp.hpp"

#include <cmath>

namespace dem::nn {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::Tanh:
      return "tanh";
    case Activation::TanhSq:
      return "tanh2";
    case Activation::EluSq:
      return "elu2";
  }
  return "tanh";
}

Activation activation_from_string(const std::string& s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "tanh2") return Activation::TanhSq;
  if (s == "elu2") return Activation::EluSq;
  throw std::invalid_argument("unknown activation: " + s);
}

namespace {
// Uniform in [0,1) from the top 53 bits of the generator output.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace

MlpParams init_params(const MlpConfig& config) {
  const auto sizes = config.layer_sizes();
  for (int s : sizes) {
    if (s < 1) throw std::invalid_argument("mlp: layer width must be >= 1");
  }
  std::mt19937_64 rng(config.seed);
  MlpParams p;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int fan_in = sizes[l];
    const int fan_out = sizes[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c)
        w(r, c) = (2.0 * next_uniform(rng) - 1.0) * limit;
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return p;
}

std::size_t param_count(const MlpConfig& config) {
  const auto sizes = config.layer_sizes();
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    n += static_cast<std::size_t>(sizes[l]) * sizes[l + 1] + sizes[l + 1];
  return n;
}

Eigen::VectorXd flatten(const MlpParams& p) {
  Eigen::VectorXd flat(p.count());
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    const auto& w = p.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat[k++] = w(r, c);
    const auto& b = p.biases[l];
    for (Eigen::Index r = 0; r < b.size(); ++r) flat[k++] = b[r];
  }
  return flat;
}

void unflatten(const Eigen::VectorXd& flat, MlpParams& p) {
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    auto& w = p.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = flat[k++];
    auto& b = p.biases[l];
    for (Eigen::Index r = 0; r < b.size(); ++r) b[r] = flat[k++];
  }
  if (k != flat.size()) throw std::invalid_argument("mlp: flat size mismatch");
}

ParamRefs<double> make_param_refs(const MlpParams& p) {
  ParamRefs<double> refs(p.weights.size());
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    const auto& w = p.weights[l];
    refs[l].weights.resize(w.rows());
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      refs[l].weights[r].resize(w.cols());
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        refs[l].weights[r][c] = w(r, c);
    }
    refs[l].biases.assign(p.biases[l].data(),
                          p.biases[l].data() + p.biases[l].size());
  }
  return refs;
}

ParamRefs<ad::Var> lift_params(ad::Tape& tape, const MlpParams& p,
                               std::vector<ad::Var>* leaves) {
  ParamRefs<ad::Var> refs(p.weights.size());
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    const auto& w = p.weights[l];
    refs[l].weights.resize(w.rows());
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      refs[l].weights[r].resize(w.cols());
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        ad::Var v = tape.scalar(w(r, c));
        refs[l].weights[r][c] = v;
        if (leaves) leaves->push_back(v);
      }
    }
    const auto& b = p.biases[l];
    refs[l].biases.resize(b.size());
    for (Eigen::Index r = 0; r < b.size(); ++r) {
      ad::Var v = tape.scalar(b[r]);
      refs[l].biases[r] = v;
      if (leaves) leaves->push_back(v);
    }
  }
  return refs;
}

}  // namespace dem::nn
