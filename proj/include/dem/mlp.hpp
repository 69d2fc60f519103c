#pragma once

// Fully connected MLP: hidden layers share one activation, the output layer
// is affine. Forward passes are generic over the jet scalar so the same
// code serves point evaluation, tape recording, and tests.

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dem/columns.hpp"
#include "dem/jet.hpp"
#include "dem/tape.hpp"

namespace dem::nn {

enum class Activation { Tanh, TanhSq, EluSq };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

struct MlpConfig {
  int input_dim = 1;
  int output_dim = 1;
  std::vector<int> hidden;
  Activation activation = Activation::Tanh;
  std::uint64_t seed = 0;

  // Layer sizes including input and output.
  std::vector<int> layer_sizes() const {
    std::vector<int> s;
    s.push_back(input_dim);
    s.insert(s.end(), hidden.begin(), hidden.end());
    s.push_back(output_dim);
    return s;
  }
};

struct MlpParams {
  // weights[l] is (out x in); biases[l] has out entries.
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  std::size_t count() const {
    std::size_t n = 0;
    for (const auto& w : weights) n += static_cast<std::size_t>(w.size());
    for (const auto& b : biases) n += static_cast<std::size_t>(b.size());
    return n;
  }
};

// Glorot-uniform weights (zero biases), reproducible for a given seed. The
// uniform draw is built from raw mt19937_64 bits so results do not depend
// on the standard library's distribution implementation.
MlpParams init_params(const MlpConfig& config);

std::size_t param_count(const MlpConfig& config);

// Flat layout: per layer, weights row-major (out major) then biases.
Eigen::VectorXd flatten(const MlpParams& p);
void unflatten(const Eigen::VectorXd& flat, MlpParams& p);

// -- generic forward -----------------------------------------------------

// Multiplication of a jet-scalar by a parameter handle. Parameters carry no
// spatial tangent.
inline double pmul(double a, double p) { return a * p; }
inline ad::Var pmul(ad::Var a, ad::Var p) { return a * p; }
template <class A>
col::CV<A> pmul(const col::CV<A>& a, typename A::P p) {
  return {a.alg, a.alg->mulp(a.h, p)};
}
inline double padd(double a, double p) { return a + p; }
inline ad::Var padd(ad::Var a, ad::Var p) { return a + p; }
template <class A>
col::CV<A> padd(const col::CV<A>& a, typename A::P p) {
  return {a.alg, a.alg->addp(a.h, p)};
}

template <class P>
struct LayerRefs {
  std::vector<std::vector<P>> weights;  // [out][in]
  std::vector<P> biases;
};

template <class P>
using ParamRefs = std::vector<LayerRefs<P>>;

// Parameter handles in flat order for the plain path.
ParamRefs<double> make_param_refs(const MlpParams& p);

// Lift every parameter onto a tape as a leaf; `leaves` receives the leaf
// variables in flat order so adjoints can be read back as a gradient.
ParamRefs<ad::Var> lift_params(ad::Tape& tape, const MlpParams& p,
                               std::vector<ad::Var>* leaves = nullptr);

template <class T, class P, int D>
ad::Jet<T, D> pjmul(const ad::Jet<T, D>& a, P p) {
  ad::Jet<T, D> r;
  r.v = pmul(a.v, p);
  for (int i = 0; i < D; ++i) r.d[i] = pmul(a.d[i], p);
  return r;
}

template <class T, int D>
ad::Jet<T, D> apply_activation(Activation act, const ad::Jet<T, D>& z) {
  switch (act) {
    case Activation::Tanh:
      return ad::jet_tanh(z);
    case Activation::TanhSq:
      return ad::jet_tanh_sq(z);
    case Activation::EluSq:
      return ad::jet_elu_sq(z);
  }
  throw std::logic_error("mlp: unknown activation");
}

template <class T, class P, int D>
std::vector<ad::Jet<T, D>> mlp_forward(const ParamRefs<P>& params,
                                       Activation act,
                                       std::span<const ad::Jet<T, D>> x) {
  std::vector<ad::Jet<T, D>> h(x.begin(), x.end());
  const std::size_t n_layers = params.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    const auto& layer = params[l];
    std::vector<ad::Jet<T, D>> z(layer.weights.size());
    for (std::size_t k = 0; k < layer.weights.size(); ++k) {
      const auto& row = layer.weights[k];
      if (row.size() != h.size()) throw std::invalid_argument("mlp: shape mismatch");
      ad::Jet<T, D> acc = pjmul(h[0], row[0]);
      for (std::size_t j = 1; j < h.size(); ++j)
        acc = acc + pjmul(h[j], row[j]);
      acc.v = padd(acc.v, layer.biases[k]);
      z[k] = acc;
    }
    if (l + 1 < n_layers) {
      for (auto& zk : z) zk = apply_activation(act, zk);
    }
    h = std::move(z);
  }
  return h;
}

}  // namespace dem::nn
