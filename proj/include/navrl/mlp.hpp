#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "navrl/error.hpp"

namespace navrl {

enum class Activation { ReLU, Tanh, Identity };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

template <typename Scalar>
struct DenseLayer {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix weights;  // out x in
  Vector biases;   // out
  Activation activation = Activation::Identity;

  Eigen::Index in_size() const { return weights.cols(); }
  Eigen::Index out_size() const { return weights.rows(); }
};

/// Dense feed-forward network. Batches are column-major: one sample per column.
template <typename Scalar>
struct Mlp {
  using Matrix = typename DenseLayer<Scalar>::Matrix;
  using Vector = typename DenseLayer<Scalar>::Vector;

  std::vector<DenseLayer<Scalar>> layers;

  Eigen::Index input_size() const { return layers.front().in_size(); }
  Eigen::Index output_size() const { return layers.back().out_size(); }
  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += static_cast<std::size_t>(l.weights.size() + l.biases.size());
    return n;
  }
};

/// Same shapes as the network it differentiates (or, for Adam, the moments of).
template <typename Scalar>
struct LayerGradient {
  typename DenseLayer<Scalar>::Matrix weights;
  typename DenseLayer<Scalar>::Vector biases;
};

template <typename Scalar>
using GradientBundle = std::vector<LayerGradient<Scalar>>;

template <typename Scalar>
struct ForwardCache {
  using Matrix = typename Mlp<Scalar>::Matrix;
  std::vector<Matrix> inputs;       // input to each layer
  std::vector<Matrix> activations;  // output of each layer (post-activation)
};

template <typename Scalar>
struct AdamState {
  GradientBundle<Scalar> m;
  GradientBundle<Scalar> v;
  std::int64_t t = 0;
  Scalar alpha = Scalar(1e-3);
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar eps = Scalar(1e-8);
};

namespace detail {

template <typename Scalar>
void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::ShapeError, what);
}

template <typename Derived>
void apply_activation(Activation a, Eigen::MatrixBase<Derived>& z) {
  switch (a) {
    case Activation::ReLU: z = z.cwiseMax(typename Derived::Scalar(0)); break;
    case Activation::Tanh: z = z.array().tanh().matrix(); break;
    case Activation::Identity: break;
  }
}

template <typename Scalar>
void check_congruent(const Mlp<Scalar>& net, const GradientBundle<Scalar>& g) {
  require<Scalar>(g.size() == net.layers.size(), "gradient bundle layer count mismatch");
  for (std::size_t i = 0; i < g.size(); ++i) {
    require<Scalar>(g[i].weights.rows() == net.layers[i].weights.rows() &&
                        g[i].weights.cols() == net.layers[i].weights.cols() &&
                        g[i].biases.size() == net.layers[i].biases.size(),
                    "gradient shape mismatch at layer " + std::to_string(i));
  }
}

}  // namespace detail

/// Xavier-uniform weights, zero biases. `activations` has one entry per layer.
template <typename Scalar = double>
Mlp<Scalar> mlp_init(const std::vector<int>& layer_sizes, const std::vector<Activation>& activations,
                     std::uint64_t seed) {
  if (layer_sizes.size() < 2) {
    throw Error(ErrorCode::InvalidArchitecture, "need at least input and output sizes");
  }
  if (activations.size() != layer_sizes.size() - 1) {
    throw Error(ErrorCode::InvalidArchitecture, "one activation per layer required");
  }
  for (int s : layer_sizes) {
    if (s < 1) throw Error(ErrorCode::InvalidArchitecture, "layer sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  Mlp<Scalar> net;
  for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
    const int fan_in = layer_sizes[i];
    const int fan_out = layer_sizes[i + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer<Scalar> layer;
    layer.weights.resize(fan_out, fan_in);
    for (Eigen::Index c = 0; c < fan_in; ++c) {
      for (Eigen::Index r = 0; r < fan_out; ++r) layer.weights(r, c) = Scalar(dist(rng));
    }
    layer.biases = DenseLayer<Scalar>::Vector::Zero(fan_out);
    layer.activation = activations[i];
    net.layers.push_back(std::move(layer));
  }
  return net;
}

template <typename Scalar>
typename Mlp<Scalar>::Matrix forward(const Mlp<Scalar>& net,
                                     const typename Mlp<Scalar>::Matrix& x,
                                     ForwardCache<Scalar>* cache = nullptr) {
  detail::require<Scalar>(!net.layers.empty(), "empty network");
  detail::require<Scalar>(x.rows() == net.input_size(),
                          "input has " + std::to_string(x.rows()) + " rows, network expects " +
                              std::to_string(net.input_size()));
  if (cache) {
    cache->inputs.clear();
    cache->activations.clear();
  }
  typename Mlp<Scalar>::Matrix h = x;
  for (const auto& layer : net.layers) {
    typename Mlp<Scalar>::Matrix z = layer.weights * h;
    z.colwise() += layer.biases;
    detail::apply_activation(layer.activation, z);
    if (cache) cache->inputs.push_back(std::move(h));
    h = std::move(z);
    if (cache) cache->activations.push_back(h);
  }
  return h;
}

template <typename Scalar>
typename Mlp<Scalar>::Vector forward(const Mlp<Scalar>& net, const typename Mlp<Scalar>::Vector& x) {
  typename Mlp<Scalar>::Matrix in = x;
  return forward(net, in);
}

template <typename Scalar>
struct BackwardResult {
  GradientBundle<Scalar> grads;
  typename Mlp<Scalar>::Matrix input_grad;
};

namespace detail {

template <typename Scalar>
BackwardResult<Scalar> reverse_pass(const Mlp<Scalar>& net, const ForwardCache<Scalar>& cache,
                                    const typename Mlp<Scalar>::Matrix& upstream, bool param_grads,
                                    bool input_grad) {
  using Matrix = typename Mlp<Scalar>::Matrix;
  require<Scalar>(cache.inputs.size() == net.layers.size() &&
                      cache.activations.size() == net.layers.size(),
                  "forward cache does not match network");
  const Matrix& y = cache.activations.back();
  require<Scalar>(upstream.rows() == y.rows() && upstream.cols() == y.cols(),
                  "upstream gradient shape mismatch");

  BackwardResult<Scalar> out;
  if (param_grads) out.grads.resize(net.layers.size());
  Matrix delta = upstream;
  for (std::size_t li = net.layers.size(); li-- > 0;) {
    const auto& layer = net.layers[li];
    const Matrix& act = cache.activations[li];
    switch (layer.activation) {
      case Activation::ReLU:
        delta = (act.array() > Scalar(0)).select(delta, Scalar(0));
        break;
      case Activation::Tanh:
        delta.array() *= (Scalar(1) - act.array().square());
        break;
      case Activation::Identity:
        break;
    }
    if (param_grads) {
      out.grads[li].weights.noalias() = delta * cache.inputs[li].transpose();
      out.grads[li].biases = delta.rowwise().sum();
    }
    if (li == 0 && !input_grad) return out;
    Matrix next = layer.weights.transpose() * delta;
    delta = std::move(next);
  }
  out.input_grad = std::move(delta);
  return out;
}

}  // namespace detail

/// Reverse-mode pass. `upstream` is dL/dy with one column per batch sample;
/// parameter gradients are summed over the batch. input_grad stays empty when
/// `want_input_grad` is false.
template <typename Scalar>
BackwardResult<Scalar> backward(const Mlp<Scalar>& net, const ForwardCache<Scalar>& cache,
                                const typename Mlp<Scalar>::Matrix& upstream,
                                bool want_input_grad = true) {
  return detail::reverse_pass(net, cache, upstream, true, want_input_grad);
}

/// dL/dx only, skipping the parameter gradients.
template <typename Scalar>
typename Mlp<Scalar>::Matrix input_gradient(const Mlp<Scalar>& net, const ForwardCache<Scalar>& cache,
                                            const typename Mlp<Scalar>::Matrix& upstream) {
  return detail::reverse_pass(net, cache, upstream, false, true).input_grad;
}

template <typename Scalar>
GradientBundle<Scalar> zero_gradients(const Mlp<Scalar>& net) {
  GradientBundle<Scalar> g(net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    g[i].weights = DenseLayer<Scalar>::Matrix::Zero(net.layers[i].weights.rows(),
                                                    net.layers[i].weights.cols());
    g[i].biases = DenseLayer<Scalar>::Vector::Zero(net.layers[i].biases.size());
  }
  return g;
}

template <typename Scalar>
AdamState<Scalar> adam_init(const Mlp<Scalar>& net, Scalar alpha) {
  AdamState<Scalar> s;
  s.m = zero_gradients(net);
  s.v = zero_gradients(net);
  s.alpha = alpha;
  return s;
}

/// Standard Adam with bias correction:
///   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2,
///   p <- p - alpha * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps).
template <typename Scalar>
void adam_step(AdamState<Scalar>& state, Mlp<Scalar>& net, const GradientBundle<Scalar>& grads) {
  detail::check_congruent(net, grads);
  detail::check_congruent(net, state.m);
  detail::check_congruent(net, state.v);
  state.t += 1;
  const Scalar b1 = state.beta1;
  const Scalar b2 = state.beta2;
  const Scalar c1 = Scalar(1) - std::pow(b1, Scalar(state.t));
  const Scalar c2 = Scalar(1) - std::pow(b2, Scalar(state.t));
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = b1 * m + (Scalar(1) - b1) * g;
    v = b2 * v + (Scalar(1) - b2) * g.cwiseProduct(g);
    param.array() -= state.alpha * (m.array() / c1) / ((v.array() / c2).sqrt() + state.eps);
  };
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    update(net.layers[i].weights, state.m[i].weights, state.v[i].weights, grads[i].weights);
    update(net.layers[i].biases, state.m[i].biases, state.v[i].biases, grads[i].biases);
  }
}

/// Polyak averaging: target <- tau * online + (1 - tau) * target.
template <typename Scalar>
void soft_update(Mlp<Scalar>& target, const Mlp<Scalar>& online, Scalar tau) {
  detail::require<Scalar>(target.layers.size() == online.layers.size(), "layer count mismatch");
  for (std::size_t i = 0; i < target.layers.size(); ++i) {
    auto& t = target.layers[i];
    const auto& o = online.layers[i];
    detail::require<Scalar>(t.weights.rows() == o.weights.rows() &&
                                t.weights.cols() == o.weights.cols() &&
                                t.biases.size() == o.biases.size(),
                            "shape mismatch at layer " + std::to_string(i));
    t.weights = tau * o.weights + (Scalar(1) - tau) * t.weights;
    t.biases = tau * o.biases + (Scalar(1) - tau) * t.biases;
  }
}

template <typename Scalar>
bool operator==(const Mlp<Scalar>& a, const Mlp<Scalar>& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    const auto& x = a.layers[i];
    const auto& y = b.layers[i];
    if (x.activation != y.activation || x.weights.rows() != y.weights.rows() ||
        x.weights.cols() != y.weights.cols() || x.biases.size() != y.biases.size() ||
        x.weights != y.weights || x.biases != y.biases) {
      return false;
    }
  }
  return true;
}

using Network = Mlp<double>;
using Gradients = GradientBundle<double>;
using Adam = AdamState<double>;
using Cache = ForwardCache<double>;

}  // namespace navrl
