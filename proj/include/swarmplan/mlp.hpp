#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swarmplan/dataset.hpp"

namespace swarmplan {

/// Per-feature affine standardization, fit on a training split.
/// Features whose standard deviation is below 1e-12 pass through unchanged.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  bool empty() const { return mean.size() == 0; }
  static Standardizer identity(Eigen::Index n);
  /// `data` holds one sample per column.
  static Standardizer fit(const Eigen::MatrixXd& data);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& y) const;
};

/// Dense ReLU network: affine+ReLU(+dropout) hidden layers, affine output layer.
/// weights[l] is (layer_sizes[l+1] x layer_sizes[l]).
struct Mlp {
  std::vector<int> layer_sizes;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  double dropout_rate = 0.5;
  Standardizer input_norm;
  Standardizer output_norm;
  std::string family;  // dataset family the model was trained on, if any

  int num_layers() const { return static_cast<int>(weights.size()); }
  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  std::size_t parameter_count() const;

  /// Throws std::invalid_argument when shapes, dropout rate or finiteness are violated.
  void validate() const;
};

/// He-normal weights (variance 2 / fan_in), zero biases, identity standardizers.
Mlp init_mlp(const std::vector<int>& layer_sizes, std::uint64_t seed, double dropout_rate = 0.5);

/// Eval: no dropout. Train: inverted dropout after every hidden activation,
/// masks drawn from `mask_seed`.
struct ForwardMode {
  bool train = false;
  std::uint64_t mask_seed = 0;

  static ForwardMode eval() { return {}; }
  static ForwardMode training(std::uint64_t seed) { return {true, seed}; }
};

struct ForwardCache {
  std::vector<Eigen::VectorXd> pre;   // affine outputs per layer
  std::vector<Eigen::VectorXd> post;  // post[0] = input, post[l+1] = layer l output after ReLU/dropout
  std::vector<Eigen::VectorXd> mask;  // per hidden layer, 0 or 1/(1-p)
};

/// Dropout mask for hidden layer `layer` of width `width`.
Eigen::VectorXd dropout_mask(std::uint64_t mask_seed, int layer, int width, double rate);

/// Forward pass in the network's own (standardized) units.
Eigen::VectorXd forward(const Mlp& net, const Eigen::VectorXd& x, ForwardMode mode, ForwardCache* cache = nullptr);

/// E = 1/(2N) * sum_k (pred_k - target_k)^2, N = number of trajectory knots.
double loss(const Eigen::VectorXd& pred, const Eigen::VectorXd& target, int knots = kTargetKnots);

struct Gradients {
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::VectorXd> db;

  static Gradients zeros_like(const Mlp& net);
  Gradients& operator+=(const Gradients& o);
  Gradients& operator*=(double s);
};

/// Exact gradients of loss(forward(x, training(mask_seed)), target). With
/// dropout_rate == 0 this is the deterministic network's gradient.
Gradients backward(const Mlp& net, const Eigen::VectorXd& x, const Eigen::VectorXd& target, std::uint64_t mask_seed,
                   int knots = kTargetKnots, double* loss_out = nullptr);

/// w <- w - lr * dE/dw, b <- b - lr * dE/db.
void sgd_step(Mlp& net, const Gradients& g, double learning_rate);

/// encode -> standardize -> eval forward -> destandardize -> decode.
std::vector<Eigen::MatrixXd> predict(const Mlp& net, const Scenario& sc, const FamilyOptions& opts = {});

/// Same pipeline stopping before decode; raw (destandardized) output vector.
Eigen::VectorXd predict_vector(const Mlp& net, const Eigen::VectorXd& input);

}  // namespace swarmplan
