#pragma once

#include <cstdint>
#include <vector>

#include "swarmplan/mlp.hpp"

namespace swarmplan {

struct TrainConfig {
  double learning_rate = 0.001;
  int batch_size = 32;
  int max_epochs = 1000;
  int patience = 10;  // epochs without a validation improvement before stopping
  std::uint64_t seed = 0;
  int knots = kTargetKnots;  // N in the 1/(2N) loss normalization
  int threads = 1;

  void validate() const;
};

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  std::vector<double> epoch_seconds;
  int best_epoch = 0;  // 0-based index into val_loss

  double best_val_loss() const { return val_loss.at(static_cast<std::size_t>(best_epoch)); }
};

struct TrainOutcome {
  Mlp net;  // parameters from the best-validation epoch
  TrainHistory history;
};

/// Mini-batch gradient descent with per-epoch shuffling and early stopping.
/// Inputs/targets are raw (one sample per column); standardizers are fit on
/// the training split and stored in the returned network. Losses are in
/// standardized units.
TrainOutcome train(Mlp net, const Eigen::MatrixXd& train_x, const Eigen::MatrixXd& train_y,
                   const Eigen::MatrixXd& val_x, const Eigen::MatrixXd& val_y, const TrainConfig& config);

/// Eval-mode mean loss of `net` on raw data, in standardized units.
double evaluate_loss(const Mlp& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int knots);

struct SweepResult {
  std::vector<int> hidden_layers;
  std::vector<int> units;
  Eigen::MatrixXd val_loss;  // rows: hidden_layers, cols: units
};

/// Trains one network per (hidden layer count, units) cell on identical data and seeds.
SweepResult sweep(const std::vector<int>& hidden_layers, const std::vector<int>& units, const Eigen::MatrixXd& train_x,
                  const Eigen::MatrixXd& train_y, const Eigen::MatrixXd& val_x, const Eigen::MatrixXd& val_y,
                  const TrainConfig& config, double dropout_rate = 0.5);

/// (input, hidden..., output) with `hidden_layers` layers of `units` each.
std::vector<int> layer_stack(int input, int hidden_layers, int units, int output);

}  // namespace swarmplan
