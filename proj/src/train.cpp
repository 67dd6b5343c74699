#include "swarmplan/train.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "swarmplan/kernels.hpp"
#include "swarmplan/rng.hpp"

namespace swarmplan {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning rate must be positive");
  if (batch_size < 1 || patience < 1 || max_epochs < 1 || knots < 1) {
    throw std::invalid_argument("TrainConfig: batch_size, patience, max_epochs and knots must be >= 1");
  }
}

std::vector<int> layer_stack(int input, int hidden_layers, int units, int output) {
  if (hidden_layers < 0 || units < 1) throw std::invalid_argument("layer_stack: invalid hidden configuration");
  std::vector<int> sizes{input};
  for (int i = 0; i < hidden_layers; ++i) sizes.push_back(units);
  sizes.push_back(output);
  return sizes;
}

double evaluate_loss(const Mlp& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int knots) {
  if (x.cols() == 0) throw std::invalid_argument("evaluate_loss: empty set");
  const Eigen::MatrixXd pred = forward_batch_parallel(net, net.input_norm.apply(x), 1);
  const Eigen::MatrixXd target = net.output_norm.apply(y);
  return (pred - target).squaredNorm() / (2.0 * knots * static_cast<double>(x.cols()));
}

TrainOutcome train(Mlp net, const Eigen::MatrixXd& train_x, const Eigen::MatrixXd& train_y,
                   const Eigen::MatrixXd& val_x, const Eigen::MatrixXd& val_y, const TrainConfig& config) {
  config.validate();
  if (train_x.cols() == 0 || val_x.cols() == 0) throw std::invalid_argument("train: empty train or validation set");
  if (train_x.rows() != net.input_size() || val_x.rows() != net.input_size() ||
      train_y.rows() != net.output_size() || val_y.rows() != net.output_size()) {
    throw std::invalid_argument("train: data dimensions do not match the network");
  }
  if (train_x.cols() != train_y.cols() || val_x.cols() != val_y.cols()) {
    throw std::invalid_argument("train: input/target sample counts differ");
  }

  net.input_norm = Standardizer::fit(train_x);
  net.output_norm = Standardizer::fit(train_y);
  const Eigen::MatrixXd xs = net.input_norm.apply(train_x);
  const Eigen::MatrixXd ys = net.output_norm.apply(train_y);

  const Eigen::Index n = xs.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  TrainOutcome out;
  out.net = net;
  double best = kInf;
  int since_best = 0;

  Eigen::MatrixXd bx, by;
  std::vector<std::uint64_t> seeds;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng shuffle(mix_seed(config.seed, static_cast<std::uint64_t>(epoch), 1));
    for (Eigen::Index i = n - 1; i > 0; --i) {
      std::swap(order[static_cast<std::size_t>(i)],
                order[static_cast<std::size_t>(shuffle.below(static_cast<std::uint64_t>(i) + 1))]);
    }
    const std::uint64_t epoch_seed = mix_seed(config.seed, static_cast<std::uint64_t>(epoch), 2);

    double loss_sum = 0.0;
    int batches = 0;
    for (Eigen::Index begin = 0; begin < n; begin += config.batch_size) {
      const Eigen::Index m = std::min<Eigen::Index>(config.batch_size, n - begin);
      bx.resize(xs.rows(), m);
      by.resize(ys.rows(), m);
      seeds.resize(static_cast<std::size_t>(m));
      for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(begin + k)];
        bx.col(k) = xs.col(src);
        by.col(k) = ys.col(src);
        seeds[static_cast<std::size_t>(k)] = mix_seed(epoch_seed, static_cast<std::uint64_t>(begin + k));
      }
      const BatchGradient g = batch_gradient_parallel(net, bx, by, seeds, config.knots, config.threads);
      sgd_step(net, g.grad, config.learning_rate);
      loss_sum += g.loss;
      ++batches;
    }
    const double val = evaluate_loss(net, val_x, val_y, config.knots);
    out.history.train_loss.push_back(loss_sum / batches);
    out.history.val_loss.push_back(val);
    out.history.epoch_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    if (val < best) {
      best = val;
      since_best = 0;
      out.history.best_epoch = epoch;
      out.net = net;
    } else if (++since_best >= config.patience) {
      break;
    }
    // Diverged; nothing after this can improve.
    if (!std::isfinite(val) || !std::isfinite(out.history.train_loss.back())) break;
  }
  return out;
}

SweepResult sweep(const std::vector<int>& hidden_layers, const std::vector<int>& units, const Eigen::MatrixXd& train_x,
                  const Eigen::MatrixXd& train_y, const Eigen::MatrixXd& val_x, const Eigen::MatrixXd& val_y,
                  const TrainConfig& config, double dropout_rate) {
  if (hidden_layers.empty() || units.empty()) throw std::invalid_argument("sweep: empty grid");
  SweepResult res;
  res.hidden_layers = hidden_layers;
  res.units = units;
  res.val_loss.resize(static_cast<Eigen::Index>(hidden_layers.size()), static_cast<Eigen::Index>(units.size()));
  for (std::size_t i = 0; i < hidden_layers.size(); ++i) {
    for (std::size_t j = 0; j < units.size(); ++j) {
      Mlp net = init_mlp(layer_stack(static_cast<int>(train_x.rows()), hidden_layers[i], units[j],
                                     static_cast<int>(train_y.rows())),
                         config.seed, dropout_rate);
      const TrainOutcome o = train(std::move(net), train_x, train_y, val_x, val_y, config);
      res.val_loss(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = o.history.best_val_loss();
    }
  }
  return res;
}

}  // namespace swarmplan
