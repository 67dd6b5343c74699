#include "swarmplan/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace swarmplan {

namespace {

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

void check_batch(const Mlp& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                 const std::vector<std::uint64_t>& mask_seeds) {
  if (inputs.rows() != net.input_size() || targets.rows() != net.output_size()) {
    throw std::invalid_argument("batch_gradient: dimension mismatch");
  }
  if (inputs.cols() != targets.cols() || static_cast<Eigen::Index>(mask_seeds.size()) != inputs.cols()) {
    throw std::invalid_argument("batch_gradient: sample count mismatch");
  }
  if (inputs.cols() == 0) throw std::invalid_argument("batch_gradient: empty batch");
}

// Matrix-form forward/backward over a block of samples; returns summed
// (not averaged) gradients and summed loss.
BatchGradient block_gradient(const Mlp& net, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                             const std::uint64_t* seeds, int knots) {
  const int L = net.num_layers();
  const Eigen::Index B = X.cols();
  const bool drop = net.dropout_rate > 0.0;
  std::vector<Eigen::MatrixXd> post(static_cast<std::size_t>(L + 1));
  std::vector<Eigen::MatrixXd> gate(static_cast<std::size_t>(L));  // ReLU'(h) * mask per hidden layer
  post[0] = X;
  for (int l = 0; l < L; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    Eigen::MatrixXd h = net.weights[ul] * post[ul];
    h.colwise() += net.biases[ul];
    if (l + 1 < L) {
      Eigen::MatrixXd g(h.rows(), B);
      for (Eigen::Index k = 0; k < B; ++k) {
        if (drop) {
          g.col(k) = dropout_mask(seeds[k], l, static_cast<int>(h.rows()), net.dropout_rate);
        } else {
          g.col(k).setOnes();
        }
      }
      g = (h.array() > 0.0).select(g, 0.0);
      post[ul + 1] = h.cwiseMax(0.0).cwiseProduct(g);
      gate[ul] = std::move(g);
    } else {
      post[ul + 1] = std::move(h);
    }
  }
  BatchGradient out;
  Eigen::MatrixXd delta = post[static_cast<std::size_t>(L)] - Y;
  out.loss = delta.squaredNorm() / (2.0 * knots);
  delta /= static_cast<double>(knots);
  out.grad.dw.resize(static_cast<std::size_t>(L));
  out.grad.db.resize(static_cast<std::size_t>(L));
  for (int l = L - 1; l >= 0; --l) {
    const auto ul = static_cast<std::size_t>(l);
    out.grad.dw[ul].noalias() = delta * post[ul].transpose();
    out.grad.db[ul] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = net.weights[ul].transpose() * delta;
      delta = back.cwiseProduct(gate[ul - 1]);
    }
  }
  return out;
}

}  // namespace

BatchGradient batch_gradient_serial(const Mlp& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                                    const std::vector<std::uint64_t>& mask_seeds, int knots) {
  check_batch(net, inputs, targets, mask_seeds);
  BatchGradient out;
  out.grad = Gradients::zeros_like(net);
  for (Eigen::Index k = 0; k < inputs.cols(); ++k) {
    double l = 0.0;
    out.grad += backward(net, inputs.col(k), targets.col(k), mask_seeds[static_cast<std::size_t>(k)], knots, &l);
    out.loss += l;
  }
  const double inv = 1.0 / static_cast<double>(inputs.cols());
  out.grad *= inv;
  out.loss *= inv;
  return out;
}

BatchGradient batch_gradient_parallel(const Mlp& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                                      const std::vector<std::uint64_t>& mask_seeds, int knots, int threads) {
  check_batch(net, inputs, targets, mask_seeds);
  const Eigen::Index B = inputs.cols();
  const int chunks = static_cast<int>(std::min<Eigen::Index>(kGradientChunks, B));
  std::vector<BatchGradient> parts(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (int c = 0; c < chunks; ++c) {
    const Eigen::Index begin = B * c / chunks;
    const Eigen::Index end = B * (c + 1) / chunks;
    parts[static_cast<std::size_t>(c)] =
        block_gradient(net, inputs.middleCols(begin, end - begin), targets.middleCols(begin, end - begin),
                       mask_seeds.data() + begin, knots);
  }
  BatchGradient out = std::move(parts[0]);
  for (int c = 1; c < chunks; ++c) {
    out.grad += parts[static_cast<std::size_t>(c)].grad;
    out.loss += parts[static_cast<std::size_t>(c)].loss;
  }
  const double inv = 1.0 / static_cast<double>(B);
  out.grad *= inv;
  out.loss *= inv;
  return out;
}

Eigen::MatrixXd forward_batch_serial(const Mlp& net, const Eigen::MatrixXd& inputs) {
  Eigen::MatrixXd out(net.output_size(), inputs.cols());
  for (Eigen::Index k = 0; k < inputs.cols(); ++k) out.col(k) = forward(net, inputs.col(k), ForwardMode::eval());
  return out;
}

Eigen::MatrixXd forward_batch_parallel(const Mlp& net, const Eigen::MatrixXd& inputs, int threads) {
  if (inputs.rows() != net.input_size()) throw std::invalid_argument("forward_batch: input dimension mismatch");
  const Eigen::Index n = inputs.cols();
  Eigen::MatrixXd out(net.output_size(), n);
  constexpr Eigen::Index kBlock = 256;
  const auto blocks = static_cast<int>((n + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (int b = 0; b < blocks; ++b) {
    const Eigen::Index begin = b * kBlock;
    const Eigen::Index cols = std::min(kBlock, n - begin);
    Eigen::MatrixXd a = inputs.middleCols(begin, cols);
    for (int l = 0; l < net.num_layers(); ++l) {
      const auto ul = static_cast<std::size_t>(l);
      Eigen::MatrixXd h = net.weights[ul] * a;
      h.colwise() += net.biases[ul];
      a = l + 1 < net.num_layers() ? Eigen::MatrixXd(h.cwiseMax(0.0)) : std::move(h);
    }
    out.middleCols(begin, cols) = a;
  }
  return out;
}

Eigen::MatrixXd predict_batch(const Mlp& net, const Eigen::MatrixXd& raw_inputs, int threads) {
  return net.output_norm.invert(forward_batch_parallel(net, net.input_norm.apply(raw_inputs), threads));
}

std::vector<PlanResult> plan_batch_serial(const std::vector<Scenario>& scenarios, const ScpParams& params) {
  std::vector<PlanResult> out;
  out.reserve(scenarios.size());
  for (const auto& sc : scenarios) out.push_back(plan(sc, params));
  return out;
}

std::vector<PlanResult> plan_batch_parallel(const std::vector<Scenario>& scenarios, const ScpParams& params,
                                            int threads) {
  std::vector<PlanResult> out(scenarios.size());
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] = plan(scenarios[static_cast<std::size_t>(k)], params);
  }
  return out;
}

}  // namespace swarmplan
