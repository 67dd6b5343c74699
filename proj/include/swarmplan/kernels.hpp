#pragma once

// Data-parallel kernels. Each has a plain serial reference and an OpenMP
// variant; the OpenMP variants partition work into a fixed number of chunks
// and combine them in index order, so their results do not depend on the
// number of threads.

#include <cstdint>
#include <vector>

#include "swarmplan/mlp.hpp"
#include "swarmplan/scp.hpp"

namespace swarmplan {

struct BatchGradient {
  Gradients grad;     // averaged over the batch
  double loss = 0.0;  // mean per-sample loss under the same dropout masks
};

/// Columns of `inputs`/`targets` are samples (already standardized);
/// sample k uses dropout masks from mask_seeds[k].
BatchGradient batch_gradient_serial(const Mlp& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                                    const std::vector<std::uint64_t>& mask_seeds, int knots);

inline constexpr int kGradientChunks = 4;

BatchGradient batch_gradient_parallel(const Mlp& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                                      const std::vector<std::uint64_t>& mask_seeds, int knots, int threads = 0);

/// Eval-mode forward over columns, in the network's standardized units.
Eigen::MatrixXd forward_batch_serial(const Mlp& net, const Eigen::MatrixXd& inputs);
Eigen::MatrixXd forward_batch_parallel(const Mlp& net, const Eigen::MatrixXd& inputs, int threads = 0);

/// Raw-unit batch prediction: standardize, forward, destandardize.
Eigen::MatrixXd predict_batch(const Mlp& net, const Eigen::MatrixXd& raw_inputs, int threads = 1);

std::vector<PlanResult> plan_batch_serial(const std::vector<Scenario>& scenarios, const ScpParams& params);
std::vector<PlanResult> plan_batch_parallel(const std::vector<Scenario>& scenarios, const ScpParams& params,
                                            int threads = 0);

}  // namespace swarmplan
