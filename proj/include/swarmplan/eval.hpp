#pragma once

#include <optional>
#include <vector>

#include "swarmplan/dataset.hpp"
#include "swarmplan/mlp.hpp"

namespace swarmplan {

/// Root mean square of the componentwise difference. Throws on shape mismatch.
double rmse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth);
/// Per-agent knot matrices; pooled over all agents.
double rmse(const std::vector<Eigen::MatrixXd>& pred, const std::vector<Eigen::MatrixXd>& truth);

/// Controls that reproduce consecutive knot states under the ZOH recurrence
/// at the knot spacing: u(k) = B^+ (x(k+1) - A x(k)), with x(0) the start state.
/// `knots` is (2d) x K per agent; returns d x K per agent.
std::vector<Eigen::MatrixXd> recover_controls(const Scenario& sc, const std::vector<Eigen::MatrixXd>& knots);

/// Knot spacing in seconds for the network targets of `sc`.
double knot_spacing(const Scenario& sc);

struct WelchResult {
  double t = 0.0;
  double p = 1.0;  // two-sided
  double dof = 0.0;
};

/// Welch unequal-variance two-sample t-test. Throws std::invalid_argument
/// for samples with fewer than 2 values or zero combined variance.
WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1); 0 for a single value
};

MeanStd mean_std(const std::vector<double>& v);

struct SeparationStats {
  double min_obstacle_distance = kInf;  // center-to-center, over all knots and records
  double min_agent_distance = kInf;
  int obstacle_violations = 0;  // records whose predicted knots come closer than required
  int agent_violations = 0;
};

struct BenchReport {
  int instances = 0;
  double planner_mean = 0.0;  // seconds per instance
  double planner_median = 0.0;
  double network_single_mean = 0.0;  // one forward call per instance
  double network_single_median = 0.0;
  double network_batch_mean = 0.0;  // whole set in one batched call, per instance
  double speedup = 0.0;             // planner_mean / network_batch_mean
  double speedup_single = 0.0;      // planner_mean / network_single_mean
  int planner_failures = 0;
};

struct EvalReport {
  std::vector<double> rmse;
  MeanStd rmse_stats;
  std::vector<double> truth_fuel;
  std::vector<double> network_fuel;
  MeanStd truth_fuel_stats;
  MeanStd network_fuel_stats;
  WelchResult fuel_test;
  SeparationStats separation;
  std::optional<BenchReport> timing;
};

/// Metrics of `net` on records; deterministic (timing left empty).
EvalReport evaluate(const Mlp& net, const std::vector<DatasetRecord>& records, const FamilyOptions& opts = {});

struct BenchOptions {
  int warmup = 2;
  int batch_repeats = 20;
};

/// Serial wall-clock timing of planning and inference on identical scenarios.
/// Needs at least 10 scenarios; warm-up runs are not timed.
BenchReport benchmark(const ScpParams& params, const Mlp& net, const std::vector<Scenario>& scenarios,
                      const BenchOptions& opts = {});

}  // namespace swarmplan
