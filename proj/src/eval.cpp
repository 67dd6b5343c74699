#include "swarmplan/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "swarmplan/kernels.hpp"

namespace swarmplan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
  const double hi = v[m];
  if (v.size() % 2 == 1) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m)));
}

}  // namespace

double rmse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) throw std::invalid_argument("rmse: shape mismatch");
  if (pred.size() == 0) throw std::invalid_argument("rmse: empty input");
  return std::sqrt((pred - truth).squaredNorm() / static_cast<double>(pred.size()));
}

double rmse(const std::vector<Eigen::MatrixXd>& pred, const std::vector<Eigen::MatrixXd>& truth) {
  if (pred.size() != truth.size() || pred.empty()) throw std::invalid_argument("rmse: agent count mismatch");
  double sq = 0.0;
  double n = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].rows() != truth[i].rows() || pred[i].cols() != truth[i].cols()) {
      throw std::invalid_argument("rmse: shape mismatch");
    }
    sq += (pred[i] - truth[i]).squaredNorm();
    n += static_cast<double>(pred[i].size());
  }
  if (n == 0.0) throw std::invalid_argument("rmse: empty input");
  return std::sqrt(sq / n);
}

double knot_spacing(const Scenario& sc) {
  const auto knots = target_knots(sc.horizon);
  return sc.dt * static_cast<double>(knots.front());
}

std::vector<Eigen::MatrixXd> recover_controls(const Scenario& sc, const std::vector<Eigen::MatrixXd>& knots) {
  if (static_cast<int>(knots.size()) != sc.num_agents()) throw std::invalid_argument("recover_controls: agent count");
  Scenario coarse = sc;
  coarse.dt = knot_spacing(sc);
  const DiscreteLTI sys = coarse.system();
  const Eigen::MatrixXd B_pinv = sys.B.completeOrthogonalDecomposition().pseudoInverse();
  std::vector<Eigen::MatrixXd> out;
  for (int i = 0; i < sc.num_agents(); ++i) {
    const auto& X = knots[static_cast<std::size_t>(i)];
    if (X.rows() != sys.state_dim()) throw std::invalid_argument("recover_controls: state dimension mismatch");
    Eigen::MatrixXd U(sys.control_dim(), X.cols());
    Eigen::VectorXd prev = sc.starts[static_cast<std::size_t>(i)].stacked();
    for (Eigen::Index k = 0; k < X.cols(); ++k) {
      U.col(k) = B_pinv * (X.col(k) - sys.A * prev);
      prev = X.col(k);
    }
    out.push_back(std::move(U));
  }
  return out;
}

MeanStd mean_std(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean_std: empty sample");
  MeanStd r;
  for (double x : v) r.mean += x;
  r.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return r;
}

WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch_t_test: each sample needs at least 2 values");
  const MeanStd sa = mean_std(a);
  const MeanStd sb = mean_std(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sa.std * sa.std / na;
  const double vb = sb.std * sb.std / nb;
  const double se2 = va + vb;
  if (!(se2 > 0.0) || !std::isfinite(se2)) throw std::invalid_argument("welch_t_test: degenerate variance");
  WelchResult r;
  r.t = (sa.mean - sb.mean) / std::sqrt(se2);
  r.dof = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  const boost::math::students_t dist(r.dof);
  r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t))));
  return r;
}

EvalReport evaluate(const Mlp& net, const std::vector<DatasetRecord>& records, const FamilyOptions& opts) {
  if (records.empty()) throw std::invalid_argument("evaluate: empty test set");
  Eigen::MatrixXd inputs(net.input_size(), static_cast<Eigen::Index>(records.size()));
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].input.size() != net.input_size()) throw std::invalid_argument("evaluate: record/model size mismatch");
    inputs.col(static_cast<Eigen::Index>(r)) = records[r].input;
  }
  if (!net.family.empty() && net.family != to_string(records.front().family)) {
    throw std::invalid_argument("evaluate: model family " + net.family + " does not match records");
  }
  const Eigen::MatrixXd outputs = predict_batch(net, inputs, 1);

  EvalReport rep;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const DatasetRecord& rec = records[r];
    const Scenario& sc = rec.scenario;
    const auto pred = decode_target(outputs.col(static_cast<Eigen::Index>(r)), rec.family, opts);
    const auto truth = decode_target(rec.target, rec.family, opts);
    rep.rmse.push_back(rmse(pred, truth));
    rep.truth_fuel.push_back(rec.plan.fuel);
    rep.network_fuel.push_back(fuel_of(recover_controls(sc, pred), knot_spacing(sc)));

    const int d = sc.dim();
    bool obstacle_hit = false;
    bool agent_hit = false;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      for (const auto& o : sc.obstacles) {
        const double need = sc.obstacle_distance(o);
        for (Eigen::Index k = 0; k < pred[i].cols(); ++k) {
          const double dist = (pred[i].col(k).head(d) - o.center).norm();
          rep.separation.min_obstacle_distance = std::min(rep.separation.min_obstacle_distance, dist);
          obstacle_hit = obstacle_hit || dist < need;
        }
      }
      for (std::size_t j = i + 1; j < pred.size(); ++j) {
        for (Eigen::Index k = 0; k < pred[i].cols(); ++k) {
          const double dist = (pred[i].col(k).head(d) - pred[j].col(k).head(d)).norm();
          rep.separation.min_agent_distance = std::min(rep.separation.min_agent_distance, dist);
          agent_hit = agent_hit || dist < sc.agent_distance();
        }
      }
    }
    rep.separation.obstacle_violations += obstacle_hit ? 1 : 0;
    rep.separation.agent_violations += agent_hit ? 1 : 0;
  }
  rep.rmse_stats = mean_std(rep.rmse);
  rep.truth_fuel_stats = mean_std(rep.truth_fuel);
  rep.network_fuel_stats = mean_std(rep.network_fuel);
  if (records.size() >= 2) {
    try {
      rep.fuel_test = welch_t_test(rep.network_fuel, rep.truth_fuel);
    } catch (const std::invalid_argument&) {
      rep.fuel_test = WelchResult{0.0, 1.0, 0.0};
    }
  }
  return rep;
}

BenchReport benchmark(const ScpParams& params, const Mlp& net, const std::vector<Scenario>& scenarios,
                      const BenchOptions& opts) {
  if (scenarios.size() < 10) throw std::invalid_argument("benchmark: need at least 10 scenarios");
  const auto n = static_cast<Eigen::Index>(scenarios.size());
  Eigen::MatrixXd inputs(net.input_size(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    inputs.col(k) = encode_input(scenarios[static_cast<std::size_t>(k)]);
  }

  BenchReport rep;
  rep.instances = static_cast<int>(n);
  for (int w = 0; w < opts.warmup; ++w) (void)plan(scenarios[static_cast<std::size_t>(w) % scenarios.size()], params);
  std::vector<double> planner;
  for (const auto& sc : scenarios) {
    const auto t0 = Clock::now();
    const PlanResult p = plan(sc, params);
    planner.push_back(seconds_since(t0));
    if (p.status != PlanStatus::Converged) ++rep.planner_failures;
  }

  double sink = 0.0;
  for (int w = 0; w < opts.warmup; ++w) sink += predict_vector(net, inputs.col(w % n))[0];
  std::vector<double> single;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto t0 = Clock::now();
    const Eigen::VectorXd y = predict_vector(net, inputs.col(k));
    single.push_back(seconds_since(t0));
    sink += y[0];
  }

  sink += predict_batch(net, inputs, 1)(0, 0);
  const int repeats = std::max(1, opts.batch_repeats);
  const auto t0 = Clock::now();
  for (int r = 0; r < repeats; ++r) sink += predict_batch(net, inputs, 1)(0, 0);
  const double batch_total = seconds_since(t0);
  if (!std::isfinite(sink)) throw std::runtime_error("benchmark: non-finite network output");

  rep.planner_mean = mean_std(planner).mean;
  rep.planner_median = median(planner);
  rep.network_single_mean = mean_std(single).mean;
  rep.network_single_median = median(single);
  rep.network_batch_mean = batch_total / (static_cast<double>(repeats) * static_cast<double>(n));
  rep.speedup = rep.planner_mean / rep.network_batch_mean;
  rep.speedup_single = rep.planner_mean / rep.network_single_mean;
  return rep;
}

}  // namespace swarmplan
