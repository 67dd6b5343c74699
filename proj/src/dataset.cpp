#include "swarmplan/dataset.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>

#include "swarmplan/rng.hpp"

namespace swarmplan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct FamilyShape {
  DynamicsKind kind;
  int agents;
  int obstacles;
};

FamilyShape shape_of(Family f) {
  switch (f) {
    case Family::Di2dSingle: return {DynamicsKind::DoubleIntegrator2D, 1, 1};
    case Family::Di2dTen: return {DynamicsKind::DoubleIntegrator2D, 10, 0};
    case Family::Cwh3dSingle: return {DynamicsKind::Cwh3D, 1, 0};
    case Family::Cwh3dTen: return {DynamicsKind::Cwh3D, 10, 0};
  }
  throw std::invalid_argument("unknown family");
}

AgentState at_rest(double x, double y) { return AgentState{Eigen::Vector2d(x, y), Eigen::Vector2d::Zero()}; }

bool separated(const std::vector<AgentState>& placed, const Eigen::VectorXd& p, double dmin) {
  return std::all_of(placed.begin(), placed.end(),
                     [&](const AgentState& s) { return (s.position - p).norm() >= dmin; });
}

Scenario sample_di2d_single(Rng& rng) {
  Scenario sc;
  sc.kind = DynamicsKind::DoubleIntegrator2D;
  sc.horizon = 10;
  sc.dt = 1.0;
  sc.u_max = 0.1;
  sc.agent_radius = 0.1;
  sc.clearance = 0.1;
  sc.starts = {at_rest(0.0, 0.0)};
  sc.goals = {at_rest(1.0, 1.0)};
  for (int attempt = 0; attempt < kMaxSamplingAttempts; ++attempt) {
    Obstacle o{Eigen::Vector2d(rng.uniform(), rng.uniform()), 0.1, true};
    const double need = sc.obstacle_distance(o);
    if ((o.center - sc.starts[0].position).norm() >= need && (o.center - sc.goals[0].position).norm() >= need) {
      sc.obstacles = {o};
      return sc;
    }
  }
  throw SamplingError("di2d-1: obstacle rejection sampling exceeded attempt limit");
}

Scenario sample_di2d_ten(Rng& rng, SlotAssignment slots) {
  Scenario sc;
  sc.kind = DynamicsKind::DoubleIntegrator2D;
  sc.horizon = 10;
  sc.dt = 1.0;
  sc.u_max = 0.1;
  sc.agent_radius = 0.05;
  sc.clearance = 0.05;
  const double dmin = sc.agent_distance();
  int attempts = 0;
  while (sc.starts.size() < 10) {
    if (++attempts > kMaxSamplingAttempts) throw SamplingError("di2d-10: start rejection sampling exceeded attempt limit");
    const Eigen::Vector2d p(rng.uniform(), rng.uniform());
    if (separated(sc.starts, p, dmin)) sc.starts.push_back(at_rest(p.x(), p.y()));
  }
  std::vector<Eigen::Vector2d> slot(10);
  for (int k = 0; k < 10; ++k) {
    const double th = kTwoPi * k / 10.0;
    slot[static_cast<std::size_t>(k)] = Eigen::Vector2d(0.5 + 0.6 * std::cos(th), 0.5 + 0.6 * std::sin(th));
  }
  if (slots == SlotAssignment::Indexed) {
    for (const auto& g : slot) sc.goals.push_back(at_rest(g.x(), g.y()));
  } else {
    std::vector<bool> used(10, false);
    for (const auto& s : sc.starts) {
      std::size_t best = 0;
      double best_d = kInf;
      for (std::size_t k = 0; k < 10; ++k) {
        const double d = (slot[k] - s.position).norm();
        if (!used[k] && d < best_d) {
          best = k;
          best_d = d;
        }
      }
      used[best] = true;
      sc.goals.push_back(at_rest(slot[best].x(), slot[best].y()));
    }
  }
  return sc;
}

Scenario sample_cwh(Rng& rng, int agents, const FamilyOptions& opts) {
  Scenario sc;
  sc.kind = DynamicsKind::Cwh3D;
  sc.horizon = 100;
  sc.mean_motion = opts.mean_motion;
  sc.dt = kTwoPi / (opts.mean_motion * sc.horizon);
  sc.u_max = 10.0;
  sc.agent_radius = 5.0;
  sc.clearance = 5.0;
  const double axis_to_rho = opts.semi_axis == SemiAxis::AlongTrack ? 0.5 : 1.0;
  const double dmin = sc.agent_distance();
  int attempts = 0;
  for (auto* set : {&sc.starts, &sc.goals}) {
    while (static_cast<int>(set->size()) < agents) {
      if (++attempts > kMaxSamplingAttempts) throw SamplingError("cwh3d: PRO rejection sampling exceeded attempt limit");
      const double rho = axis_to_rho * rng.uniform(25.0, 75.0);
      const double phase = rng.uniform(0.0, kTwoPi);
      AgentState s = pro_state(Pro{rho, phase, opts.mean_motion});
      if (separated(*set, s.position, dmin)) set->push_back(std::move(s));
    }
  }
  return sc;
}

// Acceleration at knot t (t >= 1) under the control held over the preceding step.
Eigen::VectorXd knot_acceleration(const Scenario& sc, const Eigen::VectorXd& x, const Eigen::VectorXd& u_prev) {
  const int d = sc.dim();
  if (sc.kind == DynamicsKind::DoubleIntegrator2D) return u_prev;
  const Eigen::VectorXd xdot = cwh_continuous_a(sc.mean_motion) * x + continuous_b(d) * u_prev;
  return xdot.tail(d);
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Di2dSingle: return "di2d-1";
    case Family::Di2dTen: return "di2d-10";
    case Family::Cwh3dSingle: return "cwh3d-1";
    case Family::Cwh3dTen: return "cwh3d-10";
  }
  return "unknown";
}

Family family_from_string(std::string_view s) {
  for (Family f : {Family::Di2dSingle, Family::Di2dTen, Family::Cwh3dSingle, Family::Cwh3dTen}) {
    if (s == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown family '" + std::string(s) + "' (expected di2d-1, di2d-10, cwh3d-1, cwh3d-10)");
}

int agents_in(Family f) { return shape_of(f).agents; }
int dim_of(Family f) { return shape_of(f).kind == DynamicsKind::DoubleIntegrator2D ? 2 : 3; }

int input_size(Family f) {
  const auto s = shape_of(f);
  const int d = dim_of(f);
  return s.agents * 6 * d + s.obstacles * (d + 1);
}

int target_size(Family f, const FamilyOptions& opts) {
  const int d = dim_of(f);
  return agents_in(f) * kTargetKnots * (opts.include_acceleration ? 3 : 2) * d;
}

Family family_of(const Scenario& sc) {
  for (Family f : {Family::Di2dSingle, Family::Di2dTen, Family::Cwh3dSingle, Family::Cwh3dTen}) {
    const auto s = shape_of(f);
    if (s.kind == sc.kind && s.agents == sc.num_agents() && s.obstacles == static_cast<int>(sc.obstacles.size())) {
      return f;
    }
  }
  throw std::invalid_argument("scenario does not match any supported family");
}

Scenario sample_scenario(Family f, std::uint64_t seed, const FamilyOptions& opts) {
  Rng rng(seed);
  switch (f) {
    case Family::Di2dSingle: return sample_di2d_single(rng);
    case Family::Di2dTen: return sample_di2d_ten(rng, opts.slots);
    case Family::Cwh3dSingle: return sample_cwh(rng, 1, opts);
    case Family::Cwh3dTen: return sample_cwh(rng, 10, opts);
  }
  throw std::invalid_argument("unknown family");
}

Eigen::VectorXd encode_input(const Scenario& sc) {
  const Family f = family_of(sc);
  const int d = sc.dim();
  Eigen::VectorXd v(input_size(f));
  Eigen::Index k = 0;
  for (int i = 0; i < sc.num_agents(); ++i) {
    for (const AgentState* s : {&sc.starts[static_cast<std::size_t>(i)], &sc.goals[static_cast<std::size_t>(i)]}) {
      v.segment(k, d) = s->position;
      v.segment(k + d, d) = s->velocity;
      v.segment(k + 2 * d, d).setZero();
      k += 3 * d;
    }
  }
  for (const auto& o : sc.obstacles) {
    v.segment(k, d) = o.center;
    v[k + d] = o.radius;
    k += d + 1;
  }
  return v;
}

std::vector<int> target_knots(int horizon) {
  if (horizon % kTargetKnots != 0) {
    throw std::invalid_argument("target_knots: horizon must be a multiple of 10");
  }
  const int stride = horizon / kTargetKnots;
  std::vector<int> t(kTargetKnots);
  for (int k = 0; k < kTargetKnots; ++k) t[static_cast<std::size_t>(k)] = stride * (k + 1);
  return t;
}

Eigen::VectorXd encode_target(const Scenario& sc, const PlanResult& plan, const FamilyOptions& opts) {
  if (plan.status != PlanStatus::Converged) throw std::invalid_argument("encode_target: plan is not converged");
  const Family f = family_of(sc);
  const int d = sc.dim();
  const int per_knot = (opts.include_acceleration ? 3 : 2) * d;
  const auto knots = target_knots(sc.horizon);
  if (static_cast<int>(plan.states.size()) != sc.num_agents()) throw std::invalid_argument("encode_target: agent count");
  Eigen::VectorXd v(target_size(f, opts));
  Eigen::Index k = 0;
  for (int i = 0; i < sc.num_agents(); ++i) {
    const auto& X = plan.states[static_cast<std::size_t>(i)];
    const auto& U = plan.controls[static_cast<std::size_t>(i)];
    for (int t : knots) {
      v.segment(k, 2 * d) = X.col(t);
      if (opts.include_acceleration) v.segment(k + 2 * d, d) = knot_acceleration(sc, X.col(t), U.col(t - 1));
      k += per_knot;
    }
  }
  return v;
}

std::vector<Eigen::MatrixXd> decode_target(const Eigen::VectorXd& target, Family f, const FamilyOptions& opts) {
  if (target.size() != target_size(f, opts)) throw std::invalid_argument("decode_target: length mismatch");
  const int d = dim_of(f);
  const int per_knot = (opts.include_acceleration ? 3 : 2) * d;
  std::vector<Eigen::MatrixXd> out;
  Eigen::Index k = 0;
  for (int i = 0; i < agents_in(f); ++i) {
    Eigen::MatrixXd X(2 * d, kTargetKnots);
    for (int t = 0; t < kTargetKnots; ++t) {
      X.col(t) = target.segment(k, 2 * d);
      k += per_knot;
    }
    out.push_back(std::move(X));
  }
  return out;
}

std::vector<DatasetRecord> generate(Family f, int count, std::uint64_t seed, const ScpParams& params,
                                    const FamilyOptions& opts, int jobs, GenerateSummary* summary) {
  if (count < 1) throw std::invalid_argument("generate: count must be >= 1");
  constexpr int kBlock = 64;
  constexpr int kWindow = 100;

  struct Slot {
    std::optional<DatasetRecord> record;
    std::vector<bool> outcomes;  // one per attempt, true = converged
  };
  std::vector<Slot> slots(static_cast<std::size_t>(count));
  std::deque<bool> window;
  int window_failures = 0;
  double plan_seconds = 0.0;

  auto run_one = [&](int k) {
    Slot& slot = slots[static_cast<std::size_t>(k)];
    const std::uint64_t base = seed + static_cast<std::uint64_t>(k);
    for (int attempt = 0; attempt < kWindow; ++attempt) {
      const std::uint64_t s = attempt == 0 ? base : mix_seed(base, static_cast<std::uint64_t>(attempt));
      Scenario sc = sample_scenario(f, s, opts);
      PlanResult p = plan(sc, params);
      const bool ok = p.status == PlanStatus::Converged;
      slot.outcomes.push_back(ok);
      if (ok) {
        DatasetRecord r;
        r.family = f;
        r.seed = s;
        r.input = encode_input(sc);
        r.target = encode_target(sc, p, opts);
        r.scenario = std::move(sc);
        r.plan = std::move(p);
        slot.record = std::move(r);
        return;
      }
    }
  };

  for (int begin = 0; begin < count; begin += kBlock) {
    const int end = std::min(count, begin + kBlock);
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs)) if (jobs > 1)
    for (int k = begin; k < end; ++k) run_one(k);

    // The abort rule sees attempts in (record, attempt) order regardless of jobs.
    for (int k = begin; k < end; ++k) {
      const Slot& slot = slots[static_cast<std::size_t>(k)];
      plan_seconds += slot.record ? slot.record->plan.solve_time : 0.0;
      for (bool ok : slot.outcomes) {
        window.push_back(ok);
        window_failures += ok ? 0 : 1;
        if (static_cast<int>(window.size()) > kWindow) {
          window_failures -= window.front() ? 0 : 1;
          window.pop_front();
        }
        if (static_cast<int>(window.size()) == kWindow && window_failures > kWindow / 2) {
          std::ostringstream msg;
          msg << to_string(f) << ": planner failed on " << window_failures << " of the last " << kWindow
              << " instances (record " << k << ")";
          throw GenerationError(msg.str());
        }
      }
      if (!slot.record) {
        throw GenerationError("record " + std::to_string(k) + " did not converge in " + std::to_string(kWindow) +
                              " attempts");
      }
    }
  }

  std::vector<DatasetRecord> out;
  out.reserve(static_cast<std::size_t>(count));
  int rejections = 0;
  for (auto& slot : slots) {
    rejections += static_cast<int>(slot.outcomes.size()) - 1;
    out.push_back(std::move(*slot.record));
  }
  if (summary) {
    summary->rejections = rejections;
    double mean = 0.0;
    for (const auto& r : out) mean += r.plan.fuel;
    mean /= static_cast<double>(out.size());
    double var = 0.0;
    for (const auto& r : out) var += (r.plan.fuel - mean) * (r.plan.fuel - mean);
    summary->fuel_mean = mean;
    summary->fuel_std = out.size() > 1 ? std::sqrt(var / static_cast<double>(out.size() - 1)) : 0.0;
    summary->plan_seconds = plan_seconds;
  }
  return out;
}

void SplitSpec::validate() const {
  if (train < 0.0 || val < 0.0 || test < 0.0 || std::abs(train + val + test - 1.0) > 1e-12) {
    throw std::invalid_argument("SplitSpec: fractions must be nonnegative and sum to 1");
  }
}

SplitIndices split(std::size_t n, const SplitSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw std::invalid_argument("split: empty input");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.below(i + 1)]);
  const auto nval = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.val + 1e-9));
  const auto ntest = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.test + 1e-9));
  SplitIndices out;
  const std::size_t ntrain = n - nval - ntest;
  out.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(ntrain));
  out.val.assign(idx.begin() + static_cast<std::ptrdiff_t>(ntrain),
                 idx.begin() + static_cast<std::ptrdiff_t>(ntrain + nval));
  out.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(ntrain + nval), idx.end());
  return out;
}

}  // namespace swarmplan
