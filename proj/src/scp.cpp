#include "swarmplan/scp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace swarmplan {

std::string_view to_string(DynamicsKind k) {
  return k == DynamicsKind::DoubleIntegrator2D ? "double_integrator_2d" : "cwh_3d";
}

DynamicsKind dynamics_kind_from_string(std::string_view s) {
  if (s == "double_integrator_2d") return DynamicsKind::DoubleIntegrator2D;
  if (s == "cwh_3d") return DynamicsKind::Cwh3D;
  throw std::invalid_argument("unknown dynamics kind: " + std::string(s));
}

std::string_view to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::Converged: return "converged";
    case PlanStatus::MaxIterations: return "max_iterations";
    case PlanStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

DiscreteLTI Scenario::system() const {
  return kind == DynamicsKind::DoubleIntegrator2D ? build_double_integrator(2, dt) : build_cwh(mean_motion, dt);
}

void Scenario::validate() const {
  const int d = dim();
  if (starts.empty()) throw std::invalid_argument("Scenario: at least one agent required");
  if (goals.size() != starts.size()) throw std::invalid_argument("Scenario: starts/goals length mismatch");
  if (horizon < 1) throw std::invalid_argument("Scenario: horizon must be >= 1");
  if (!(dt > 0.0) || !(u_max > 0.0)) throw std::invalid_argument("Scenario: dt and u_max must be positive");
  if (agent_radius < 0.0 || clearance < 0.0) throw std::invalid_argument("Scenario: negative radius or clearance");
  if (kind == DynamicsKind::Cwh3D && !(mean_motion > 0.0)) {
    throw std::invalid_argument("Scenario: mean motion must be positive");
  }
  auto check_state = [d](const AgentState& s) {
    if (s.position.size() != d || s.velocity.size() != d || !s.position.allFinite() || !s.velocity.allFinite()) {
      throw std::invalid_argument("Scenario: agent state dimension or finiteness violated");
    }
  };
  for (const auto& s : starts) check_state(s);
  for (const auto& s : goals) check_state(s);
  for (const auto& o : obstacles) {
    if (o.center.size() != d || !(o.radius > 0.0)) throw std::invalid_argument("Scenario: bad obstacle");
  }
  const double dmin = agent_distance();
  for (const auto* set : {&starts, &goals}) {
    for (std::size_t i = 0; i < set->size(); ++i) {
      for (std::size_t j = i + 1; j < set->size(); ++j) {
        if (((*set)[i].position - (*set)[j].position).norm() < dmin) {
          throw std::invalid_argument("Scenario: agents closer than the required separation");
        }
      }
      for (const auto& o : obstacles) {
        if (((*set)[i].position - o.center).norm() < obstacle_distance(o)) {
          throw std::invalid_argument("Scenario: start or goal inside an obstacle margin");
        }
      }
    }
  }
}

HalfSpace linearize_collision(const Eigen::VectorXd& p_ref, const Eigen::VectorXd& center, double d_min) {
  if (!(d_min > 0.0)) throw std::invalid_argument("linearize_collision: d_min must be positive");
  if (p_ref.size() != center.size()) throw std::invalid_argument("linearize_collision: dimension mismatch");
  HalfSpace h;
  const Eigen::VectorXd diff = p_ref - center;
  const double len = diff.norm();
  if (len > 0.0) {
    h.normal = diff / len;
  } else {
    h.normal = Eigen::VectorXd::Zero(p_ref.size());
    h.normal[0] = 1.0;
  }
  h.offset = d_min + h.normal.dot(center);
  return h;
}

double fuel_of(const std::vector<Eigen::MatrixXd>& controls, double dt) {
  double f = 0.0;
  for (const auto& u : controls) f += u.cwiseAbs().sum();
  return f * dt;
}

namespace {

// Variable layout of one SCP subproblem.
//   states  x_i(t), t = 1..T-1 (free; x(0) and x(T) are the fixed boundary states)
//   p_i(t), q_i(t) in [0, u_max], u = p - q, t = 0..T-1
//   one nonnegative slack per active collision half-space
struct Layout {
  int agents, d, nx, T;

  int state_vars() const { return agents * (T - 1) * nx; }
  int control_vars() const { return agents * T * 2 * d; }
  int base_vars() const { return state_vars() + control_vars(); }
  int state(int i, int t, int c) const { return (i * (T - 1) + (t - 1)) * nx + c; }
  int plus(int i, int t, int a) const { return state_vars() + i * 2 * T * d + t * d + a; }
  int minus(int i, int t, int a) const { return plus(i, t, a) + T * d; }
};

// Obstacle constraints use j = -1 - obstacle index.
using ConstraintKey = std::tuple<int, int, int>;  // (agent i, other j, knot t)

struct Subproblem {
  LinearProgram lp;
  std::vector<ConstraintKey> keys;
};

SparseMatrix dynamics_rows(const Scenario& sc, const DiscreteLTI& sys, const Layout& L, Eigen::VectorXd& rhs,
                           int total_vars) {
  std::vector<Eigen::Triplet<double>> trip;
  const int rows = L.agents * L.T * L.nx;
  rhs = Eigen::VectorXd::Zero(rows);
  for (int i = 0; i < L.agents; ++i) {
    const Eigen::VectorXd x0 = sc.starts[static_cast<std::size_t>(i)].stacked();
    const Eigen::VectorXd xT = sc.goals[static_cast<std::size_t>(i)].stacked();
    const Eigen::VectorXd ax0 = sys.A * x0;
    for (int t = 0; t < L.T; ++t) {
      for (int r = 0; r < L.nx; ++r) {
        const int row = (i * L.T + t) * L.nx + r;
        // x(t+1) - A x(t) - B (p - q) = 0
        if (t + 1 < L.T) trip.emplace_back(row, L.state(i, t + 1, r), 1.0);
        else rhs[row] -= xT[r];
        if (t > 0) {
          for (int c = 0; c < L.nx; ++c) {
            if (sys.A(r, c) != 0.0) trip.emplace_back(row, L.state(i, t, c), -sys.A(r, c));
          }
        } else {
          rhs[row] += ax0[r];
        }
        for (int a = 0; a < L.d; ++a) {
          if (sys.B(r, a) != 0.0) {
            trip.emplace_back(row, L.plus(i, t, a), -sys.B(r, a));
            trip.emplace_back(row, L.minus(i, t, a), sys.B(r, a));
          }
        }
      }
    }
  }
  SparseMatrix m(rows, total_vars);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

double fuel_scale(const Scenario& sc) {
  double s = 0.0;
  const double span = sc.horizon * sc.dt;
  for (int i = 0; i < sc.num_agents(); ++i) {
    const auto& a = sc.starts[static_cast<std::size_t>(i)];
    const auto& b = sc.goals[static_cast<std::size_t>(i)];
    s += (b.position - a.position).lpNorm<1>() / span + (b.velocity - a.velocity).lpNorm<1>();
  }
  return std::max(s, 1e-3 * sc.u_max * sc.dt);
}

// Minimum-norm control correction that zeroes the terminal error of the
// propagated trajectory, removing the LP's equality residual.
Eigen::MatrixXd polish_terminal(const DiscreteLTI& sys, const Eigen::VectorXd& x0, const Eigen::VectorXd& xT,
                                Eigen::MatrixXd u) {
  const int T = static_cast<int>(u.cols());
  const int nu = sys.control_dim();
  Eigen::MatrixXd G(sys.state_dim(), T * nu);
  Eigen::MatrixXd Ak = Eigen::MatrixXd::Identity(sys.state_dim(), sys.state_dim());
  for (int t = T - 1; t >= 0; --t) {
    G.middleCols(t * nu, nu) = Ak * sys.B;
    Ak = Ak * sys.A;
  }
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::MatrixXd X = propagate(sys, x0, u);
    const Eigen::VectorXd err = xT - X.col(T);
    if (err.lpNorm<Eigen::Infinity>() == 0.0) break;
    const Eigen::VectorXd w = (G * G.transpose()).ldlt().solve(err);
    const Eigen::VectorXd du = G.transpose() * w;
    u += Eigen::Map<const Eigen::MatrixXd>(du.data(), nu, T);
  }
  return u;
}

}  // namespace

PlanResult plan(const Scenario& sc, const ScpParams& params) {
  const auto t_begin = std::chrono::steady_clock::now();
  sc.validate();
  const DiscreteLTI sys = sc.system();
  const Layout L{sc.num_agents(), sc.dim(), 2 * sc.dim(), sc.horizon};
  const double weight = params.penalty_factor * fuel_scale(sc);
  const double d_agent = sc.agent_distance();

  PlanResult res;

  // Straight-line initial guess in state space.
  std::vector<Eigen::MatrixXd> ref(static_cast<std::size_t>(L.agents));
  for (int i = 0; i < L.agents; ++i) {
    const Eigen::VectorXd a = sc.starts[static_cast<std::size_t>(i)].position;
    const Eigen::VectorXd b = sc.goals[static_cast<std::size_t>(i)].position;
    auto& r = ref[static_cast<std::size_t>(i)];
    r.resize(L.d, L.T + 1);
    for (int t = 0; t <= L.T; ++t) r.col(t) = a + (b - a) * (static_cast<double>(t) / L.T);
  }

  std::set<ConstraintKey> sticky_pairs;
  auto collect_pairs = [&](const std::vector<Eigen::MatrixXd>& pos) {
    for (int i = 0; i < L.agents; ++i) {
      for (int j = i + 1; j < L.agents; ++j) {
        for (int t = 1; t < L.T; ++t) {
          const double dist = (pos[static_cast<std::size_t>(i)].col(t) - pos[static_cast<std::size_t>(j)].col(t)).norm();
          if (!(dist >= params.screen_factor * d_agent)) sticky_pairs.emplace(i, j, t);
        }
      }
    }
  };
  collect_pairs(ref);

  Eigen::VectorXd dyn_rhs;
  Eigen::MatrixXd last_controls;
  std::vector<Eigen::MatrixXd> controls(static_cast<std::size_t>(L.agents));
  bool converged = false;

  for (int iter = 1; iter <= params.max_iterations; ++iter) {
    res.iterations = iter;
    std::vector<ConstraintKey> keys;
    for (int i = 0; i < L.agents; ++i) {
      for (int o = 0; o < static_cast<int>(sc.obstacles.size()); ++o) {
        for (int t = 1; t < L.T; ++t) keys.emplace_back(i, -1 - o, t);
      }
    }
    keys.insert(keys.end(), sticky_pairs.begin(), sticky_pairs.end());
    const int nslack = static_cast<int>(keys.size());
    const int nvars = L.base_vars() + nslack;

    LinearProgram lp = LinearProgram::with_vars(nvars);
    for (int i = 0; i < L.agents; ++i) {
      for (int t = 0; t < L.T; ++t) {
        for (int a = 0; a < L.d; ++a) {
          for (int idx : {L.plus(i, t, a), L.minus(i, t, a)}) {
            lp.objective[idx] = sc.dt;
            lp.lower[idx] = 0.0;
            lp.upper[idx] = sc.u_max;
          }
        }
      }
    }
    for (int k = 0; k < nslack; ++k) {
      lp.objective[L.base_vars() + k] = weight;
      lp.lower[L.base_vars() + k] = 0.0;
    }
    lp.eq_matrix = dynamics_rows(sc, sys, L, dyn_rhs, nvars);
    lp.eq_rhs = dyn_rhs;

    std::vector<Eigen::Triplet<double>> trip;
    lp.ineq_rhs.resize(nslack);
    for (int k = 0; k < nslack; ++k) {
      const auto [i, j, t] = keys[static_cast<std::size_t>(k)];
      const Eigen::VectorXd pi = ref[static_cast<std::size_t>(i)].col(t);
      HalfSpace h;
      if (j < 0) {
        const Obstacle& o = sc.obstacles[static_cast<std::size_t>(-1 - j)];
        h = linearize_collision(pi, o.center, sc.obstacle_distance(o));
      } else {
        h = linearize_collision(pi - ref[static_cast<std::size_t>(j)].col(t), Eigen::VectorXd::Zero(L.d), d_agent);
      }
      // -n'p_i (+ n'p_j) - s <= -offset
      for (int a = 0; a < L.d; ++a) {
        trip.emplace_back(k, L.state(i, t, a), -h.normal[a]);
        if (j >= 0) trip.emplace_back(k, L.state(j, t, a), h.normal[a]);
      }
      trip.emplace_back(k, L.base_vars() + k, -1.0);
      lp.ineq_rhs[k] = -h.offset;
    }
    lp.ineq_matrix.resize(nslack, nvars);
    lp.ineq_matrix.setFromTriplets(trip.begin(), trip.end());

    const LpSolution sol = solve_lp(lp, params.lp);
    if (sol.status != LpStatus::Optimal) {
      res.status = PlanStatus::Infeasible;
      std::ostringstream msg;
      msg << "SCP iteration " << iter << ": LP " << to_string(sol.status)
          << " (primal residual " << sol.primal_residual << ")";
      res.message = msg.str();
      res.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
      return res;
    }
    res.penalized_objective.push_back(sol.objective);
    res.max_slack = nslack > 0 ? sol.x.tail(nslack).maxCoeff() : 0.0;

    double change = 0.0;
    std::vector<Eigen::MatrixXd> next = ref;
    for (int i = 0; i < L.agents; ++i) {
      auto& u = controls[static_cast<std::size_t>(i)];
      u.resize(L.d, L.T);
      for (int t = 0; t < L.T; ++t) {
        for (int a = 0; a < L.d; ++a) u(a, t) = sol.x[L.plus(i, t, a)] - sol.x[L.minus(i, t, a)];
      }
      auto& p = next[static_cast<std::size_t>(i)];
      for (int t = 1; t < L.T; ++t) {
        for (int a = 0; a < L.d; ++a) p(a, t) = sol.x[L.state(i, t, a)];
      }
      change = std::max(change, (p - ref[static_cast<std::size_t>(i)]).lpNorm<Eigen::Infinity>());
    }
    ref = std::move(next);

    // A relaxation with no active collision constraints is exact when its
    // solution is already collision-free.
    const bool candidate = (nslack == 0) || (change < params.convergence_tol && res.max_slack < params.slack_tol);
    if (candidate) {
      PlanResult trial;
      for (int i = 0; i < L.agents; ++i) {
        const auto& s0 = sc.starts[static_cast<std::size_t>(i)];
        const auto& sT = sc.goals[static_cast<std::size_t>(i)];
        trial.controls.push_back(polish_terminal(sys, s0.stacked(), sT.stacked(), controls[static_cast<std::size_t>(i)]));
        trial.states.push_back(propagate(sys, s0.stacked(), trial.controls.back()));
      }
      if (verify_plan(sc, trial, params.verify_tol).passes) {
        res.states = std::move(trial.states);
        res.controls = std::move(trial.controls);
        converged = true;
        break;
      }
    }
    collect_pairs(ref);
  }

  if (!converged) {
    res.states.clear();
    res.controls.clear();
    for (int i = 0; i < L.agents; ++i) {
      const auto& s0 = sc.starts[static_cast<std::size_t>(i)];
      const auto& sT = sc.goals[static_cast<std::size_t>(i)];
      res.controls.push_back(polish_terminal(sys, s0.stacked(), sT.stacked(), controls[static_cast<std::size_t>(i)]));
      res.states.push_back(propagate(sys, s0.stacked(), res.controls.back()));
    }
  }
  res.status = converged ? PlanStatus::Converged : PlanStatus::MaxIterations;
  res.fuel = fuel_of(res.controls, sc.dt);
  res.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return res;
}

ViolationReport verify_plan(const Scenario& sc, const PlanResult& p, double tol) {
  ViolationReport rep;
  const int N = sc.num_agents();
  const int d = sc.dim();
  const int T = sc.horizon;
  const DiscreteLTI sys = sc.system();
  bool shape_ok = static_cast<int>(p.states.size()) == N && static_cast<int>(p.controls.size()) == N;
  for (int i = 0; shape_ok && i < N; ++i) {
    const auto& X = p.states[static_cast<std::size_t>(i)];
    const auto& U = p.controls[static_cast<std::size_t>(i)];
    shape_ok = X.rows() == 2 * d && X.cols() == T + 1 && U.rows() == d && U.cols() == T;
  }
  if (!shape_ok) {
    rep.max_dynamics_residual = kInf;
    rep.passes = false;
    return rep;
  }
  for (int i = 0; i < N; ++i) {
    const auto& X = p.states[static_cast<std::size_t>(i)];
    const auto& U = p.controls[static_cast<std::size_t>(i)];
    for (int t = 0; t < T; ++t) {
      const Eigen::VectorXd r = X.col(t + 1) - sys.A * X.col(t) - sys.B * U.col(t);
      rep.max_dynamics_residual = std::max(rep.max_dynamics_residual, r.lpNorm<Eigen::Infinity>());
    }
    rep.max_control_excess = std::max(rep.max_control_excess, U.cwiseAbs().maxCoeff() - sc.u_max);
    rep.boundary_error = std::max({rep.boundary_error,
                                   (X.col(0) - sc.starts[static_cast<std::size_t>(i)].stacked()).lpNorm<Eigen::Infinity>(),
                                   (X.col(T) - sc.goals[static_cast<std::size_t>(i)].stacked()).lpNorm<Eigen::Infinity>()});
    for (const auto& o : sc.obstacles) {
      for (int t = 0; t <= T; ++t) {
        const double m = (X.col(t).head(d) - o.center).norm() - sc.obstacle_distance(o);
        rep.min_obstacle_margin = std::min(rep.min_obstacle_margin, m);
      }
    }
    for (int j = i + 1; j < N; ++j) {
      const auto& Y = p.states[static_cast<std::size_t>(j)];
      for (int t = 0; t <= T; ++t) {
        const double m = (X.col(t).head(d) - Y.col(t).head(d)).norm() - sc.agent_distance();
        rep.min_agent_margin = std::min(rep.min_agent_margin, m);
      }
    }
  }
  rep.max_control_excess = std::max(rep.max_control_excess, 0.0);
  rep.passes = rep.max_dynamics_residual <= tol && rep.max_control_excess <= tol && rep.boundary_error <= tol &&
               rep.min_obstacle_margin >= -tol && rep.min_agent_margin >= -tol;
  return rep;
}

}  // namespace swarmplan
