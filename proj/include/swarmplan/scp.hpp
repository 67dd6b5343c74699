#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "swarmplan/dynamics.hpp"
#include "swarmplan/lp.hpp"

namespace swarmplan {

enum class DynamicsKind { DoubleIntegrator2D, Cwh3D };

std::string_view to_string(DynamicsKind k);
DynamicsKind dynamics_kind_from_string(std::string_view s);

struct Obstacle {
  Eigen::VectorXd center;
  double radius = 0.0;
  bool is_static = true;
};

/// One planning problem: N agents moving from starts to goals in T steps.
struct Scenario {
  DynamicsKind kind = DynamicsKind::DoubleIntegrator2D;
  int horizon = 10;
  double dt = 1.0;
  double u_max = 0.1;
  double agent_radius = 0.1;
  double clearance = 0.1;
  double mean_motion = kDefaultMeanMotion;  // Cwh3D only
  std::vector<Obstacle> obstacles;
  std::vector<AgentState> starts;
  std::vector<AgentState> goals;

  int num_agents() const { return static_cast<int>(starts.size()); }
  int dim() const { return kind == DynamicsKind::DoubleIntegrator2D ? 2 : 3; }
  DiscreteLTI system() const;

  /// Required center-to-center distances.
  double obstacle_distance(const Obstacle& o) const { return agent_radius + o.radius + clearance; }
  double agent_distance() const { return 2.0 * agent_radius + clearance; }

  /// Throws std::invalid_argument when a structural or separation invariant fails.
  void validate() const;
};

enum class PlanStatus { Converged, MaxIterations, Infeasible };

std::string_view to_string(PlanStatus s);

struct PlanResult {
  std::vector<Eigen::MatrixXd> states;    // per agent: state_dim x (T+1)
  std::vector<Eigen::MatrixXd> controls;  // per agent: control_dim x T
  double fuel = 0.0;
  PlanStatus status = PlanStatus::Infeasible;
  int iterations = 0;
  double solve_time = 0.0;  // seconds
  std::vector<double> penalized_objective;  // LP objective per SCP iteration
  double max_slack = 0.0;
  std::string message;
};

struct ScpParams {
  int max_iterations = 20;
  double convergence_tol = 1e-5;  // max knot position change between iterates
  double slack_tol = 1e-9;
  double penalty_factor = 1e4;  // slack weight relative to the fuel scale
  double screen_factor = 3.0;   // inter-agent pairs enter below screen_factor * d_min; inf disables screening
  double verify_tol = 1e-6;
  LpOptions lp;
};

/// Half-space n'p >= offset with unit normal n.
struct HalfSpace {
  Eigen::VectorXd normal;
  double offset = 0.0;

  double margin(const Eigen::VectorXd& p) const { return normal.dot(p) - offset; }
};

/// Supporting half-space of the complement of the ball |p - center| < d_min,
/// taken at the direction of p_ref. Falls back to +x when p_ref == center.
HalfSpace linearize_collision(const Eigen::VectorXd& p_ref, const Eigen::VectorXd& center, double d_min);

/// Minimum-L1-fuel plan via sequential convex programming.
PlanResult plan(const Scenario& scenario, const ScpParams& params = {});

/// sum over agents, steps and axes of |u| * dt.
double fuel_of(const std::vector<Eigen::MatrixXd>& controls, double dt);

struct ViolationReport {
  double max_dynamics_residual = 0.0;
  double max_control_excess = 0.0;  // max(|u| - u_max, 0)
  double min_obstacle_margin = kInf;
  double min_agent_margin = kInf;
  double boundary_error = 0.0;
  bool passes = false;
};

/// Independent feasibility audit of a plan against the true (non-linearized) constraints.
ViolationReport verify_plan(const Scenario& scenario, const PlanResult& plan, double tol);

}  // namespace swarmplan
