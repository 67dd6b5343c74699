#pragma once

#include <Eigen/Dense>

namespace swarmplan {

/// Approximate ISS-altitude circular-orbit mean motion [rad/s].
inline constexpr double kDefaultMeanMotion = 0.00113;

/// Position and velocity of one agent in d dimensions (d = 2 or 3).
struct AgentState {
  Eigen::VectorXd position;
  Eigen::VectorXd velocity;

  int dim() const { return static_cast<int>(position.size()); }

  /// (position, velocity) stacked into one 2d vector.
  Eigen::VectorXd stacked() const;
  static AgentState from_stacked(const Eigen::VectorXd& x);
};

/// Thrust (acceleration) command, one component per spatial axis.
using ControlInput = Eigen::VectorXd;

/// Discrete-time LTI system x(k+1) = A x(k) + B u(k), sampled with step dt.
struct DiscreteLTI {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  double dt = 0.0;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int control_dim() const { return static_cast<int>(B.cols()); }
};

/// Passive relative orbit in the x-y plane: a 2:1 ellipse with radial
/// semi-axis rho and along-track semi-axis 2*rho, centered on the chief.
struct Pro {
  double rho = 0.0;
  double phase = 0.0;
  double mean_motion = kDefaultMeanMotion;

  double period() const;
};

/// Exact zero-order-hold discretization of the d-axis double integrator.
/// Throws std::invalid_argument unless d in {1,2,3} and dt > 0.
DiscreteLTI build_double_integrator(int d, double dt);

/// Exact zero-order-hold discretization of the Clohessy-Wiltshire-Hill
/// equations with mean motion n (state x,y,z,vx,vy,vz; x radial, y along-track).
/// Uses the closed-form transition matrix with cancellation-free forms of
/// 1-cos and theta-sin, so the n -> 0 limit is the 3-axis double integrator.
DiscreteLTI build_cwh(double n, double dt);

/// Continuous-time CWH matrices (A_c, B_c), used for acceleration reporting
/// and by test oracles.
Eigen::MatrixXd cwh_continuous_a(double n);
Eigen::MatrixXd continuous_b(int d);

/// Propagates x0 through the recurrence. `controls` is control_dim x T;
/// returns state_dim x (T+1) with column 0 equal to x0.
Eigen::MatrixXd propagate(const DiscreteLTI& sys, const Eigen::VectorXd& x0,
                          const Eigen::MatrixXd& controls);

/// State on the PRO at its phase: (rho sin p, 2 rho cos p, 0, rho n cos p, -2 rho n sin p, 0).
AgentState pro_state(const Pro& pro);

}  // namespace swarmplan
