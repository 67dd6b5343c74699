#include "swarmplan/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace swarmplan {

namespace {

// 1 - cos(t), without cancellation near 0.
double one_minus_cos(double t) {
  const double h = std::sin(0.5 * t);
  return 2.0 * h * h;
}

// t - sin(t); Taylor series for small |t| where the direct form cancels.
double t_minus_sin(double t) {
  if (std::abs(t) > 0.1) return t - std::sin(t);
  const double t2 = t * t;
  double term = t * t2 / 6.0;
  double sum = 0.0;
  for (int k = 1; k <= 8; ++k) {
    sum += term;
    term *= -t2 / static_cast<double>((2 * k + 2) * (2 * k + 3));
  }
  return sum;
}

}  // namespace

Eigen::VectorXd AgentState::stacked() const {
  if (position.size() != velocity.size()) {
    throw std::invalid_argument("AgentState: position/velocity dimension mismatch");
  }
  Eigen::VectorXd x(2 * position.size());
  x << position, velocity;
  return x;
}

AgentState AgentState::from_stacked(const Eigen::VectorXd& x) {
  if (x.size() % 2 != 0) throw std::invalid_argument("AgentState: odd stacked length");
  const Eigen::Index d = x.size() / 2;
  return AgentState{x.head(d), x.tail(d)};
}

double Pro::period() const { return 2.0 * std::numbers::pi / mean_motion; }

DiscreteLTI build_double_integrator(int d, double dt) {
  if (d < 1 || d > 3) throw std::invalid_argument("double integrator: d must be 1, 2 or 3");
  if (!(dt > 0.0)) throw std::invalid_argument("double integrator: dt must be positive");
  DiscreteLTI sys;
  sys.dt = dt;
  sys.A = Eigen::MatrixXd::Identity(2 * d, 2 * d);
  sys.A.topRightCorner(d, d) = dt * Eigen::MatrixXd::Identity(d, d);
  sys.B = Eigen::MatrixXd::Zero(2 * d, d);
  sys.B.topRows(d) = 0.5 * dt * dt * Eigen::MatrixXd::Identity(d, d);
  sys.B.bottomRows(d) = dt * Eigen::MatrixXd::Identity(d, d);
  return sys;
}

DiscreteLTI build_cwh(double n, double dt) {
  if (!(n > 0.0)) throw std::invalid_argument("cwh: mean motion must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("cwh: dt must be positive");

  const double th = n * dt;
  const double s = std::sin(th);
  const double c = std::cos(th);
  const double omc = one_minus_cos(th);
  const double tms = t_minus_sin(th);
  // th - sin(th) and 1 - cos(th) divided by n (resp. n^2) stay finite as n -> 0.
  const double s_n = s / n;
  const double omc_n = omc / n;
  const double omc_n2 = omc / (n * n);
  const double tms_n = tms / n;
  const double tms_n2 = tms / (n * n);

  DiscreteLTI sys;
  sys.dt = dt;
  Eigen::MatrixXd& A = sys.A;
  A = Eigen::MatrixXd::Zero(6, 6);
  // x
  A(0, 0) = 1.0 + 3.0 * omc;
  A(0, 3) = s_n;
  A(0, 4) = 2.0 * omc_n;
  // y
  A(1, 0) = -6.0 * tms;
  A(1, 1) = 1.0;
  A(1, 3) = -2.0 * omc_n;
  A(1, 4) = dt - 4.0 * tms_n;  // (4 sin - 3 th) / n
  // z
  A(2, 2) = c;
  A(2, 5) = s_n;
  // vx
  A(3, 0) = 3.0 * n * s;
  A(3, 3) = c;
  A(3, 4) = 2.0 * s;
  // vy
  A(4, 0) = -6.0 * n * omc;
  A(4, 3) = -2.0 * s;
  A(4, 4) = 1.0 - 4.0 * omc;  // 4 cos - 3
  // vz
  A(5, 2) = -n * s;
  A(5, 5) = c;

  // B = (integral of Phi(tau) over [0, dt]) * [0; I].
  Eigen::MatrixXd& B = sys.B;
  B = Eigen::MatrixXd::Zero(6, 3);
  B(0, 0) = omc_n2;
  B(0, 1) = 2.0 * tms_n2;
  B(1, 0) = -2.0 * tms_n2;
  B(1, 1) = 4.0 * omc_n2 - 1.5 * dt * dt;
  B(2, 2) = omc_n2;
  B(3, 0) = s_n;
  B(3, 1) = 2.0 * omc_n;
  B(4, 0) = -2.0 * omc_n;
  B(4, 1) = dt - 4.0 * tms_n;  // 4 sin/n - 3 dt
  B(5, 2) = s_n;
  return sys;
}

Eigen::MatrixXd cwh_continuous_a(double n) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(6, 6);
  A(0, 3) = 1.0;
  A(1, 4) = 1.0;
  A(2, 5) = 1.0;
  A(3, 0) = 3.0 * n * n;
  A(3, 4) = 2.0 * n;
  A(4, 3) = -2.0 * n;
  A(5, 2) = -n * n;
  return A;
}

Eigen::MatrixXd continuous_b(int d) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * d, d);
  B.bottomRows(d).setIdentity();
  return B;
}

Eigen::MatrixXd propagate(const DiscreteLTI& sys, const Eigen::VectorXd& x0,
                          const Eigen::MatrixXd& controls) {
  if (x0.size() != sys.state_dim()) {
    throw std::invalid_argument("propagate: x0 has length " + std::to_string(x0.size()) +
                                ", expected " + std::to_string(sys.state_dim()));
  }
  if (controls.rows() != sys.control_dim()) {
    throw std::invalid_argument("propagate: control dimension mismatch");
  }
  const Eigen::Index steps = controls.cols();
  Eigen::MatrixXd states(sys.state_dim(), steps + 1);
  states.col(0) = x0;
  for (Eigen::Index t = 0; t < steps; ++t) {
    states.col(t + 1) = sys.A * states.col(t) + sys.B * controls.col(t);
  }
  return states;
}

AgentState pro_state(const Pro& pro) {
  if (!(pro.rho > 0.0) || !(pro.mean_motion > 0.0)) {
    throw std::invalid_argument("pro_state: rho and mean motion must be positive");
  }
  const double s = std::sin(pro.phase);
  const double c = std::cos(pro.phase);
  const double n = pro.mean_motion;
  AgentState st;
  st.position = Eigen::Vector3d(pro.rho * s, 2.0 * pro.rho * c, 0.0);
  // vx = (n/2) y and vy = -2 n x, written in those forms so both identities hold bitwise.
  st.velocity = Eigen::Vector3d(0.5 * n * st.position(1), -2.0 * n * st.position(0), 0.0);
  return st;
}

}  // namespace swarmplan
