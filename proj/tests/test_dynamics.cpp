#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles/expm.hpp"
#include "swarmplan/dynamics.hpp"
#include "swarmplan/rng.hpp"

using namespace swarmplan;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd constant_controls(const Eigen::VectorXd& u, int steps) {
  Eigen::MatrixXd U(u.size(), steps);
  U.colwise() = u;
  return U;
}

}  // namespace

TEST_CASE("double integrator matrices for d=1, dt=1") {
  const DiscreteLTI s = build_double_integrator(1, 1.0);
  Eigen::Matrix2d a;
  a << 1, 1, 0, 1;
  Eigen::Vector2d b(0.5, 1.0);
  CHECK(max_abs(s.A - a) == 0.0);
  CHECK(max_abs(s.B - b) == 0.0);
  CHECK(s.state_dim() == 2);
  CHECK(s.control_dim() == 1);
}

TEST_CASE("constant thrust reaches half a t squared") {
  const DiscreteLTI s = build_double_integrator(2, 1.0);
  const Eigen::MatrixXd X = propagate(s, Eigen::VectorXd::Zero(4), constant_controls(Eigen::Vector2d(0.1, 0.1), 10));
  CHECK(X.cols() == 11);
  CHECK(max_abs(X.col(10) - Eigen::Vector4d(5.0, 5.0, 1.0, 1.0)) < 1e-12);
  for (int t = 0; t <= 10; ++t) {
    CHECK(std::fabs(X(0, t) - 0.5 * 0.1 * t * t) < 1e-12);
    CHECK(std::fabs(X(3, t) - 0.1 * t) < 1e-12);
  }
}

TEST_CASE("double integrator matches the matrix exponential") {
  for (double dt : {0.5, 1.0, 3.0}) {
    for (int d : {1, 2, 3}) {
      const DiscreteLTI s = build_double_integrator(d, dt);
      Eigen::MatrixXd ac = Eigen::MatrixXd::Zero(2 * d, 2 * d);
      ac.topRightCorner(d, d).setIdentity();
      const auto [a, b] = oracle::zoh_expm(ac, oracle::accel_bc(d), dt);
      CHECK(max_abs(s.A - a) < 1e-12);
      CHECK(max_abs(s.B - b) < 1e-12);
    }
  }
}

TEST_CASE("vanishing step gives identity and zero input matrix") {
  const DiscreteLTI di = build_double_integrator(3, 1e-12);
  CHECK(max_abs(di.A - Eigen::MatrixXd::Identity(6, 6)) < 1e-9);
  CHECK(max_abs(di.B) < 1e-9);
  const DiscreteLTI cw = build_cwh(kDefaultMeanMotion, 1e-12);
  CHECK(max_abs(cw.A - Eigen::MatrixXd::Identity(6, 6)) < 1e-9);
  CHECK(max_abs(cw.B) < 1e-9);
}

TEST_CASE("invalid discretization arguments") {
  CHECK_THROWS_AS(build_double_integrator(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_double_integrator(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_double_integrator(4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_cwh(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_cwh(0.001, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_cwh(-0.001, 1.0), std::invalid_argument);
}

TEST_CASE("cwh approaches the double integrator as n goes to zero") {
  const DiscreteLTI di = build_double_integrator(3, 1.0);
  const DiscreteLTI cw = build_cwh(1e-9, 1.0);
  CHECK(max_abs(cw.A - di.A) < 1e-6);
  CHECK(max_abs(cw.B - di.B) < 1e-6);
  double prev = std::numeric_limits<double>::infinity();
  for (double n : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const DiscreteLTI c = build_cwh(n, 10.0);
    const DiscreteLTI d = build_double_integrator(3, 10.0);
    const double gap = std::max(max_abs(c.A - d.A), max_abs(c.B - d.B));
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("cwh matches RK4 with 1e4 substeps") {
  const double n = 0.00113;
  const DiscreteLTI s = build_cwh(n, 100.0);
  const auto [a, b] = oracle::zoh_rk4(oracle::cwh_ac(n), oracle::accel_bc(3), 100.0, 10000);
  CHECK(max_abs(s.A - a) < 1e-9);
  CHECK(max_abs(s.B - b) < 1e-9);
}

TEST_CASE("cwh matches the matrix exponential over a range of steps") {
  for (double n : {0.00113, 0.01, 0.5}) {
    for (double dt : {0.1, 1.0, 55.6}) {
      const DiscreteLTI s = build_cwh(n, dt);
      const auto [a, b] = oracle::zoh_expm(oracle::cwh_ac(n), oracle::accel_bc(3), dt);
      CHECK(max_abs(s.A - a) < 1e-9 * std::max(1.0, max_abs(a)));
      CHECK(max_abs(s.B - b) < 1e-9 * std::max(1.0, max_abs(b)));
    }
  }
  CHECK(max_abs(cwh_continuous_a(0.3) - oracle::cwh_ac(0.3)) == 0.0);
  CHECK(max_abs(continuous_b(3) - oracle::accel_bc(3)) == 0.0);
}

TEST_CASE("propagate basics") {
  const DiscreteLTI s = build_double_integrator(1, 1.0);
  CHECK(max_abs(propagate(s, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(1, 5))) == 0.0);
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(1, 4);
  U(0, 0) = 0.1;
  const Eigen::MatrixXd X = propagate(s, Eigen::VectorXd::Zero(2), U);
  const double expect[] = {0.0, 0.05, 0.15, 0.25, 0.35};
  for (int t = 0; t < 5; ++t) CHECK(X(0, t) == doctest::Approx(expect[t]).epsilon(1e-15));
  CHECK_THROWS_AS(propagate(s, Eigen::VectorXd::Zero(3), U), std::invalid_argument);
  CHECK_THROWS_AS(propagate(s, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(2, 4)), std::invalid_argument);
}

TEST_CASE("recurrence residual is exactly zero") {
  const DiscreteLTI s = build_cwh(0.00113, 7.0);
  Rng rng(5);
  Eigen::MatrixXd U(3, 20);
  for (Eigen::Index i = 0; i < U.size(); ++i) U.data()[i] = rng.uniform(-1, 1);
  Eigen::VectorXd x0(6);
  for (int i = 0; i < 6; ++i) x0[i] = rng.uniform(-50, 50);
  const Eigen::MatrixXd X = propagate(s, x0, U);
  for (int t = 0; t < 20; ++t) CHECK(max_abs(X.col(t + 1) - (s.A * X.col(t) + s.B * U.col(t))) == 0.0);
}

TEST_CASE("k steps of dt equal one step of k dt under constant control") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const double dt = rng.uniform(0.1, 20.0);
    const int k = 1 + static_cast<int>(rng.below(9));
    const bool cwh = trial % 2 == 0;
    const DiscreteLTI fine = cwh ? build_cwh(0.00113, dt) : build_double_integrator(3, dt);
    const DiscreteLTI coarse = cwh ? build_cwh(0.00113, k * dt) : build_double_integrator(3, k * dt);
    Eigen::VectorXd x0(6), u(3);
    for (int i = 0; i < 6; ++i) x0[i] = rng.uniform(-10, 10);
    for (int i = 0; i < 3; ++i) u[i] = rng.uniform(-1, 1);
    const Eigen::VectorXd a = propagate(fine, x0, constant_controls(u, k)).col(k);
    const Eigen::VectorXd b = coarse.A * x0 + coarse.B * u;
    CHECK(max_abs(a - b) < 1e-10 * std::max(1.0, max_abs(b)));
  }
}

TEST_CASE("pro_state parameterization and identities") {
  const AgentState s = pro_state(Pro{10.0, 0.0, 0.001});
  CHECK(s.stacked().isApprox((Eigen::VectorXd(6) << 0, 20, 0, 0.01, 0, 0).finished()));
  CHECK(s.position[0] == 0.0);
  CHECK(s.velocity[1] == 0.0);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Pro p{rng.uniform(12.5, 37.5), rng.uniform(0, 2 * std::numbers::pi), rng.uniform(1e-4, 1e-2)};
    const AgentState x = pro_state(p);
    CHECK(x.velocity[1] == -2.0 * p.mean_motion * x.position[0]);
    CHECK(x.velocity[0] == 0.5 * p.mean_motion * x.position[1]);
    CHECK(x.position[2] == 0.0);
    CHECK(x.velocity[2] == 0.0);
  }
  CHECK_THROWS_AS(pro_state(Pro{0.0, 0.0, 0.001}), std::invalid_argument);
  CHECK_THROWS_AS(pro_state(Pro{1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("thrust-free PRO closes after one period") {
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Pro p{rng.uniform(12.5, 37.5), rng.uniform(0, 2 * std::numbers::pi), kDefaultMeanMotion};
    const int steps = 100;
    const DiscreteLTI s = build_cwh(p.mean_motion, p.period() / steps);
    const Eigen::VectorXd x0 = pro_state(p).stacked();
    const Eigen::VectorXd xT = propagate(s, x0, Eigen::MatrixXd::Zero(3, steps)).col(steps);
    CHECK((xT - x0).norm() / x0.norm() < 1e-6);
  }
}

TEST_CASE("propagated PRO follows the analytic ellipse") {
  const Pro p{25.0, 0.0, 0.00113};
  const int steps = 200;
  const double dt = p.period() / steps;
  const Eigen::MatrixXd X =
      propagate(build_cwh(p.mean_motion, dt), pro_state(p).stacked(), Eigen::MatrixXd::Zero(3, steps));
  double worst = 0.0;
  for (int t = 0; t <= steps; ++t) {
    const double th = p.mean_motion * t * dt + p.phase;
    worst = std::max(worst, std::fabs(X(0, t) - p.rho * std::sin(th)));
    worst = std::max(worst, std::fabs(X(1, t) - 2 * p.rho * std::cos(th)));
    worst = std::max(worst, std::fabs(X(2, t)));
  }
  CHECK(worst < 1e-6 * p.rho);
}

TEST_CASE("agent state stacking") {
  const AgentState s{Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4)};
  const AgentState r = AgentState::from_stacked(s.stacked());
  CHECK(r.position == s.position);
  CHECK(r.velocity == s.velocity);
  CHECK_THROWS_AS(AgentState::from_stacked(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}
