#pragma once

// Reference discretizations: scaled-and-squared Taylor exponential of the
// augmented system, and classical RK4 with many substeps.

#include <cmath>
#include <utility>

#include <Eigen/Dense>

namespace oracle {

inline Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  const int squarings = norm > 0.25 ? static_cast<int>(std::ceil(std::log2(norm / 0.25))) : 0;
  const Eigen::MatrixXd x = m / std::ldexp(1.0, squarings);
  const auto n = m.rows();
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// (A, B) of the zero-order-hold discretization via exp([[Ac, Bc], [0, 0]] dt).
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> zoh_expm(const Eigen::MatrixXd& ac, const Eigen::MatrixXd& bc,
                                                            double dt) {
  const auto n = ac.rows();
  const auto m = bc.cols();
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = ac * dt;
  aug.topRightCorner(n, m) = bc * dt;
  const Eigen::MatrixXd e = expm_taylor(aug);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, m)};
}

/// x' = Ac x + Bc u with u held constant, integrated by RK4.
inline Eigen::VectorXd rk4(const Eigen::MatrixXd& ac, const Eigen::MatrixXd& bc, Eigen::VectorXd x,
                           const Eigen::VectorXd& u, double dt, int substeps) {
  const double h = dt / substeps;
  const Eigen::VectorXd bu = bc * u;
  for (int s = 0; s < substeps; ++s) {
    const Eigen::VectorXd k1 = ac * x + bu;
    const Eigen::VectorXd k2 = ac * (x + 0.5 * h * k1) + bu;
    const Eigen::VectorXd k3 = ac * (x + 0.5 * h * k2) + bu;
    const Eigen::VectorXd k4 = ac * (x + h * k3) + bu;
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

/// (A, B) assembled column by column from RK4 responses to unit states and inputs.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> zoh_rk4(const Eigen::MatrixXd& ac, const Eigen::MatrixXd& bc,
                                                           double dt, int substeps) {
  const auto n = ac.rows();
  const auto m = bc.cols();
  Eigen::MatrixXd a(n, n), b(n, m);
  for (Eigen::Index j = 0; j < n; ++j) {
    a.col(j) = rk4(ac, bc, Eigen::VectorXd::Unit(n, j), Eigen::VectorXd::Zero(m), dt, substeps);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    b.col(j) = rk4(ac, bc, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Unit(m, j), dt, substeps);
  }
  return {a, b};
}

/// Continuous Clohessy-Wiltshire-Hill system matrix, written out independently.
inline Eigen::MatrixXd cwh_ac(double n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
  a(0, 3) = a(1, 4) = a(2, 5) = 1.0;
  a(3, 0) = 3.0 * n * n;
  a(3, 4) = 2.0 * n;
  a(4, 3) = -2.0 * n;
  a(5, 2) = -n * n;
  return a;
}

inline Eigen::MatrixXd accel_bc(int d) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * d, d);
  b.bottomRows(d).setIdentity();
  return b;
}

}  // namespace oracle
