#pragma once

// Textbook two-phase tableau simplex (Bland's rule) and brute-force vertex
// enumeration, in extended precision. Slow and simple on purpose.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

enum class SimplexStatus { Optimal, Infeasible, Unbounded };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// min c'x  s.t.  a_eq x = b_eq,  a_le x <= b_le,  x >= 0.
inline SimplexResult simplex(const Eigen::VectorXd& c, const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq,
                             const Eigen::MatrixXd& a_le, const Eigen::VectorXd& b_le) {
  using Real = long double;
  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  const Real eps = 1e-11L;
  const int n = static_cast<int>(c.size());
  const int me = static_cast<int>(a_eq.rows());
  const int ml = static_cast<int>(a_le.rows());
  const int m = me + ml;
  const int slack0 = n;
  const int art0 = n + ml;
  const int cols = n + ml + m;  // rhs stored in column `cols`

  Mat t = Mat::Zero(m + 1, cols + 1);
  for (int i = 0; i < me; ++i) {
    for (int j = 0; j < n; ++j) t(i, j) = a_eq(i, j);
    t(i, cols) = b_eq[i];
  }
  for (int i = 0; i < ml; ++i) {
    for (int j = 0; j < n; ++j) t(me + i, j) = a_le(i, j);
    t(me + i, slack0 + i) = 1;
    t(me + i, cols) = b_le[i];
  }
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    if (t(i, cols) < 0) t.row(i) *= -1;
    t(i, art0 + i) = 1;
    basis[static_cast<std::size_t>(i)] = art0 + i;
  }

  auto pivot = [&](int r, int q) {
    t.row(r) /= t(r, q);
    for (int i = 0; i <= m; ++i) {
      if (i != r && t(i, q) != 0) t.row(i) -= t(i, q) * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = q;
  };

  // Objective row holds reduced costs; returns false when unbounded.
  auto run = [&](int allowed_cols) {
    for (;;) {
      int q = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (t(m, j) < -eps) {
          q = j;
          break;
        }
      }
      if (q < 0) return true;
      int r = -1;
      Real best = std::numeric_limits<Real>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t(i, q) > eps) {
          const Real ratio = t(i, cols) / t(i, q);
          if (ratio < best - eps ||
              (ratio <= best + eps && r >= 0 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(r)])) {
            best = std::min(best, ratio);
            r = i;
          }
        }
      }
      if (r < 0) return false;
      pivot(r, q);
    }
  };

  // Phase 1: minimize the sum of artificials.
  t.row(m).setZero();
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (int i = 0; i < m; ++i) t(m, art0 + i) = 0;
  run(art0);
  SimplexResult res;
  if (-t(m, cols) > 1e-9L * (1 + t.col(cols).head(m).cwiseAbs().maxCoeff())) return res;
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < art0) continue;
    for (int j = 0; j < art0; ++j) {
      if (std::fabs(t(i, j)) > eps) {
        pivot(i, j);
        break;
      }
    }
  }

  // Phase 2.
  t.row(m).setZero();
  for (int j = 0; j < n; ++j) t(m, j) = c[j];
  for (int i = 0; i < m; ++i) {
    const int b = basis[static_cast<std::size_t>(i)];
    if (b < art0 && t(m, b) != 0) t.row(m) -= t(m, b) * t.row(i);
  }
  if (!run(art0)) {
    res.status = SimplexStatus::Unbounded;
    return res;
  }
  res.status = SimplexStatus::Optimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int b = basis[static_cast<std::size_t>(i)];
    if (b < n) res.x[b] = static_cast<double>(t(i, cols));
  }
  res.objective = c.dot(res.x);
  return res;
}

/// min c'x s.t. g x <= h by checking every vertex; assumes the optimum is attained.
inline SimplexResult vertex_enumeration(const Eigen::VectorXd& c, const Eigen::MatrixXd& g, const Eigen::VectorXd& h) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(g.rows());
  SimplexResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd a(n, n);
      Eigen::VectorXd b(n);
      for (int k = 0; k < n; ++k) {
        a.row(k) = g.row(pick[static_cast<std::size_t>(k)]);
        b[k] = h[pick[static_cast<std::size_t>(k)]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(b);
      if (((g * x - h).array() > 1e-9).any()) return;
      const double obj = c.dot(x);
      if (obj < best.objective) {
        best.objective = obj;
        best.x = x;
        best.status = SimplexStatus::Optimal;
      }
      return;
    }
    for (int i = start; i < m; ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace oracle
