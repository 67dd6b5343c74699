#include "swarmplan/lp.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace swarmplan {

namespace {

// Standard form used internally: min c'x s.t. A x = b, l <= x <= u.
struct StandardForm {
  SparseMatrix A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  Eigen::VectorXd l;
  Eigen::VectorXd u;
};

double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

// Largest step in (0, 1] keeping v + step * dv > 0, damped.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv, const std::vector<int>& idx,
                double damping) {
  double step = 1.0;
  for (int j : idx) {
    if (dv[j] < 0.0) step = std::min(step, -damping * v[j] / dv[j]);
  }
  return step;
}

// Geometric equilibration: rows and columns of A scaled toward unit max-norm.
void ruiz_scale(SparseMatrix& A, Eigen::VectorXd& row_scale, Eigen::VectorXd& col_scale, int passes) {
  row_scale = Eigen::VectorXd::Ones(A.rows());
  col_scale = Eigen::VectorXd::Ones(A.cols());
  for (int pass = 0; pass < passes; ++pass) {
    Eigen::VectorXd rmax = Eigen::VectorXd::Zero(A.rows());
    Eigen::VectorXd cmax = Eigen::VectorXd::Zero(A.cols());
    for (int k = 0; k < A.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
        const double a = std::abs(it.value());
        rmax[it.row()] = std::max(rmax[it.row()], a);
        cmax[it.col()] = std::max(cmax[it.col()], a);
      }
    }
    Eigen::VectorXd dr(A.rows()), dc(A.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i) dr[i] = rmax[i] > 0.0 ? 1.0 / std::sqrt(rmax[i]) : 1.0;
    for (Eigen::Index j = 0; j < A.cols(); ++j) dc[j] = cmax[j] > 0.0 ? 1.0 / std::sqrt(cmax[j]) : 1.0;
    A = dr.asDiagonal() * A * dc.asDiagonal();
    row_scale.array() *= dr.array();
    col_scale.array() *= dc.array();
  }
}

class InteriorPoint {
 public:
  InteriorPoint(const StandardForm& sf, const LpOptions& opts) : sf_(sf), opts_(opts) {
    n_ = static_cast<int>(sf.A.cols());
    m_ = static_cast<int>(sf.A.rows());
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(sf.l[j])) lower_idx_.push_back(j);
      if (std::isfinite(sf.u[j])) upper_idx_.push_back(j);
    }
    At_ = sf.A.transpose();
    build_kkt_pattern();
  }

  struct Result {
    LpStatus status;
    Eigen::VectorXd x, y, zl, zu;
    int iterations;
  };

  Result run() {
    initial_point();
    const double bnorm = inf_norm(sf_.b);
    const double cnorm = inf_norm(sf_.c);
    const int ncomp = static_cast<int>(lower_idx_.size() + upper_idx_.size());
    double best_pinf = kInf;
    int stall = 0;

    for (int iter = 0; iter < opts_.max_iterations; ++iter) {
      slacks();
      const Eigen::VectorXd rp = sf_.b - sf_.A * x_;
      const Eigen::VectorXd rd = sf_.c - At_ * y_ - zl_ + zu_;
      const double mu = ncomp > 0 ? complementarity() / ncomp : 0.0;

      const double pobj = sf_.c.dot(x_);
      const double dobj = dual_objective();
      const double pinf = inf_norm(rp) / (1.0 + bnorm);
      const double dinf = inf_norm(rd) / (1.0 + cnorm);
      const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
      if (!std::isfinite(pinf) || !std::isfinite(dinf) || !std::isfinite(gap)) {
        // Iterates blew up; a persistent primal residual means no feasible point.
        const LpStatus st = best_pinf > 1e-6 ? LpStatus::Infeasible : LpStatus::NumericalError;
        return {st, x_, y_, zl_, zu_, iter};
      }
      if (pinf <= opts_.tolerance && dinf <= opts_.tolerance && gap <= opts_.tolerance) {
        return {LpStatus::Optimal, x_, y_, zl_, zu_, iter};
      }

      // Divergence: unbounded primal iterates signal an unbounded LP, unbounded
      // dual iterates with a stuck primal residual signal infeasibility.
      const double xnorm = inf_norm(x_);
      const double dual_norm = std::max({inf_norm(y_), inf_norm(zl_), inf_norm(zu_)});
      if (xnorm > 1e12 && pinf < 1e-6) return {LpStatus::Unbounded, x_, y_, zl_, zu_, iter};
      if (dual_norm > 1e12 && dinf < 1e-6 && pinf > 1e-8) {
        return {LpStatus::Infeasible, x_, y_, zl_, zu_, iter};
      }
      if (pinf < 0.9 * best_pinf) {
        best_pinf = pinf;
        stall = 0;
      } else if (pinf > 1e-6 && ++stall > 40) {
        return {LpStatus::Infeasible, x_, y_, zl_, zu_, iter};
      }

      if (!factorize()) return {LpStatus::NumericalError, x_, y_, zl_, zu_, iter};

      // Predictor.
      Eigen::VectorXd rl = Eigen::VectorXd::Zero(n_), ru = Eigen::VectorXd::Zero(n_);
      for (int j : lower_idx_) rl[j] = -sl_[j] * zl_[j];
      for (int j : upper_idx_) ru[j] = -su_[j] * zu_[j];
      Direction aff = direction(rp, rd, rl, ru);
      double ap = std::min(max_step(sl_, aff.dx, lower_idx_, 1.0), max_step(su_, -aff.dx, upper_idx_, 1.0));
      double ad = std::min(max_step(zl_, aff.dzl, lower_idx_, 1.0), max_step(zu_, aff.dzu, upper_idx_, 1.0));

      double sigma = 0.0;
      if (ncomp > 0 && mu > 0.0) {
        double mu_aff = 0.0;
        for (int j : lower_idx_) mu_aff += (sl_[j] + ap * aff.dx[j]) * (zl_[j] + ad * aff.dzl[j]);
        for (int j : upper_idx_) mu_aff += (su_[j] - ap * aff.dx[j]) * (zu_[j] + ad * aff.dzu[j]);
        mu_aff /= ncomp;
        sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);
      }

      // Corrector with the second-order term.
      for (int j : lower_idx_) rl[j] = sigma * mu - sl_[j] * zl_[j] - aff.dx[j] * aff.dzl[j];
      for (int j : upper_idx_) ru[j] = sigma * mu - su_[j] * zu_[j] + aff.dx[j] * aff.dzu[j];
      Direction d = direction(rp, rd, rl, ru);
      ap = std::min(max_step(sl_, d.dx, lower_idx_, 0.995), max_step(su_, -d.dx, upper_idx_, 0.995));
      ad = std::min(max_step(zl_, d.dzl, lower_idx_, 0.995), max_step(zu_, d.dzu, upper_idx_, 0.995));

      x_ += ap * d.dx;
      y_ += ad * d.dy;
      zl_ += ad * d.dzl;
      zu_ += ad * d.dzu;
    }
    slacks();
    const double pinf = inf_norm(sf_.b - sf_.A * x_) / (1.0 + bnorm);
    const double dinf = inf_norm(sf_.c - At_ * y_ - zl_ + zu_) / (1.0 + cnorm);
    LpStatus st = LpStatus::IterationLimit;
    if (pinf > 1e-6) st = LpStatus::Infeasible;
    else if (dinf > 1e-6) st = LpStatus::Unbounded;
    return {st, x_, y_, zl_, zu_, opts_.max_iterations};
  }

 private:
  struct Direction {
    Eigen::VectorXd dx, dy, dzl, dzu;
  };

  void build_kkt_pattern() {
    // Lower triangle of [-(D + rho I)  A'; A  delta I].
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n_ + m_ + sf_.A.nonZeros()));
    for (int j = 0; j < n_; ++j) trip.emplace_back(j, j, -1.0);
    for (int k = 0; k < sf_.A.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(sf_.A, k); it; ++it) {
        trip.emplace_back(n_ + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      }
    }
    for (int i = 0; i < m_; ++i) trip.emplace_back(n_ + i, n_ + i, 1.0);
    kkt_.resize(n_ + m_, n_ + m_);
    kkt_.setFromTriplets(trip.begin(), trip.end());
    kkt_.makeCompressed();
    diag_ptr_.resize(static_cast<std::size_t>(n_ + m_));
    for (int j = 0; j < n_ + m_; ++j) diag_ptr_[static_cast<std::size_t>(j)] = &kkt_.coeffRef(j, j);
    ldlt_.analyzePattern(kkt_);
  }

  void initial_point() {
    x_ = Eigen::VectorXd::Zero(n_);
    for (int j = 0; j < n_; ++j) {
      const double l = sf_.l[j], u = sf_.u[j];
      const bool hl = std::isfinite(l), hu = std::isfinite(u);
      if (hl && hu) x_[j] = 0.5 * (l + u);
      else if (hl) x_[j] = l + 1.0;
      else if (hu) x_[j] = u - 1.0;
    }
    y_ = Eigen::VectorXd::Zero(m_);
    const double z0 = std::max(1.0, inf_norm(sf_.c));
    zl_ = Eigen::VectorXd::Zero(n_);
    zu_ = Eigen::VectorXd::Zero(n_);
    for (int j : lower_idx_) zl_[j] = z0;
    for (int j : upper_idx_) zu_[j] = z0;
  }

  void slacks() {
    sl_ = Eigen::VectorXd::Zero(n_);
    su_ = Eigen::VectorXd::Zero(n_);
    for (int j : lower_idx_) sl_[j] = x_[j] - sf_.l[j];
    for (int j : upper_idx_) su_[j] = sf_.u[j] - x_[j];
  }

  double complementarity() const {
    double s = 0.0;
    for (int j : lower_idx_) s += sl_[j] * zl_[j];
    for (int j : upper_idx_) s += su_[j] * zu_[j];
    return s;
  }

  double dual_objective() const {
    double d = sf_.b.dot(y_);
    for (int j : lower_idx_) d += sf_.l[j] * zl_[j];
    for (int j : upper_idx_) d -= sf_.u[j] * zu_[j];
    return d;
  }

  bool factorize() {
    diag_ = Eigen::VectorXd::Zero(n_);
    for (int j : lower_idx_) diag_[j] += zl_[j] / sl_[j];
    for (int j : upper_idx_) diag_[j] += zu_[j] / su_[j];
    // A zero pivot from cancellation is retried with stronger regularization;
    // iterative refinement against the exact system absorbs the perturbation.
    for (double reg = kRegularization; reg <= 1e-5; reg *= 100.0) {
      for (int j = 0; j < n_; ++j) *diag_ptr_[static_cast<std::size_t>(j)] = -(diag_[j] + reg);
      for (int i = 0; i < m_; ++i) *diag_ptr_[static_cast<std::size_t>(n_ + i)] = reg;
      ldlt_.factorize(kkt_);
      if (ldlt_.info() == Eigen::Success) return true;
    }
    return false;
  }

  // Multiplies by the unregularized KKT matrix.
  Eigen::VectorXd kkt_apply(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out(n_ + m_);
    const auto vx = v.head(n_);
    const auto vy = v.tail(m_);
    out.head(n_) = -diag_.cwiseProduct(vx) + At_ * vy;
    out.tail(m_) = sf_.A * vx;
    return out;
  }

  Direction direction(const Eigen::VectorXd& rp, const Eigen::VectorXd& rd, const Eigen::VectorXd& rl,
                      const Eigen::VectorXd& ru) {
    Eigen::VectorXd rhs(n_ + m_);
    Eigen::VectorXd top = rd;
    for (int j : lower_idx_) top[j] -= rl[j] / sl_[j];
    for (int j : upper_idx_) top[j] += ru[j] / su_[j];
    rhs << top, rp;
    Eigen::VectorXd sol = ldlt_.solve(rhs);
    for (int k = 0; k < 3; ++k) {
      const Eigen::VectorXd res = rhs - kkt_apply(sol);
      if (inf_norm(res) <= 1e-14 * (1.0 + inf_norm(rhs))) break;
      sol += ldlt_.solve(res);
    }
    Direction d;
    d.dx = sol.head(n_);
    d.dy = sol.tail(m_);
    d.dzl = Eigen::VectorXd::Zero(n_);
    d.dzu = Eigen::VectorXd::Zero(n_);
    for (int j : lower_idx_) d.dzl[j] = (rl[j] - zl_[j] * d.dx[j]) / sl_[j];
    for (int j : upper_idx_) d.dzu[j] = (ru[j] + zu_[j] * d.dx[j]) / su_[j];
    return d;
  }

  static constexpr double kRegularization = 1e-9;

  const StandardForm& sf_;
  LpOptions opts_;
  int n_ = 0, m_ = 0;
  std::vector<int> lower_idx_, upper_idx_;
  SparseMatrix At_;
  SparseMatrix kkt_;
  std::vector<double*> diag_ptr_;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower> ldlt_;
  Eigen::VectorXd x_, y_, zl_, zu_, sl_, su_, diag_;
};

}  // namespace

LinearProgram LinearProgram::with_vars(Eigen::Index n) {
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Zero(n);
  lp.eq_matrix.resize(0, n);
  lp.eq_rhs.resize(0);
  lp.ineq_matrix.resize(0, n);
  lp.ineq_rhs.resize(0);
  lp.lower = Eigen::VectorXd::Constant(n, -kInf);
  lp.upper = Eigen::VectorXd::Constant(n, kInf);
  return lp;
}

void LinearProgram::validate() const {
  const Eigen::Index n = num_vars();
  if (eq_matrix.cols() != n || ineq_matrix.cols() != n) {
    throw std::invalid_argument("LinearProgram: constraint matrix column count mismatch");
  }
  if (eq_matrix.rows() != eq_rhs.size() || ineq_matrix.rows() != ineq_rhs.size()) {
    throw std::invalid_argument("LinearProgram: rhs length mismatch");
  }
  if (lower.size() != n || upper.size() != n) throw std::invalid_argument("LinearProgram: bound length mismatch");
  if (!eq_rhs.allFinite() || !ineq_rhs.allFinite() || !objective.allFinite()) {
    throw std::invalid_argument("LinearProgram: non-finite rhs or objective");
  }
}

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
    case LpStatus::NumericalError: return "numerical_error";
  }
  return "unknown";
}

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts) {
  lp.validate();
  const int n = static_cast<int>(lp.num_vars());
  const int me = static_cast<int>(lp.eq_matrix.rows());
  const int mi = static_cast<int>(lp.ineq_matrix.rows());

  LpSolution out;
  for (int j = 0; j < n; ++j) {
    if (lp.lower[j] > lp.upper[j]) {
      out.status = LpStatus::Infeasible;
      out.x = Eigen::VectorXd::Zero(n);
      return out;
    }
  }

  // Fixed variables become equality rows; inequalities get slacks w >= 0.
  std::vector<int> fixed;
  for (int j = 0; j < n; ++j) {
    if (lp.lower[j] == lp.upper[j]) fixed.push_back(j);
  }
  const int nf = static_cast<int>(fixed.size());
  const int N = n + mi;
  const int M = me + mi + nf;

  StandardForm sf;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(lp.eq_matrix.nonZeros() + lp.ineq_matrix.nonZeros() + mi + nf));
  for (int k = 0; k < lp.eq_matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(lp.eq_matrix, k); it; ++it) {
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int k = 0; k < lp.ineq_matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(lp.ineq_matrix, k); it; ++it) {
      trip.emplace_back(me + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int i = 0; i < mi; ++i) trip.emplace_back(me + i, n + i, 1.0);
  for (int f = 0; f < nf; ++f) trip.emplace_back(me + mi + f, fixed[static_cast<std::size_t>(f)], 1.0);
  sf.A.resize(M, N);
  sf.A.setFromTriplets(trip.begin(), trip.end());
  sf.b.resize(M);
  sf.b << lp.eq_rhs, lp.ineq_rhs, Eigen::VectorXd::Zero(nf);
  for (int f = 0; f < nf; ++f) sf.b[me + mi + f] = lp.lower[fixed[static_cast<std::size_t>(f)]];
  sf.c = Eigen::VectorXd::Zero(N);
  sf.c.head(n) = lp.objective;
  sf.l = Eigen::VectorXd::Zero(N);
  sf.u = Eigen::VectorXd::Constant(N, kInf);
  sf.l.head(n) = lp.lower;
  sf.u.head(n) = lp.upper;
  for (int j : fixed) {
    sf.l[j] = -kInf;
    sf.u[j] = kInf;
  }

  // Equilibrate: A <- R A C, x = C x_hat, b <- R b, c <- C c / cscale.
  Eigen::VectorXd rs, cs;
  ruiz_scale(sf.A, rs, cs, opts.scaling_passes);
  sf.b = rs.cwiseProduct(sf.b);
  sf.c = cs.cwiseProduct(sf.c);
  for (int j = 0; j < N; ++j) {
    sf.l[j] /= cs[j];
    sf.u[j] /= cs[j];
  }
  const double cscale = std::max(1.0, inf_norm(sf.c));
  sf.c /= cscale;

  InteriorPoint ipm(sf, opts);
  auto res = ipm.run();

  out.status = res.status;
  out.iterations = res.iterations;
  const Eigen::VectorXd xfull = cs.cwiseProduct(res.x);
  out.x = xfull.head(n);
  const Eigen::VectorXd yfull = cscale * rs.cwiseProduct(res.y);
  out.eq_dual = yfull.head(me);
  out.ineq_dual = yfull.segment(me, mi);
  out.objective = lp.objective.dot(out.x);

  // Residuals in the caller's units.
  double pres = 0.0;
  if (me > 0) pres = std::max(pres, inf_norm(lp.eq_matrix * out.x - lp.eq_rhs));
  if (mi > 0) pres = std::max(pres, (lp.ineq_matrix * out.x - lp.ineq_rhs).cwiseMax(0.0).maxCoeff());
  for (int j = 0; j < n; ++j) {
    pres = std::max({pres, lp.lower[j] - out.x[j], out.x[j] - lp.upper[j]});
  }
  out.primal_residual = pres;
  const Eigen::VectorXd zl = cscale * res.zl.cwiseQuotient(cs);
  const Eigen::VectorXd zu = cscale * res.zu.cwiseQuotient(cs);
  Eigen::VectorXd rd = lp.objective - zl.head(n) + zu.head(n);
  if (me > 0) rd -= lp.eq_matrix.transpose() * out.eq_dual;
  if (mi > 0) rd -= lp.ineq_matrix.transpose() * out.ineq_dual;
  double dobj = lp.eq_rhs.dot(out.eq_dual) + lp.ineq_rhs.dot(out.ineq_dual);
  for (int f = 0; f < nf; ++f) {
    const int j = fixed[static_cast<std::size_t>(f)];
    rd[j] -= yfull[me + mi + f];
    dobj += lp.lower[j] * yfull[me + mi + f];
  }
  out.dual_residual = inf_norm(rd);
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower[j])) dobj += lp.lower[j] * zl[j];
    if (std::isfinite(lp.upper[j])) dobj -= lp.upper[j] * zu[j];
  }
  out.gap = std::abs(out.objective - dobj) / (1.0 + std::abs(out.objective));
  return out;
}

}  // namespace swarmplan
