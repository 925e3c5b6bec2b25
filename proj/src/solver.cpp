#include "slope/solver.hpp"

#include <cassert>
#include <cmath>
#include <random>

#include "slope/errors.hpp"
#include "slope/sorted_l1.hpp"

namespace slope {

namespace {

double objective_value(const Eigen::VectorXd& residual, const Eigen::VectorXd& beta,
                       const Eigen::VectorXd& lam) {
  return 0.5 * residual.squaredNorm() + sorted_l1_norm(beta, lam);
}

// Duality gap at beta given residual r = y - X beta and correlation u = X'r.
// The dual is max_theta theta'y - 0.5*||theta||^2 over { X'theta in dual
// ball }; theta = r / dual_ball_scale(u) is feasible.
double duality_gap(double objective, const Eigen::VectorXd& y, const Eigen::VectorXd& residual,
                   const Eigen::VectorXd& u, const Eigen::VectorXd& lam) {
  const double s = dual_ball_scale(u, lam);
  const double dual = residual.dot(y) / s - 0.5 * residual.squaredNorm() / (s * s);
  return std::max(0.0, objective - dual);
}

}  // namespace

void Dataset::validate() const {
  if (y.size() != X.rows()) {
    throw ShapeError("dataset: X has " + std::to_string(X.rows()) + " rows but y has " +
                     std::to_string(y.size()) + " entries");
  }
  if (b0 && b0->size() != X.cols()) {
    throw ShapeError("dataset: X has " + std::to_string(X.cols()) + " columns but b0 has " +
                     std::to_string(b0->size()) + " entries");
  }
  if (!X.allFinite() || !y.allFinite()) throw DataError("dataset: non-finite input");
  if (b0 && !b0->allFinite()) throw DataError("dataset: non-finite ground truth");
  if (sigma && !(*sigma > 0.0)) throw DomainError("dataset: sigma must be positive");
}

double estimate_lipschitz(const Eigen::MatrixXd& X) {
  if (X.size() == 0 || X.isZero(0.0)) return 0.0;
  // Deterministic pseudo-random start; avoids starting orthogonal to the
  // leading eigenvector.
  std::mt19937_64 eng(0x5151u);
  Eigen::VectorXd v(X.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = static_cast<double>(eng() >> 11) * 0x1.0p-53 - 0.5;
  }
  v.normalize();

  double rayleigh = 0.0;
  for (int iter = 0; iter < 30; ++iter) {
    Eigen::VectorXd w = X.transpose() * (X * v);
    const double next = v.dot(w);
    const double nrm = w.norm();
    if (nrm == 0.0) return 0.0;
    v = w / nrm;
    if (iter > 0 && std::abs(next - rayleigh) < 1e-6 * std::abs(next)) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }
  return 1.01 * rayleigh;
}

std::vector<Eigen::Index> support(const Eigen::VectorXd& beta, double zero_tol) {
  if (zero_tol < 0.0) throw DomainError("support: zero_tol must be non-negative");
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (std::abs(beta[i]) > zero_tol) out.push_back(i);
  }
  return out;
}

SlopeSolution solve_slope(const Dataset& data, const LambdaSequence& lam,
                          const SolveOptions& opts) {
  data.validate();
  if (lam.size() != data.p()) {
    throw ShapeError("solve_slope: lambda has " + std::to_string(lam.size()) +
                     " entries but X has " + std::to_string(data.p()) + " columns");
  }
  if (opts.tol_abs < 0.0 || opts.tol_rel < 0.0 || (opts.tol_abs == 0.0 && opts.tol_rel == 0.0)) {
    throw DomainError("solve_slope: tolerance must be positive");
  }
  if (opts.max_iter < 1) throw DomainError("solve_slope: max_iter must be positive");
  if (opts.warm_start && opts.warm_start->size() != data.p()) {
    throw ShapeError("solve_slope: warm start length mismatch");
  }

  const Eigen::MatrixXd& X = data.X;
  const Eigen::VectorXd& y = data.y;
  const Eigen::VectorXd& lv = lam.values();
  const bool unpenalized = lv[0] == 0.0;

  SlopeSolution sol;
  const double L = estimate_lipschitz(X);
  if (L == 0.0) {
    // Zero design: the objective separates and beta = 0 is optimal.
    sol.beta = Eigen::VectorXd::Zero(data.p());
    sol.objective = 0.5 * y.squaredNorm();
    sol.duality_gap = 0.0;
    sol.converged = true;
    sol.tolerance = opts.tol_abs + opts.tol_rel * (1.0 + std::abs(sol.objective));
    return sol;
  }
  const double step = 1.0 / L;

  Eigen::VectorXd beta = opts.warm_start ? *opts.warm_start : Eigen::VectorXd::Zero(data.p());
  Eigen::VectorXd beta_prev = beta;
  const Eigen::VectorXd Xty = X.transpose() * y;

  Eigen::VectorXd residual = y - X * beta;
  Eigen::VectorXd corr = X.transpose() * residual;  // X'(y - X beta)
  Eigen::VectorXd gram_beta = Xty - corr;           // X'X beta
  Eigen::VectorXd gram_prev = gram_beta;
  double obj = objective_value(residual, beta, lv);

  double t = 1.0, t_prev = 1.0;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const double momentum = (t_prev - 1.0) / t;
    // Gradient at the extrapolated point via cached X'X products.
    Eigen::VectorXd grad =
        (1.0 + momentum) * gram_beta - momentum * gram_prev - Xty;
    Eigen::VectorXd z = beta + momentum * (beta - beta_prev);
    Eigen::VectorXd beta_next = prox_sorted_l1(z - step * grad, (step * lv).eval());

    Eigen::VectorXd residual_next = y - X * beta_next;
    double obj_next = objective_value(residual_next, beta_next, lv);
    if (obj_next > obj) {
      // Restart: drop momentum and take a plain proximal step from beta,
      // which cannot increase the objective with step 1/L.
      t = 1.0;
      t_prev = 1.0;
      grad = gram_beta - Xty;
      beta_next = prox_sorted_l1(beta - step * grad, (step * lv).eval());
      residual_next = y - X * beta_next;
      obj_next = objective_value(residual_next, beta_next, lv);
    }
    assert(obj_next <= obj + 1e-12 * (1.0 + std::abs(obj)));

    Eigen::VectorXd corr_next = X.transpose() * residual_next;
    const double gap = unpenalized
                           ? corr_next.cwiseAbs().maxCoeff()
                           : duality_gap(obj_next, y, residual_next, corr_next, lv);

    beta_prev.swap(beta);
    beta.swap(beta_next);
    gram_prev.swap(gram_beta);
    gram_beta = Xty - corr_next;
    obj = obj_next;
    t_prev = t;
    t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));

    sol.iterations = iter;
    sol.duality_gap = gap;
    sol.tolerance = opts.tol_abs + opts.tol_rel * (1.0 + std::abs(obj));
    if (gap <= sol.tolerance) {
      sol.converged = true;
      break;
    }
  }

  sol.beta = beta;
  sol.objective = obj;
  return sol;
}

SlopeSolution solve_slope(const Dataset& data, const LambdaSequence& lam, double tol,
                          int max_iter) {
  SolveOptions opts;
  opts.tol_abs = tol;
  opts.tol_rel = 0.0;
  opts.max_iter = max_iter;
  return solve_slope(data, lam, opts);
}

}  // namespace slope
