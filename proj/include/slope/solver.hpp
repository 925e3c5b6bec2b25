#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "slope/lambda_seq.hpp"

namespace slope {

// Regression instance. The design follows the column scaling in which
// entries are on the order of 1/sqrt(n), so the tuning sequences do not
// depend on n. Ground truth and noise scale are carried along when known
// (simulated data) and power the diagnostics that need them.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::optional<Eigen::VectorXd> b0;
  std::optional<double> sigma;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
  void validate() const;  // shapes and finiteness
};

struct SolveOptions {
  // Stopping rule: duality gap <= tol_abs + tol_rel * (1 + |objective|).
  double tol_abs = 0.0;
  double tol_rel = 1e-8;
  int max_iter = 100000;
  std::optional<Eigen::VectorXd> warm_start;
};

struct SlopeSolution {
  Eigen::VectorXd beta;
  int iterations = 0;
  double duality_gap = 0.0;
  double objective = 0.0;
  bool converged = false;
  double tolerance = 0.0;  // effective gap tolerance at termination
};

// Minimize 0.5*||y - X b||^2 + J_lam(b) by FISTA with gradient step 1/L and
// adaptive restart on objective increase. The certificate is the duality gap
// against the feasible dual point obtained by scaling the residual so that
// X'theta lies in the sorted-L1 dual unit ball. When the sequence is
// identically zero (unpenalized least squares) the gap degenerates and
// ||X'(y - X b)||_inf is used as the certificate instead.
SlopeSolution solve_slope(const Dataset& data, const LambdaSequence& lam,
                          const SolveOptions& opts = {});

// Convenience overload with an absolute gap tolerance.
SlopeSolution solve_slope(const Dataset& data, const LambdaSequence& lam, double tol,
                          int max_iter);

// Upper bound on ||X||_2^2 via power iteration on X'X (30 iterations or
// relative change < 1e-6), inflated by a 1.01 safety factor. Returns 0 for
// the zero matrix.
double estimate_lipschitz(const Eigen::MatrixXd& X);

// Indices i with |beta_i| > zero_tol, ascending.
std::vector<Eigen::Index> support(const Eigen::VectorXd& beta, double zero_tol = 1e-8);

}  // namespace slope
