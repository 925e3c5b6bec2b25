#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "slope/lambda_seq.hpp"
#include "slope/solver.hpp"

namespace slope {

// Support characterization of a solved instance: the score vector U at the
// estimate, the statistic T(a) = U + a*beta, the selected model size R, the
// unique region index r_star with T(a) in H_r, and the M/Gamma split of T(1)
// when ground truth is available.
struct SupportDiagnostics {
  Eigen::VectorXd U;
  Eigen::VectorXd T;
  Eigen::Index R = 0;
  std::optional<Eigen::Index> r_star;
  Eigen::VectorXd gamma_vec;  // empty without ground truth
  Eigen::VectorXd M;          // empty without ground truth
  bool theorem2_ok = false;
  bool theorem3_ok = false;
  double a = 1.0;
  double slack = 0.0;
};

struct QEventReport {
  bool q1 = false;
  bool q2 = false;
  bool q3 = false;
  Eigen::Index k_star = 0;
  double gamma_n = 0.0;
  std::vector<Eigen::Index> resolvent_set;
};

// Gradient of the negative least-squares loss, X'(y - X b).
Eigen::VectorXd score_vector(const Dataset& data, const Eigen::VectorXd& b);

// T(a) = U(beta_hat) + a * beta_hat for a > 0.
Eigen::VectorXd t_vector(const Dataset& data, const SlopeSolution& solution, double a = 1.0);

// Membership of w in H_r: partial sums of lam from j..r are strictly below
// the matching partial sums of sorted |w| for every j <= r, and partial sums
// from r+1..j dominate them for every j >= r+1. r = 0 checks only the upper
// family, r = p only the lower one.
bool hr_membership(const Eigen::VectorXd& w, const LambdaSequence& lam, Eigen::Index r);

// H_r^gamma: same inequalities with lam_i - gamma on the lower family and
// lam_i + gamma on the upper family.
bool hr_gamma_membership(const Eigen::VectorXd& w, const LambdaSequence& lam, Eigen::Index r,
                         double gamma);

// Checks the support characterization on a converged solution:
//   theorem2_ok  <=>  T(a) in H_R, inequalities relaxed by slack;
//   theorem3_ok  <=>  {|T_i| > lam_R + slack} subset of supp(beta_hat)
//                     subset of {|T_i| > lam_R - slack}, plus
//                     |U_i| >= lam_R - slack on the support and, for a
//                     strictly decreasing sequence, the converse containment.
// slack defaults to 10x the solver's effective tolerance. Throws
// CertificateError for unconverged solutions.
//
// The membership machinery is loss-agnostic; this overload instantiates the
// least-squares score. Pass a precomputed U to use another loss.
SupportDiagnostics verify_theorems(const Dataset& data, const SlopeSolution& solution,
                                   const LambdaSequence& lam, double a = 1.0,
                                   std::optional<double> slack = {}, double zero_tol = 1e-8);
SupportDiagnostics verify_theorems_with_score(const Eigen::VectorXd& score,
                                              const Dataset& data, const SlopeSolution& solution,
                                              const LambdaSequence& lam, double a,
                                              std::optional<double> slack, double zero_tol);

// M = X'eps + b0 with eps = y - X b0, Gamma = (I - X'X)(beta_hat - b0);
// T(1) = M + Gamma. Requires ground truth.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gamma_decomposition(const Dataset& data,
                                                                const SlopeSolution& solution);

// supp(b0) plus the k_star - k null indices with the largest |X_i' eps|,
// ties broken by lower index. Requires ground truth and k <= k_star <= p.
std::vector<Eigen::Index> resolvent_set(const Dataset& data, Eigen::Index k_star);

// Proof-event probes:
//   q1: supp(b0) union supp(beta_hat) inside the resolvent set;
//   q2: ||Gamma||_inf <= gamma(n) with
//       gamma(n) = c_q * sqrt(k_star^2 log p / n) * lambda^BH_{k_star};
//   q3: ||eps||_2 / (sigma sqrt(n)) <= 1 + 1/k_star.
QEventReport q_events(const Dataset& data, const SlopeSolution& solution, Eigen::Index k_star,
                      double c_q, double q, double zero_tol = 1e-8);

}  // namespace slope
