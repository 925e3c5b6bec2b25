#include "slope/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "slope/errors.hpp"
#include "slope/gauss.hpp"

namespace slope {

namespace {

std::vector<double> sorted_magnitudes(const Eigen::VectorXd& w) {
  std::vector<double> mags(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) mags[i] = std::abs(w[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  return mags;
}

bool contains(const std::vector<Eigen::Index>& sorted_set, Eigen::Index i) {
  return std::binary_search(sorted_set.begin(), sorted_set.end(), i);
}

}  // namespace

Eigen::VectorXd score_vector(const Dataset& data, const Eigen::VectorXd& b) {
  if (b.size() != data.p()) throw ShapeError("score_vector: length mismatch");
  return data.X.transpose() * (data.y - data.X * b);
}

Eigen::VectorXd t_vector(const Dataset& data, const SlopeSolution& solution, double a) {
  if (!(a > 0.0)) throw DomainError("t_vector: a must be positive");
  return score_vector(data, solution.beta) + a * solution.beta;
}

bool hr_gamma_membership(const Eigen::VectorXd& w, const LambdaSequence& lam, Eigen::Index r,
                         double gamma) {
  if (w.size() != lam.size()) throw ShapeError("hr_membership: length mismatch");
  if (gamma < 0.0) throw DomainError("hr_membership: gamma must be non-negative");
  const Eigen::Index p = w.size();
  if (r < 0 || r > p) throw DomainError("hr_membership: r out of range");
  const auto mags = sorted_magnitudes(w);
  const Eigen::VectorXd& lv = lam.values();

  // Lower family: for every j <= r, sum_{i=j..r} (lam_i - gamma) < sum |w|_(i).
  // Scan j = r down to 1 keeping suffix sums.
  double sum_lam = 0.0, sum_w = 0.0;
  for (Eigen::Index j = r; j >= 1; --j) {
    sum_lam += lv[j - 1] - gamma;
    sum_w += mags[static_cast<std::size_t>(j - 1)];
    if (!(sum_lam < sum_w)) return false;
  }
  // Upper family: for every j >= r+1, sum_{i=r+1..j} (lam_i + gamma) >= sum |w|_(i).
  sum_lam = 0.0;
  sum_w = 0.0;
  for (Eigen::Index j = r + 1; j <= p; ++j) {
    sum_lam += lv[j - 1] + gamma;
    sum_w += mags[static_cast<std::size_t>(j - 1)];
    if (!(sum_lam >= sum_w)) return false;
  }
  return true;
}

bool hr_membership(const Eigen::VectorXd& w, const LambdaSequence& lam, Eigen::Index r) {
  return hr_gamma_membership(w, lam, r, 0.0);
}

SupportDiagnostics verify_theorems_with_score(const Eigen::VectorXd& score,
                                              const Dataset& data, const SlopeSolution& solution,
                                              const LambdaSequence& lam, double a,
                                              std::optional<double> slack_opt, double zero_tol) {
  if (!solution.converged) {
    throw CertificateError("verify_theorems: solution carries no convergence certificate");
  }
  if (!(a > 0.0)) throw DomainError("verify_theorems: a must be positive");
  const double slack = slack_opt.value_or(10.0 * solution.tolerance);
  if (slack < 0.0) throw DomainError("verify_theorems: slack must be non-negative");

  SupportDiagnostics diag;
  diag.a = a;
  diag.slack = slack;
  diag.U = score;
  diag.T = score + a * solution.beta;

  const auto supp = support(solution.beta, zero_tol);
  diag.R = static_cast<Eigen::Index>(supp.size());
  const Eigen::Index p = lam.size();
  const Eigen::VectorXd& lv = lam.values();

  // The exact sets H_r are disjoint, so scan for the unique member first and
  // fall back to the slack-relaxed scan only when the point sits on a
  // boundary at working precision.
  std::vector<Eigen::Index> exact, relaxed;
  for (Eigen::Index r = 0; r <= p; ++r) {
    if (hr_membership(diag.T, lam, r)) exact.push_back(r);
    else if (slack > 0.0 && hr_gamma_membership(diag.T, lam, r, slack)) relaxed.push_back(r);
  }
  if (exact.size() == 1) {
    diag.r_star = exact.front();
  } else if (!exact.empty() || !relaxed.empty()) {
    std::vector<Eigen::Index> all = exact;
    all.insert(all.end(), relaxed.begin(), relaxed.end());
    diag.r_star = contains(all, diag.R) ? diag.R : all.front();
  }

  diag.theorem2_ok = hr_gamma_membership(diag.T, lam, diag.R, slack);

  if (diag.R == 0) {
    // Empty model: no coordinate may clear even the largest threshold.
    diag.theorem3_ok = true;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (std::abs(diag.T[i]) > lv[0] + slack) diag.theorem3_ok = false;
    }
  } else {
    const double lam_r = lv[diag.R - 1];
    bool ok = true;
    for (Eigen::Index i = 0; i < p; ++i) {
      const bool selected = contains(supp, i);
      if (std::abs(diag.T[i]) > lam_r + slack && !selected) ok = false;
      if (selected && !(std::abs(diag.T[i]) > lam_r - slack)) ok = false;
      if (selected && !(std::abs(diag.U[i]) >= lam_r - slack)) ok = false;
      if (lam.strictly_decreasing() && std::abs(diag.U[i]) >= lam_r + slack && !selected) {
        ok = false;
      }
    }
    diag.theorem3_ok = ok;
  }

  if (data.b0) {
    auto [m, gamma] = gamma_decomposition(data, solution);
    diag.M = std::move(m);
    diag.gamma_vec = std::move(gamma);
  }
  return diag;
}

SupportDiagnostics verify_theorems(const Dataset& data, const SlopeSolution& solution,
                                   const LambdaSequence& lam, double a,
                                   std::optional<double> slack, double zero_tol) {
  return verify_theorems_with_score(score_vector(data, solution.beta), data, solution, lam, a,
                                    slack, zero_tol);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gamma_decomposition(const Dataset& data,
                                                                const SlopeSolution& solution) {
  if (!data.b0) throw DataError("gamma_decomposition: ground truth b0 required");
  const Eigen::VectorXd eps = data.y - data.X * (*data.b0);
  Eigen::VectorXd m = data.X.transpose() * eps + *data.b0;
  const Eigen::VectorXd diff = solution.beta - *data.b0;
  Eigen::VectorXd gamma = diff - data.X.transpose() * (data.X * diff);
  return {std::move(m), std::move(gamma)};
}

std::vector<Eigen::Index> resolvent_set(const Dataset& data, Eigen::Index k_star) {
  if (!data.b0) throw DataError("resolvent_set: ground truth b0 required");
  const Eigen::Index p = data.p();
  std::vector<Eigen::Index> s;  // supp(b0)
  for (Eigen::Index i = 0; i < p; ++i) {
    if ((*data.b0)[i] != 0.0) s.push_back(i);
  }
  const Eigen::Index k = static_cast<Eigen::Index>(s.size());
  if (k_star < k || k_star > p) throw DomainError("resolvent_set: k_star out of [k, p]");

  const Eigen::VectorXd eps = data.y - data.X * (*data.b0);
  const Eigen::VectorXd scores = (data.X.transpose() * eps).cwiseAbs();
  std::vector<Eigen::Index> nulls;
  for (Eigen::Index i = 0; i < p; ++i) {
    if ((*data.b0)[i] == 0.0) nulls.push_back(i);
  }
  std::stable_sort(nulls.begin(), nulls.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return scores[a] > scores[b]; });
  s.insert(s.end(), nulls.begin(), nulls.begin() + (k_star - k));
  std::sort(s.begin(), s.end());
  return s;
}

QEventReport q_events(const Dataset& data, const SlopeSolution& solution, Eigen::Index k_star,
                      double c_q, double q, double zero_tol) {
  if (!data.b0 || !data.sigma) throw DataError("q_events: ground truth b0 and sigma required");
  if (!(c_q > 0.0)) throw DomainError("q_events: c_q must be positive");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("q_events: q must lie in (0,1)");
  if (k_star < 1) throw DomainError("q_events: k_star must be positive");

  QEventReport rep;
  rep.k_star = k_star;
  rep.resolvent_set = resolvent_set(data, k_star);

  rep.q1 = true;
  for (Eigen::Index i = 0; i < data.p(); ++i) {
    const bool active = (*data.b0)[i] != 0.0 || std::abs(solution.beta[i]) > zero_tol;
    if (active && !contains(rep.resolvent_set, i)) rep.q1 = false;
  }

  const auto [m, gamma] = gamma_decomposition(data, solution);
  const double n = static_cast<double>(data.n());
  const double p = static_cast<double>(data.p());
  const double ks = static_cast<double>(k_star);
  const double lam_bh_kstar =
      *data.sigma *
      normal_quantile(1.0 - q * ks / (2.0 * p));
  rep.gamma_n = c_q * std::sqrt(ks * ks * std::log(p) / n) * lam_bh_kstar;
  rep.q2 = gamma.cwiseAbs().maxCoeff() <= rep.gamma_n;

  const Eigen::VectorXd eps = data.y - data.X * (*data.b0);
  rep.q3 = eps.norm() / (*data.sigma * std::sqrt(n)) <= 1.0 + 1.0 / ks;
  return rep;
}

}  // namespace slope
