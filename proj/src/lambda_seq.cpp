#include "slope/lambda_seq.hpp"

#include <algorithm>
#include <cmath>

#include "slope/errors.hpp"
#include "slope/gauss.hpp"

namespace slope {

namespace {

void check_common(Eigen::Index p, double q, double sigma) {
  if (p < 1) throw DomainError("lambda sequence: p must be positive");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("lambda sequence: q must lie in (0,1)");
  if (!(sigma > 0.0)) throw DomainError("lambda sequence: sigma must be positive");
}

}  // namespace

std::string to_string(LambdaKind kind) {
  switch (kind) {
    case LambdaKind::BH: return "bh";
    case LambdaKind::Heuristic: return "heur";
    case LambdaKind::Constant: return "const";
    case LambdaKind::Custom: return "custom";
  }
  return "?";
}

LambdaSequence::LambdaSequence(Eigen::VectorXd values, LambdaKind kind, SequenceParams params)
    : values_(std::move(values)), kind_(kind), params_(params) {
  if (values_.size() == 0) throw DomainError("lambda sequence: empty");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw DomainError("lambda sequence: entries must be finite and non-negative");
    }
    if (i > 0 && values_[i] > values_[i - 1]) {
      throw DomainError("lambda sequence: entries must be non-increasing");
    }
  }
  if (kind_ != LambdaKind::Custom && !(values_[0] > 0.0)) {
    throw DomainError("lambda sequence: generated sequences must be non-zero");
  }
}

LambdaSequence LambdaSequence::bh(Eigen::Index p, double q, double delta, double sigma) {
  check_common(p, q, sigma);
  if (delta < 0.0) throw DomainError("lambda sequence: delta must be non-negative");
  Eigen::VectorXd v(p);
  const double scale = sigma * (1.0 + delta);
  for (Eigen::Index i = 1; i <= p; ++i) {
    const double u = 1.0 - q * static_cast<double>(i) / (2.0 * static_cast<double>(p));
    v[i - 1] = std::max(0.0, scale * normal_quantile(u));
  }
  return LambdaSequence(std::move(v), LambdaKind::BH, {q, delta, sigma, 0});
}

LambdaSequence LambdaSequence::heuristic(Eigen::Index p, std::int64_t n, double q, double sigma) {
  check_common(p, q, sigma);
  if (n <= 3) throw DomainError("lambda sequence: heuristic needs n > 3");
  Eigen::VectorXd v(p);
  v[0] = sigma * normal_quantile(1.0 - q / (2.0 * static_cast<double>(p)));
  double sum_sq = v[0] * v[0];
  for (Eigen::Index i = 2; i <= p; ++i) {
    const double dof = static_cast<double>(n) - static_cast<double>(i) - 2.0;
    if (dof <= 0.0) {
      v[i - 1] = v[i - 2];
    } else {
      const double base =
          sigma * normal_quantile(1.0 - q * static_cast<double>(i) / (2.0 * static_cast<double>(p)));
      const double corrected = base * std::sqrt(1.0 + sum_sq / dof);
      v[i - 1] = std::max(0.0, std::min(v[i - 2], corrected));
    }
    sum_sq += v[i - 1] * v[i - 1];
  }
  return LambdaSequence(std::move(v), LambdaKind::Heuristic, {q, 0.0, sigma, n});
}

LambdaSequence LambdaSequence::constant(Eigen::Index p, double q, double delta, double sigma) {
  check_common(p, q, sigma);
  if (delta < 0.0) throw DomainError("lambda sequence: delta must be non-negative");
  const double first =
      sigma * (1.0 + delta) * normal_quantile(1.0 - q / (2.0 * static_cast<double>(p)));
  Eigen::VectorXd v = Eigen::VectorXd::Constant(p, std::max(0.0, first));
  return LambdaSequence(std::move(v), LambdaKind::Constant, {q, delta, sigma, 0});
}

LambdaSequence LambdaSequence::custom(Eigen::VectorXd values) {
  return LambdaSequence(std::move(values), LambdaKind::Custom, {});
}

bool LambdaSequence::strictly_decreasing() const {
  for (Eigen::Index i = 1; i < values_.size(); ++i) {
    if (!(values_[i] < values_[i - 1])) return false;
  }
  return true;
}

}  // namespace slope
