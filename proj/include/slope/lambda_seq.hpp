#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

namespace slope {

enum class LambdaKind { BH, Heuristic, Constant, Custom };

std::string to_string(LambdaKind kind);

// Parameters the generated sequences were built from. Meaningless for
// Custom sequences loaded from files.
struct SequenceParams {
  double q = 0.0;
  double delta = 0.0;
  double sigma = 1.0;
  std::int64_t n = 0;  // Heuristic only
};

// Non-increasing, non-negative tuning sequence with provenance.
//
// Generated sequences (BH / Heuristic / Constant) always have a strictly
// positive first element; Custom sequences only have to be non-increasing
// and non-negative, which admits the all-zero (unpenalized) case.
class LambdaSequence {
 public:
  // lambda_i = sigma * (1 + delta) * Phi^-1(1 - q*i/(2p)), i = 1..p,
  // clamped at zero should the quantile ever go negative.
  static LambdaSequence bh(Eigen::Index p, double q, double delta, double sigma);

  // First element as in bh (delta = 0); later elements carry the cross-product
  // correction factor sqrt(1 + sum_{j<i} lambda_j^2 / (n-i-2)) and are kept
  // non-increasing by taking the minimum with the previous element. Once
  // n-i-2 <= 0 the previous value is held.
  static LambdaSequence heuristic(Eigen::Index p, std::int64_t n, double q, double sigma);

  // All p entries equal to the first element of the matching bh sequence.
  static LambdaSequence constant(Eigen::Index p, double q, double delta, double sigma);

  // Wrap an externally supplied vector (validated, provenance Custom).
  static LambdaSequence custom(Eigen::VectorXd values);

  const Eigen::VectorXd& values() const { return values_; }
  double operator[](Eigen::Index i) const { return values_[i]; }
  Eigen::Index size() const { return values_.size(); }
  LambdaKind kind() const { return kind_; }
  const SequenceParams& params() const { return params_; }

  // True when every element is strictly larger than its successor.
  bool strictly_decreasing() const;

 private:
  LambdaSequence(Eigen::VectorXd values, LambdaKind kind, SequenceParams params);

  Eigen::VectorXd values_;
  LambdaKind kind_;
  SequenceParams params_;
};

}  // namespace slope
