#include "slope/sorted_l1.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "slope/errors.hpp"

namespace slope {

namespace {

void check_lengths(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const char* what) {
  if (a.size() != b.size()) throw ShapeError(std::string(what) + ": length mismatch");
}

// Indices of v sorted by decreasing magnitude, ties kept in input order.
std::vector<Eigen::Index> magnitude_order(const Eigen::VectorXd& v) {
  std::vector<Eigen::Index> order(v.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(v[a]) > std::abs(v[b]);
  });
  return order;
}

}  // namespace

double soft_threshold(double x, double lam) {
  if (x > lam) return x - lam;
  if (x < -lam) return x + lam;
  return 0.0;
}

double sorted_l1_norm(const Eigen::VectorXd& b, const Eigen::VectorXd& lam) {
  check_lengths(b, lam, "sorted_l1_norm");
  std::vector<double> mags(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) mags[i] = std::abs(b[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double out = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) out += lam[i] * mags[i];
  return out;
}

double sorted_l1_norm(const Eigen::VectorXd& b, const LambdaSequence& lam) {
  return sorted_l1_norm(b, lam.values());
}

Eigen::VectorXd prox_sorted_l1(const Eigen::VectorXd& v, const Eigen::VectorXd& lam) {
  check_lengths(v, lam, "prox_sorted_l1");
  const Eigen::Index p = v.size();
  const auto order = magnitude_order(v);

  // Pool adjacent violators of d_i = |v|_(i) - lam_i so that the block
  // averages come out non-increasing.
  struct Block {
    Eigen::Index begin;  // first sorted position in the block
    double sum;
    Eigen::Index len;
    double avg() const { return sum / static_cast<double>(len); }
  };
  std::vector<Block> stack;
  stack.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) {
    const double d = std::abs(v[order[static_cast<std::size_t>(i)]]) - lam[i];
    stack.push_back({i, d, 1});
    while (stack.size() >= 2 && stack[stack.size() - 2].avg() <= stack.back().avg()) {
      Block top = stack.back();
      stack.pop_back();
      stack.back().sum += top.sum;
      stack.back().len += top.len;
    }
  }

  Eigen::VectorXd out(p);
  for (const Block& blk : stack) {
    const double value = std::max(0.0, blk.avg());
    for (Eigen::Index i = blk.begin; i < blk.begin + blk.len; ++i) {
      const Eigen::Index j = order[static_cast<std::size_t>(i)];
      out[j] = v[j] < 0.0 ? -value : value;
    }
  }
  return out;
}

Eigen::VectorXd prox_sorted_l1(const Eigen::VectorXd& v, const LambdaSequence& lam) {
  return prox_sorted_l1(v, lam.values());
}

double dual_ball_scale(const Eigen::VectorXd& u, const Eigen::VectorXd& lam) {
  check_lengths(u, lam, "dual_ball_scale");
  std::vector<double> mags(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) mags[i] = std::abs(u[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double cum_u = 0.0, cum_lam = 0.0, scale = 1.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    cum_u += mags[i];
    cum_lam += lam[i];
    if (cum_lam <= 0.0) {
      if (cum_u > 0.0) throw DomainError("dual_ball_scale: needs lam_1 > 0");
      continue;
    }
    scale = std::max(scale, cum_u / cum_lam);
  }
  return scale;
}

}  // namespace slope
