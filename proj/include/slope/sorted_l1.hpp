#pragma once

#include <Eigen/Core>

#include "slope/lambda_seq.hpp"

namespace slope {

// Scalar shrinkage: x-lam for x > lam, 0 for |x| <= lam, x+lam for x < -lam.
double soft_threshold(double x, double lam);

// J_lam(b) = sum_i lam_i * |b|_(i) with |b|_(1) >= ... >= |b|_(p).
double sorted_l1_norm(const Eigen::VectorXd& b, const Eigen::VectorXd& lam);
double sorted_l1_norm(const Eigen::VectorXd& b, const LambdaSequence& lam);

// argmin_b 0.5*||v-b||^2 + J_lam(b).
//
// Sorts |v| in decreasing order (stable on ties), runs a stack pass that
// pools adjacent violators of (|v|_(i) - lam_i) into block averages, clamps
// at zero, then undoes the sort and restores signs. Exact in O(p log p).
Eigen::VectorXd prox_sorted_l1(const Eigen::VectorXd& v, const Eigen::VectorXd& lam);
Eigen::VectorXd prox_sorted_l1(const Eigen::VectorXd& v, const LambdaSequence& lam);

// Smallest factor s >= 1 such that u/s lies in the dual unit ball
// { w : sum of the j largest |w_i| <= lam_1 + ... + lam_j for every j }.
// Requires lam_1 > 0. Used by the solver's duality-gap certificate.
double dual_ball_scale(const Eigen::VectorXd& u, const Eigen::VectorXd& lam);

}  // namespace slope
