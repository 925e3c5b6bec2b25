#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slope/diagnostics.hpp"
#include "slope/lambda_seq.hpp"

namespace slope {

enum class Method { SlopeBH, SlopeHeur, Lasso };

std::string to_string(Method m);

enum class AmplitudeRule { Strong, Weak, Fixed };

// Monte Carlo grid over (n, alpha, delta). Dimensions per cell follow
// p = round(0.05 n^1.5), k = round(n^alpha); alpha below zero is admitted so
// a cell can have k = 0.
struct ExperimentConfig {
  std::vector<Eigen::Index> n_grid;
  std::vector<double> alpha_grid;
  std::vector<double> delta_grid{0.0};
  double q = 0.2;
  AmplitudeRule amplitude_rule = AmplitudeRule::Strong;
  double fixed_amplitude = 0.0;
  std::vector<Method> methods{Method::SlopeBH, Method::SlopeHeur, Method::Lasso};
  int replicates = 500;
  double sigma = 1.0;
  std::uint64_t master_seed = 1;
  double zero_tol = 1e-8;
  double solver_tol_rel = 1e-8;
  int solver_max_iter = 100000;

  void validate() const;
};

// Selection counts of one replicate under the usual convention: tpp is 1
// when k = 0 (nothing to find) and fdp guards the denominator with R v 1.
struct SelectionCounts {
  Eigen::Index V = 0;
  Eigen::Index TR = 0;
  Eigen::Index R = 0;
  Eigen::Index k = 0;
  double fdp = 0.0;
  double tpp = 0.0;
};

SelectionCounts selection_metrics(const Eigen::VectorXd& b0, const Eigen::VectorXd& beta,
                                  double zero_tol);

struct CellResult {
  Method method;
  Eigen::Index n = 0, p = 0, k = 0;
  double alpha = 0.0, delta = 0.0;
  double fdr = 0.0, fdr_se = 0.0;
  double power = 0.0, power_se = 0.0;  // NaN for k = 0 cells
  double mean_R = 0.0;
  int replicates_done = 0;
};

struct ExperimentReport {
  std::vector<CellResult> rows;
};

// Runs the full grid: per replicate, generate data once, fit every method,
// aggregate FDP/TPP means and standard errors in replicate order. Replicates
// whose solve carries no certificate are excluded; a cell aborts when more
// than 1% of its replicates are lost. Output is a pure function of the
// config, independent of the worker count.
ExperimentReport run_grid(const ExperimentConfig& config, int threads = 0);

// Benjamini-Hochberg step-up on orthogonal-design statistics y_tilde = X'y:
// reject the j_BH largest |y_tilde| where j_BH is the largest j with
// |y_tilde|_(j) >= sigma * Phi^-1(1 - j q / (2p)). Returns selected indices.
std::vector<Eigen::Index> bh_orthogonal(const Eigen::VectorXd& y_tilde, double q, double sigma);

// Empirical version of the FDR decomposition over the H_r regions: mean over
// replicates of sum_r (1/r) #{ i in S^c : |T_i| > lam_r, T in H_r }. Uses
// the same indicator events as the support counts, so per replicate it
// reproduces the plain FDP whenever the support characterization holds.
// Requires diagnostics computed at a = 1.
double fdr_decomposition(const std::vector<SupportDiagnostics>& replicate_diags,
                         const Eigen::VectorXd& b0, const LambdaSequence& lam);

// Config file (JSON, snake_case keys mirroring ExperimentConfig) and the
// report CSV with header
// method,n,p,k,alpha,delta,fdr,fdr_se,power,power_se,mean_R,replicates_done.
ExperimentConfig load_config(const std::string& path);
void write_report_csv(const ExperimentReport& report, std::ostream& out);

// Two stacked line charts (FDR with the nominal level, then power) as a
// static SVG.
void write_report_svg(const ExperimentReport& report, double q, const std::string& path);

}  // namespace slope
