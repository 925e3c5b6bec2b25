#pragma once

#include <cstdint>
#include <random>

#include "slope/solver.hpp"

namespace slope {

// Simulation input: Gaussian design with N(0, 1/n) entries, k-sparse signal
// with equal positive amplitudes on the first k coordinates, Gaussian noise.
struct GeneratorSpec {
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  Eigen::Index k = 0;
  double amplitude = 0.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Deterministic standard-normal stream: Box-Muller over a seeded mt19937_64.
// Bit-stable within one build of the artifact.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : eng_(seed) {}
  double next();

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// SplitMix-style mixing of a master seed and an index; replicate streams
// derived this way never collide in practice.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Draws X, builds b0, draws eps and forms y = X b0 + eps. Pure function of
// the spec.
Dataset generate(const GeneratorSpec& spec);

// Signal strengths used in the study: 2*sigma*(1+delta)*sqrt(2 log p) and
// 0.9*sigma*sqrt(2 log p).
double amplitude_strong(Eigen::Index p, double sigma, double delta);
double amplitude_weak(Eigen::Index p, double sigma);

// Grid dimensions p = round(0.05 * n^1.5) and k = round(n^alpha), rounded
// half to even.
Eigen::Index grid_p(Eigen::Index n);
Eigen::Index grid_k(Eigen::Index n, double alpha);

}  // namespace slope
