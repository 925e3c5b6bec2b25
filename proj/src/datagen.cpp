#include "slope/datagen.hpp"

#include <cfenv>
#include <cmath>

#include "slope/errors.hpp"

namespace slope {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Round half to even (the default IEEE rounding of nearbyint).
Eigen::Index round_half_even(double x) {
  return static_cast<Eigen::Index>(std::nearbyint(x));
}

}  // namespace

void GeneratorSpec::validate() const {
  if (n < 1 || p < 1) throw DomainError("generator: n and p must be positive");
  if (k < 0 || k > p) throw DomainError("generator: k must lie in [0, p]");
  if (!(sigma > 0.0)) throw DomainError("generator: sigma must be positive");
  if (!std::isfinite(amplitude)) throw DomainError("generator: amplitude must be finite");
}

double NormalStream::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Uniforms strictly inside (0,1): 53-bit mantissa plus a half-step offset.
  const double u1 = (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(kTwoPi * u2);
  have_spare_ = true;
  return radius * std::cos(kTwoPi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x1F123BB5ull));
}

Dataset generate(const GeneratorSpec& spec) {
  spec.validate();
  NormalStream stream(spec.seed);

  Dataset data;
  data.X.resize(spec.n, spec.p);
  const double col_sd = 1.0 / std::sqrt(static_cast<double>(spec.n));
  for (Eigen::Index j = 0; j < spec.p; ++j) {
    for (Eigen::Index i = 0; i < spec.n; ++i) {
      data.X(i, j) = col_sd * stream.next();
    }
  }

  Eigen::VectorXd b0 = Eigen::VectorXd::Zero(spec.p);
  b0.head(spec.k).setConstant(spec.amplitude);

  Eigen::VectorXd eps(spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) eps[i] = spec.sigma * stream.next();

  data.y = data.X * b0 + eps;
  data.b0 = std::move(b0);
  data.sigma = spec.sigma;
  return data;
}

double amplitude_strong(Eigen::Index p, double sigma, double delta) {
  if (p < 2) throw DomainError("amplitude_strong: p must be at least 2");
  return 2.0 * sigma * (1.0 + delta) * std::sqrt(2.0 * std::log(static_cast<double>(p)));
}

double amplitude_weak(Eigen::Index p, double sigma) {
  if (p < 2) throw DomainError("amplitude_weak: p must be at least 2");
  return 0.9 * sigma * std::sqrt(2.0 * std::log(static_cast<double>(p)));
}

Eigen::Index grid_p(Eigen::Index n) {
  if (n < 1) throw DomainError("grid_p: n must be positive");
  return round_half_even(0.05 * std::pow(static_cast<double>(n), 1.5));
}

Eigen::Index grid_k(Eigen::Index n, double alpha) {
  if (n < 1) throw DomainError("grid_k: n must be positive");
  if (!(alpha < 1.0)) throw DomainError("grid_k: alpha must be below 1");
  return round_half_even(std::pow(static_cast<double>(n), alpha));
}

}  // namespace slope
