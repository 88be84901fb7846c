#include "adnd/random.hpp"

#include <cmath>
#include <stdexcept>

namespace adnd {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) {
  // FNV-1a over the tag
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : purpose) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(seed, h);
}

double Rng::uniform_open() {
  // 53 random mantissa bits, offset by half an ulp so 0 is unreachable.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be positive");
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

double Rng::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta: parameters must be positive");
  // Small shapes underflow the gamma draws; fall back to log-space via
  // Gamma(a) = Gamma(a + 1) * U^(1/a).
  const double log_x = std::log(gamma(a + 1.0)) + std::log(uniform_open()) / a;
  const double log_y = std::log(gamma(b + 1.0)) + std::log(uniform_open()) / b;
  const double m = std::max(log_x, log_y);
  const double x = std::exp(log_x - m);
  const double y = std::exp(log_y - m);
  return x / (x + y);
}

Eigen::VectorXd Rng::dirichlet(const Eigen::Ref<const Eigen::VectorXd>& concentration) {
  const Eigen::Index dim = concentration.size();
  Eigen::VectorXd log_draws(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double a = concentration[k];
    if (!(a > 0.0)) throw std::domain_error("dirichlet: concentration must be positive");
    log_draws[k] = std::log(gamma(a + 1.0)) + std::log(uniform_open()) / a;
  }
  const double peak = log_draws.maxCoeff();
  Eigen::VectorXd out = (log_draws.array() - peak).exp().matrix();
  return out / out.sum();
}

Eigen::VectorXd Rng::simplex_uniform(Eigen::Index dim) {
  Eigen::VectorXd out(dim);
  for (Eigen::Index k = 0; k < dim; ++k) out[k] = -std::log(uniform_open());
  return out / out.sum();
}

Eigen::Index Rng::categorical(const Eigen::Ref<const Eigen::VectorXd>& weights) {
  const double total = weights.sum();
  if (!(total > 0.0)) throw std::domain_error("categorical: weights must have positive mass");
  const double target = uniform_open() * total;
  double acc = 0.0;
  Eigen::Index last_positive = 0;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    last_positive = k;
    if (target < acc) return k;
  }
  return last_positive;
}

}  // namespace adnd
