#ifndef ADND_RANDOM_HPP
#define ADND_RANDOM_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace adnd {

// splitmix64 finalizer; mixes a run seed with a purpose tag so that
// independent consumers (split, init, tie-break draws, ...) get disjoint streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform_open();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_open(); }
  std::size_t uniform_index(std::size_t n);

  double gamma(double shape);
  double beta(double a, double b);
  Eigen::VectorXd dirichlet(const Eigen::Ref<const Eigen::VectorXd>& concentration);
  // Uniform on the probability simplex of the given dimension.
  Eigen::VectorXd simplex_uniform(Eigen::Index dim);
  // Draws an index with probability proportional to weights (need not be normalized).
  Eigen::Index categorical(const Eigen::Ref<const Eigen::VectorXd>& weights);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace adnd

#endif  // ADND_RANDOM_HPP
