#ifndef ADND_SPECIAL_FUNCTIONS_HPP
#define ADND_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <concepts>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace adnd {

// Digamma for positive arguments. Shifts x up past 10 with the recurrence
// psi(x) = psi(x + 1) - 1/x, then applies the asymptotic series.
template <std::floating_point Scalar>
Scalar digamma(Scalar x) {
  if (!(x > Scalar(0))) {
    throw std::domain_error("digamma: argument must be positive");
  }
  Scalar shift(0);
  while (x < Scalar(10)) {
    shift -= Scalar(1) / x;
    x += Scalar(1);
  }
  const Scalar inv = Scalar(1) / x;
  const Scalar inv2 = inv * inv;
  // Bernoulli terms B_2k / (2k): 1/12, -1/120, 1/252, -1/240, 1/132, -691/32760, 1/12
  const Scalar series =
      inv2 * (Scalar(1) / 12 -
              inv2 * (Scalar(1) / 120 -
                      inv2 * (Scalar(1) / 252 -
                              inv2 * (Scalar(1) / 240 -
                                      inv2 * (Scalar(1) / 132 -
                                              inv2 * (Scalar(691) / 32760 - inv2 * (Scalar(1) / 12)))))));
  return shift + std::log(x) - Scalar(0.5) * inv - series;
}

// Coefficient-wise digamma over any dense expression.
template <typename Derived>
auto digamma(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.derived().unaryExpr([](Scalar v) { return digamma(v); }).eval();
}

/// log(sum(exp(x))) with max subtraction. Returns -inf for an empty or
/// all -inf input.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) return -std::numeric_limits<Scalar>::infinity();
  const Scalar peak = x.maxCoeff();
  if (!std::isfinite(peak)) return peak;
  return peak + std::log((x.derived().array() - peak).exp().sum());
}

/// Replaces each row r by exp(r - logsumexp(r)), i.e. a softmax that
/// cannot overflow.
template <typename Derived>
void exp_normalize_rows(Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    const auto peak = row.maxCoeff();
    row.array() = (row.array() - peak).exp();
    row /= row.sum();
  }
}

// Natural log of the multivariate beta function, sum(lgamma(a)) - lgamma(sum(a)).
template <typename Derived>
typename Derived::Scalar log_multivariate_beta(const Eigen::DenseBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Scalar acc(0);
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += std::lgamma(a.derived().coeff(i));
  return acc - std::lgamma(a.derived().sum());
}

}  // namespace adnd

#endif  // ADND_SPECIAL_FUNCTIONS_HPP
