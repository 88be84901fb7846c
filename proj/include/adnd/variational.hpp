#ifndef ADND_VARIATIONAL_HPP
#define ADND_VARIATIONAL_HPP

// Truncated two-level stick-breaking HDP with separate sender (A) and
// receiver (B) document-level mixtures over shared corpus-level topics.
// All containers are templated on the scalar; double is the instantiation
// used by the fitting driver.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "adnd/graph.hpp"
#include "adnd/random.hpp"
#include "adnd/special_functions.hpp"

namespace adnd {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct HyperParams {
  double eta = 1.0;    // symmetric Dirichlet concentration of the topic base measure
  double gamma = 1.0;  // corpus-level DP concentration
  double tau = 1.0;    // sender / receiver DP concentration

  void validate() const {
    if (!(eta > 0.0) || !(gamma > 0.0) || !(tau > 0.0)) {
      throw std::invalid_argument("hyperparameters eta, gamma, tau must be positive");
    }
  }
  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

struct TruncationLevels {
  int k_h = 50;  // corpus-level topics
  int k_a = 15;  // sender-side document topics
  int k_b = 15;  // receiver-side document topics

  void validate() const {
    if (k_h < 2 || k_a < 1 || k_b < 1) {
      throw std::invalid_argument("truncations require k_h >= 2, k_a >= 1, k_b >= 1");
    }
    if (k_h < k_a || k_h < k_b) throw std::invalid_argument("k_h must be >= max(k_a, k_b)");
  }
  friend bool operator==(const TruncationLevels&, const TruncationLevels&) = default;
};

/// Stick-breaking weights w_i = b_i * prod_{l<i} (1 - b_l).
///
/// With `truncate_last` the final weight is replaced by the mass left
/// before it, so the result sums to one; otherwise the sum may fall short.
template <typename Derived>
Vector<typename Derived::Scalar> stick_weights(const Eigen::MatrixBase<Derived>& beta_prime,
                                               bool truncate_last) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = beta_prime.size();
  Vector<Scalar> out(k);
  Scalar remaining(1);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Scalar b = beta_prime.derived().coeff(i);
    if (!(b >= Scalar(0) && b <= Scalar(1))) {
      throw std::domain_error("stick_weights: fractions must lie in [0, 1]");
    }
    if (truncate_last && i == k - 1) {
      out[i] = remaining;
    } else {
      out[i] = b * remaining;
      remaining *= Scalar(1) - b;
    }
  }
  return out;
}

/// E_q[log beta_k] for k = 1..K under independent Beta(a_k, b_k) stick
/// fractions, K = a.size() + 1. The K-th stick takes the remaining mass.
template <typename DerivedA, typename DerivedB>
Vector<typename DerivedA::Scalar> expected_log_sticks(const Eigen::MatrixBase<DerivedA>& a,
                                                      const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.size() != b.size()) throw std::invalid_argument("expected_log_sticks: size mismatch");
  const Eigen::Index k = a.size() + 1;
  Vector<Scalar> out(k);
  Scalar cumulative(0);
  for (Eigen::Index i = 0; i + 1 < k; ++i) {
    const Scalar ai = a.derived().coeff(i);
    const Scalar bi = b.derived().coeff(i);
    if (!(ai > Scalar(0)) || !(bi > Scalar(0))) {
      throw std::domain_error("expected_log_sticks: beta parameters must be positive");
    }
    const Scalar psi_total = digamma(ai + bi);
    out[i] = digamma(ai) - psi_total + cumulative;
    cumulative += digamma(bi) - psi_total;
  }
  out[k - 1] = cumulative;
  return out;
}

template <typename Scalar>
struct VariationalState {
  Matrix<Scalar> lambda;     // K_H x (W+1) Dirichlet parameters of q(phi_i)
  Vector<Scalar> a_h, b_h;   // K_H - 1 corpus-level stick parameters
  Vector<Scalar> a_a, b_a;   // K_A - 1 sender sticks
  Vector<Scalar> a_b, b_b;   // K_B - 1 receiver sticks
  Matrix<Scalar> varphi_a;   // K_A x K_H, q(c_t^A)
  Matrix<Scalar> varphi_b;   // K_B x K_H, q(c_t^B)
  Matrix<Scalar> zeta_a;     // N x K_A, q(z_n^A)
  Matrix<Scalar> zeta_b;     // N x K_B, q(z_n^B)
};

namespace detail {

template <typename Scalar>
Matrix<Scalar> expected_log_topics(const Matrix<Scalar>& lambda) {
  Matrix<Scalar> out = digamma(lambda);
  const Vector<Scalar> row_psi = digamma(lambda.rowwise().sum());
  out.colwise() -= row_psi;
  return out;
}

// counts(t, w) = sum_n resp(n, t) * 1(token_n == w)
template <typename Scalar>
Matrix<Scalar> token_counts(const Matrix<Scalar>& resp, const std::vector<NodeIndex>& tokens,
                            Eigen::Index dimension) {
  Matrix<Scalar> counts = Matrix<Scalar>::Zero(resp.cols(), dimension);
  for (std::size_t n = 0; n < tokens.size(); ++n) {
    counts.col(tokens[n]) += resp.row(static_cast<Eigen::Index>(n)).transpose();
  }
  return counts;
}

// Beta(1, conc) sticks: a_t = 1 + n_t, b_t = conc + sum_{s>t} n_s over the first K-1 sticks.
template <typename Scalar>
void update_sticks(const Vector<Scalar>& usage, Scalar concentration, Vector<Scalar>& a,
                   Vector<Scalar>& b) {
  const Eigen::Index k = usage.size();
  a.resize(k - 1);
  b.resize(k - 1);
  Scalar tail(0);
  for (Eigen::Index t = k - 1; t >= 1; --t) {
    tail += usage[t];
    a[t - 1] = Scalar(1) + usage[t - 1];
    b[t - 1] = concentration + tail;
  }
}

template <typename Scalar>
Scalar entropy_rows(const Matrix<Scalar>& p) {
  Scalar h(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar v = p.data()[i];
    if (v > Scalar(0)) h -= v * std::log(v);
  }
  return h;
}

// Sum over sticks of E_q[log Beta(1, conc)] + H(q) for q = Beta(a, b).
template <typename Scalar>
Scalar stick_prior_plus_entropy(const Vector<Scalar>& a, const Vector<Scalar>& b, Scalar conc) {
  Scalar total(0);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Scalar psi_a = digamma(a[i]);
    const Scalar psi_b = digamma(b[i]);
    const Scalar psi_ab = digamma(a[i] + b[i]);
    const Scalar log_prior = std::log(conc) + (conc - Scalar(1)) * (psi_b - psi_ab);
    const Scalar log_beta_fn = std::lgamma(a[i]) + std::lgamma(b[i]) - std::lgamma(a[i] + b[i]);
    const Scalar entropy = log_beta_fn - (a[i] - Scalar(1)) * psi_a - (b[i] - Scalar(1)) * psi_b +
                           (a[i] + b[i] - Scalar(2)) * psi_ab;
    total += log_prior + entropy;
  }
  return total;
}

struct Tokens {
  std::vector<NodeIndex> senders;
  std::vector<NodeIndex> receivers;
};

inline Tokens split_tokens(const EdgeCorpus& corpus) {
  Tokens t;
  t.senders.reserve(corpus.size());
  t.receivers.reserve(corpus.size());
  for (const Edge& e : corpus.edges()) {
    t.senders.push_back(e.sender);
    t.receivers.push_back(e.receiver);
  }
  return t;
}

// One side (A or B) of the document-level sweep: zeta, then varphi, then sticks.
template <typename Scalar>
void update_side(const Matrix<Scalar>& elog_phi, const Vector<Scalar>& elog_beta_h,
                 const std::vector<NodeIndex>& tokens, Scalar tau, Matrix<Scalar>& zeta,
                 Matrix<Scalar>& varphi, Vector<Scalar>& a, Vector<Scalar>& b) {
  const Vector<Scalar> elog_beta = expected_log_sticks(a, b);
  const Matrix<Scalar> topic_loglik = varphi * elog_phi;  // K x (W+1)
  for (std::size_t n = 0; n < tokens.size(); ++n) {
    zeta.row(static_cast<Eigen::Index>(n)) =
        (topic_loglik.col(tokens[n]) + elog_beta).transpose();
  }
  exp_normalize_rows(zeta);

  const Matrix<Scalar> counts = token_counts(zeta, tokens, elog_phi.cols());
  varphi = counts * elog_phi.transpose();
  varphi.rowwise() += elog_beta_h.transpose();
  exp_normalize_rows(varphi);

  update_sticks<Scalar>(zeta.colwise().sum().transpose(), tau, a, b);
}

}  // namespace detail

template <typename Scalar = double>
VariationalState<Scalar> init_state(const EdgeCorpus& corpus, const HyperParams& hyper,
                                    const TruncationLevels& trunc, std::uint64_t seed) {
  if (corpus.empty()) throw std::invalid_argument("init_state: empty corpus");
  hyper.validate();
  trunc.validate();
  const auto n = static_cast<Eigen::Index>(corpus.size());
  const auto dim = static_cast<Eigen::Index>(corpus.vocab().dimension());
  Rng rng(seed);

  VariationalState<Scalar> s;
  const double noise_hi = static_cast<double>(n) / (static_cast<double>(trunc.k_h) * dim);
  s.lambda.resize(trunc.k_h, dim);
  // column-major fill order is part of the seeded contract
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < trunc.k_h; ++i)
      s.lambda(i, j) = Scalar(hyper.eta + rng.uniform(0.0, noise_hi));

  s.a_h = Vector<Scalar>::Ones(trunc.k_h - 1);
  s.b_h = Vector<Scalar>::Constant(trunc.k_h - 1, Scalar(hyper.gamma));
  s.a_a = Vector<Scalar>::Ones(trunc.k_a - 1);
  s.b_a = Vector<Scalar>::Constant(trunc.k_a - 1, Scalar(hyper.tau));
  s.a_b = Vector<Scalar>::Ones(trunc.k_b - 1);
  s.b_b = Vector<Scalar>::Constant(trunc.k_b - 1, Scalar(hyper.tau));

  auto simplex_rows = [&rng](Eigen::Index rows, Eigen::Index cols) {
    Matrix<Scalar> m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) m.row(r) = rng.simplex_uniform(cols).template cast<Scalar>().transpose();
    return m;
  };
  s.varphi_a = simplex_rows(trunc.k_a, trunc.k_h);
  s.varphi_b = simplex_rows(trunc.k_b, trunc.k_h);
  s.zeta_a = simplex_rows(n, trunc.k_a);
  s.zeta_b = simplex_rows(n, trunc.k_b);
  return s;
}

/// Document-level coordinate ascent: sender side first (zeta, varphi,
/// sticks), then the receiver side with the receiver tokens.
template <typename Scalar>
void update_document_level(VariationalState<Scalar>& state, const EdgeCorpus& corpus,
                           const HyperParams& hyper) {
  const auto tokens = detail::split_tokens(corpus);
  const Matrix<Scalar> elog_phi = detail::expected_log_topics(state.lambda);
  const Vector<Scalar> elog_beta_h = expected_log_sticks(state.a_h, state.b_h);
  const Scalar tau(hyper.tau);
  detail::update_side(elog_phi, elog_beta_h, tokens.senders, tau, state.zeta_a, state.varphi_a,
                      state.a_a, state.b_a);
  detail::update_side(elog_phi, elog_beta_h, tokens.receivers, tau, state.zeta_b, state.varphi_b,
                      state.a_b, state.b_b);
}

/// Corpus-level updates of the shared stick parameters and the topic
/// Dirichlet parameters.
template <typename Scalar>
void update_corpus_level(VariationalState<Scalar>& state, const EdgeCorpus& corpus,
                         const HyperParams& hyper) {
  const auto tokens = detail::split_tokens(corpus);
  const Eigen::Index dim = state.lambda.cols();
  const Vector<Scalar> usage =
      (state.varphi_a.colwise().sum() + state.varphi_b.colwise().sum()).transpose();
  detail::update_sticks<Scalar>(usage, Scalar(hyper.gamma), state.a_h, state.b_h);

  const Matrix<Scalar> counts_a = detail::token_counts(state.zeta_a, tokens.senders, dim);
  const Matrix<Scalar> counts_b = detail::token_counts(state.zeta_b, tokens.receivers, dim);
  state.lambda = state.varphi_a.transpose() * counts_a + state.varphi_b.transpose() * counts_b;
  state.lambda.array() += Scalar(hyper.eta);
}

/// Evidence lower bound E_q[log p(x, z)] + H(q) of the truncated model.
template <typename Scalar>
Scalar compute_elbo(const VariationalState<Scalar>& state, const EdgeCorpus& corpus,
                    const HyperParams& hyper) {
  const auto tokens = detail::split_tokens(corpus);
  const Eigen::Index dim = state.lambda.cols();
  const Matrix<Scalar> elog_phi = detail::expected_log_topics(state.lambda);
  const Vector<Scalar> elog_beta_h = expected_log_sticks(state.a_h, state.b_h);

  auto side = [&](const Matrix<Scalar>& zeta, const Matrix<Scalar>& varphi,
                  const Vector<Scalar>& a, const Vector<Scalar>& b,
                  const std::vector<NodeIndex>& toks) {
    const Vector<Scalar> elog_beta = expected_log_sticks(a, b);
    const Matrix<Scalar> counts = detail::token_counts(zeta, toks, dim);
    Scalar total = varphi.cwiseProduct(counts * elog_phi.transpose()).sum();  // tokens
    total += (varphi * elog_beta_h).sum();                                    // c | beta_h
    total += (zeta * elog_beta).sum();                                        // z | beta
    total += detail::stick_prior_plus_entropy(a, b, Scalar(hyper.tau));
    total += detail::entropy_rows(varphi) + detail::entropy_rows(zeta);
    return total;
  };

  Scalar elbo = side(state.zeta_a, state.varphi_a, state.a_a, state.b_a, tokens.senders) +
                side(state.zeta_b, state.varphi_b, state.a_b, state.b_b, tokens.receivers);
  elbo += detail::stick_prior_plus_entropy(state.a_h, state.b_h, Scalar(hyper.gamma));

  const Scalar eta(hyper.eta);
  const Scalar log_prior_norm = std::lgamma(eta * Scalar(dim)) - Scalar(dim) * std::lgamma(eta);
  for (Eigen::Index i = 0; i < state.lambda.rows(); ++i) {
    const auto row = state.lambda.row(i);
    const Scalar total = row.sum();
    const Scalar psi_total = digamma(total);
    Scalar entropy = log_multivariate_beta(row) + (total - Scalar(dim)) * psi_total;
    for (Eigen::Index w = 0; w < dim; ++w) entropy -= (row[w] - Scalar(1)) * digamma(row[w]);
    elbo += log_prior_norm + (eta - Scalar(1)) * elog_phi.row(i).sum() + entropy;
  }
  return elbo;
}

}  // namespace adnd

#endif  // ADND_VARIATIONAL_HPP
