#include "adnd/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "adnd/special_functions.hpp"

namespace adnd {

FittedModel FittedModel::from_state(const VariationalState<double>& state,
                                    std::shared_ptr<const NodeVocab> vocab,
                                    const HyperParams& hyper, const TruncationLevels& trunc,
                                    FitDiagnostics diagnostics) {
  FittedModel m;
  m.lambda_bar = state.lambda.array().colwise() / state.lambda.rowwise().sum().array();
  Eigen::VectorXd fractions(state.a_h.size() + 1);
  fractions.head(state.a_h.size()) = state.a_h.array() / (state.a_h + state.b_h).array();
  fractions[state.a_h.size()] = 1.0;
  m.beta_bar_h = stick_weights(fractions, /*truncate_last=*/true);
  m.vocab = std::move(vocab);
  m.hyper = hyper;
  m.trunc = trunc;
  m.diagnostics = std::move(diagnostics);
  return m;
}

FitResult fit_with_state(const EdgeCorpus& corpus, const HyperParams& hyper,
                         const TruncationLevels& trunc, const FitConfig& config) {
  if (config.max_sweeps < 1) throw std::invalid_argument("fit: max_sweeps must be >= 1");
  VariationalState<double> state = init_state<double>(corpus, hyper, trunc, config.seed);

  FitDiagnostics diag;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    update_document_level(state, corpus, hyper);
    update_corpus_level(state, corpus, hyper);
    const double elbo = compute_elbo(state, corpus, hyper);
    diag.elbo_trace.push_back(elbo);
    diag.sweeps = sweep + 1;
    if (std::isfinite(previous) && std::abs(elbo - previous) < config.rel_tol * std::abs(elbo)) {
      diag.converged = true;
      break;
    }
    previous = elbo;
  }
  FittedModel model =
      FittedModel::from_state(state, corpus.shared_vocab(), hyper, trunc, std::move(diag));
  return {std::move(model), std::move(state)};
}

FittedModel fit(const EdgeCorpus& corpus, const HyperParams& hyper, const TruncationLevels& trunc,
                const FitConfig& config) {
  return fit_with_state(corpus, hyper, trunc, config).model;
}

double predictive_log_likelihood(const FittedModel& model, const Edge& edge) {
  const Eigen::Index dim = model.lambda_bar.cols();
  if (static_cast<Eigen::Index>(edge.sender) >= dim || static_cast<Eigen::Index>(edge.receiver) >= dim) {
    throw std::out_of_range("predictive_log_likelihood: node index out of range");
  }
  const Eigen::Index k = model.lambda_bar.rows();
  Eigen::VectorXd terms(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double beta = model.beta_bar_h[i];
    // beta appears once per endpoint
    terms[i] = 2.0 * std::log(beta) + std::log(model.lambda_bar(i, edge.sender)) +
               std::log(model.lambda_bar(i, edge.receiver));
  }
  const double value = log_sum_exp(terms);
  if (std::isnan(value)) throw std::domain_error("predictive_log_likelihood: invalid model");
  return value < kLogFloor ? kLogFloor : value;
}

}  // namespace adnd
