#ifndef ADND_MODEL_HPP
#define ADND_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "adnd/graph.hpp"
#include "adnd/variational.hpp"

namespace adnd {

// Probabilities below exp(-745) are clamped to this log value.
inline constexpr double kLogFloor = -745.0;

struct FitConfig {
  int max_sweeps = 200;
  double rel_tol = 1e-5;
  std::uint64_t seed = 0;
};

struct FitDiagnostics {
  std::vector<double> elbo_trace;  // ELBO after each full sweep
  int sweeps = 0;
  bool converged = false;
};

// Point summary of a fitted model: row-normalized topic means and the
// expected corpus-level stick weights. Immutable once built.
struct FittedModel {
  Eigen::MatrixXd lambda_bar;  // K_H x (W+1), rows on the simplex
  Eigen::VectorXd beta_bar_h;  // K_H, sums to one
  std::shared_ptr<const NodeVocab> vocab;
  HyperParams hyper;
  TruncationLevels trunc;
  FitDiagnostics diagnostics;

  // Builds summaries from a variational state.
  static FittedModel from_state(const VariationalState<double>& state,
                                std::shared_ptr<const NodeVocab> vocab, const HyperParams& hyper,
                                const TruncationLevels& trunc, FitDiagnostics diagnostics);
};

struct FitResult {
  FittedModel model;
  VariationalState<double> state;
};

// Coordinate ascent until the relative ELBO change drops below rel_tol or
// max_sweeps is reached. Also returns the final variational state.
FitResult fit_with_state(const EdgeCorpus& corpus, const HyperParams& hyper,
                         const TruncationLevels& trunc, const FitConfig& config = {});

FittedModel fit(const EdgeCorpus& corpus, const HyperParams& hyper, const TruncationLevels& trunc,
                const FitConfig& config = {});

/// log sum_i beta_i * lambda_{i,u} * beta_i * lambda_{i,v}, floored at kLogFloor.
/// Throws std::out_of_range for node indices beyond the unseen slot.
double predictive_log_likelihood(const FittedModel& model, const Edge& edge);

void save_model(std::ostream& out, const FittedModel& model);
FittedModel load_model(std::istream& in);

}  // namespace adnd

#endif  // ADND_MODEL_HPP
