#ifndef ADND_EVAL_HPP
#define ADND_EVAL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "adnd/conformal.hpp"
#include "adnd/graph.hpp"
#include "adnd/model.hpp"

namespace adnd {

struct LabeledScore {
  double score = 0.0;
  bool is_anomaly = false;
};

// Scores where lower means more anomalous.
class LabeledScores {
 public:
  LabeledScores() = default;
  explicit LabeledScores(std::vector<LabeledScore> entries);
  LabeledScores(std::span<const double> scores, const std::vector<bool>& labels);

  const std::vector<LabeledScore>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t anomalies() const { return anomalies_; }

 private:
  std::vector<LabeledScore> entries_;
  std::size_t anomalies_ = 0;
};

struct PrecisionRecall {
  std::size_t k = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

// Ascending sort (stable on input order), then c_k / k and c_k / C for every k.
std::vector<PrecisionRecall> precision_recall_at_k(const LabeledScores& scores);

// (FPR, TPR) points flagging score <= threshold for each distinct score,
// anchored at (0, 0) and ending at (1, 1).
std::vector<CurvePoint> roc_points(const LabeledScores& scores);

// Trapezoidal area; points must be sorted by x and span [0, 1].
double auc(std::span<const CurvePoint> points);

// One-sample Kolmogorov-Smirnov statistic against Uniform(0, 1).
double ks_uniformity(std::span<const double> p_values);

struct FprSimulationConfig {
  HyperParams hyper;
  TruncationLevels trunc;
  FitConfig fit;
  std::size_t nodes = 30;
  std::size_t n_train = 363;
  std::size_t n_calib = 363;
  std::size_t n_test = 2000;
  std::vector<double> epsilons{0.01, 0.05, 0.1, 0.2};
  int trials = 20;
  std::uint64_t seed = 0;
  Orientation orientation = Orientation::PowerCorrected;
};

struct FprEstimate {
  double epsilon = 0.0;
  double empirical_fpr = 0.0;
  double std_error = 0.0;   // binomial standard error of empirical_fpr
  std::size_t n_test = 0;   // test edges per trial
  std::size_t flagged = 0;  // across all trials
  std::size_t evaluated = 0;
};

// End-to-end null simulation: every trial draws fresh model parameters,
// samples exchangeable train / calibration / test edges, fits, calibrates
// and counts how many normal test edges get flagged at each epsilon.
std::vector<FprEstimate> fpr_simulation(const FprSimulationConfig& config);

struct DetectorScores {
  std::vector<AnomalyVerdict> verdicts;  // conformal detector, one per test edge
  std::vector<double> rhss;              // RHSS baseline over the training history
  FittedModel model;
};

// Fits on `train`, calibrates on `calib`, then scores every test edge with
// both detectors. Test edge n uses tie-break seed derive_seed(seed, n).
DetectorScores score_detectors(const EdgeCorpus& train, const EdgeCorpus& calib,
                               const EdgeCorpus& test, const HyperParams& hyper,
                               const TruncationLevels& trunc, const FitConfig& fit_config,
                               double epsilon, std::uint64_t seed, Orientation orientation);

}  // namespace adnd

#endif  // ADND_EVAL_HPP
