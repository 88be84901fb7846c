#include "adnd/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "adnd/random.hpp"
#include "adnd/rhss.hpp"
#include "adnd/sampler.hpp"

namespace adnd {

LabeledScores::LabeledScores(std::vector<LabeledScore> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) anomalies_ += e.is_anomaly ? 1 : 0;
}

LabeledScores::LabeledScores(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
  entries_.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    entries_.push_back({scores[i], labels[i]});
    anomalies_ += labels[i] ? 1 : 0;
  }
}

std::vector<PrecisionRecall> precision_recall_at_k(const LabeledScores& scores) {
  if (scores.anomalies() == 0) throw std::invalid_argument("no ground-truth anomalies");
  std::vector<LabeledScore> sorted = scores.entries();
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const LabeledScore& a, const LabeledScore& b) { return a.score < b.score; });
  std::vector<PrecisionRecall> out;
  out.reserve(sorted.size());
  std::size_t hits = 0;
  const auto total = static_cast<double>(scores.anomalies());
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    hits += sorted[k - 1].is_anomaly ? 1 : 0;
    out.push_back({k, static_cast<double>(hits) / static_cast<double>(k),
                   static_cast<double>(hits) / total});
  }
  return out;
}

std::vector<CurvePoint> roc_points(const LabeledScores& scores) {
  const std::size_t positives = scores.anomalies();
  const std::size_t negatives = scores.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("ROC needs both anomalous and normal entries");
  }
  std::vector<LabeledScore> sorted = scores.entries();
  std::sort(sorted.begin(), sorted.end(),
            [](const LabeledScore& a, const LabeledScore& b) { return a.score < b.score; });

  std::vector<CurvePoint> points{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double threshold = sorted[i].score;
    for (; i < sorted.size() && sorted[i].score == threshold; ++i) {
      (sorted[i].is_anomaly ? tp : fp) += 1;
    }
    points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                      static_cast<double>(tp) / static_cast<double>(positives)});
  }
  return points;
}

double auc(std::span<const CurvePoint> points) {
  if (points.size() < 2) throw std::invalid_argument("auc: need at least two points");
  if (points.front().x != 0.0 || points.back().x != 1.0) {
    throw std::invalid_argument("auc: curve must span x in [0, 1]");
  }
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dx = points[i].x - points[i - 1].x;
    if (dx < 0.0) throw std::invalid_argument("auc: points not sorted by x");
    area += dx * (points[i].y + points[i - 1].y) / 2.0;
  }
  return area;
}

double ks_uniformity(std::span<const double> p_values) {
  if (p_values.empty()) throw std::invalid_argument("ks_uniformity: empty sample");
  std::vector<double> sorted(p_values.begin(), p_values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double x = std::clamp(sorted[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - x, x - static_cast<double>(i) / n});
  }
  return d;
}

std::vector<FprEstimate> fpr_simulation(const FprSimulationConfig& config) {
  if (config.nodes < 1 || config.n_train < 1 || config.n_calib < 1 || config.n_test < 1 ||
      config.trials < 1) {
    throw std::invalid_argument("fpr_simulation: sizes and trials must be >= 1");
  }
  for (double eps : config.epsilons) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  }

  const auto vocab = numbered_vocab(config.nodes);
  std::vector<std::size_t> flagged(config.epsilons.size(), 0);
  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t trial_seed = derive_seed(config.seed, static_cast<std::uint64_t>(trial));
    Rng param_rng(derive_seed(trial_seed, "parameters"));
    const AdndParameters params =
        sample_parameters(config.hyper, config.trunc, config.nodes, param_rng);

    Rng edge_rng(derive_seed(trial_seed, "edges"));
    const std::size_t pooled = config.n_train + config.n_calib;
    EdgeCorpus existing(vocab, sample_edges_from(params, pooled, edge_rng));
    EdgeCorpus test(vocab, sample_edges_from(params, config.n_test, edge_rng));

    // floor(pooled * f) == n_calib exactly
    const double f = (static_cast<double>(config.n_calib) + 0.5) / static_cast<double>(pooled);
    const CorpusSplit split = split_train_calib(existing, f, derive_seed(trial_seed, "split"));

    FitConfig fit_config = config.fit;
    fit_config.seed = derive_seed(trial_seed, "init");
    const FittedModel model = fit(split.train, config.hyper, config.trunc, fit_config);
    const CalibrationScores calib = calibrate(model, split.calib);

    Rng tie_rng(derive_seed(trial_seed, "ties"));
    for (const Edge& e : test.edges()) {
      const double p = conformal_p_value(nonconformity_score(model, e), calib,
                                         tie_rng.uniform_open(), config.orientation);
      for (std::size_t k = 0; k < config.epsilons.size(); ++k) {
        flagged[k] += p <= config.epsilons[k] ? 1 : 0;
      }
    }
  }

  const std::size_t evaluated = config.n_test * static_cast<std::size_t>(config.trials);
  std::vector<FprEstimate> out;
  for (std::size_t k = 0; k < config.epsilons.size(); ++k) {
    FprEstimate est;
    est.epsilon = config.epsilons[k];
    est.flagged = flagged[k];
    est.evaluated = evaluated;
    est.n_test = config.n_test;
    est.empirical_fpr = static_cast<double>(flagged[k]) / static_cast<double>(evaluated);
    est.std_error =
        std::sqrt(est.empirical_fpr * (1.0 - est.empirical_fpr) / static_cast<double>(evaluated));
    out.push_back(est);
  }
  return out;
}

DetectorScores score_detectors(const EdgeCorpus& train, const EdgeCorpus& calib,
                               const EdgeCorpus& test, const HyperParams& hyper,
                               const TruncationLevels& trunc, const FitConfig& fit_config,
                               double epsilon, std::uint64_t seed, Orientation orientation) {
  DetectorScores out{{}, {}, fit(train, hyper, trunc, fit_config)};
  const CalibrationScores scores = calibrate(out.model, calib);
  StreamHistory history;
  history.observe(train);
  out.verdicts.reserve(test.size());
  out.rhss.reserve(test.size());
  for (std::size_t n = 0; n < test.size(); ++n) {
    out.verdicts.push_back(detect(out.model, scores, test[n], epsilon, derive_seed(seed, n), orientation));
    out.rhss.push_back(rhss_score(history, test[n]));
  }
  return out;
}

}  // namespace adnd
