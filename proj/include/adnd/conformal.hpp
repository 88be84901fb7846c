#ifndef ADND_CONFORMAL_HPP
#define ADND_CONFORMAL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adnd/graph.hpp"
#include "adnd/model.hpp"

namespace adnd {

// Which side of the test score is counted as "more conforming".
//   Paper:          counts scores strictly below the test score (large p for large scores).
//   PowerCorrected: counts scores strictly above it, so high-nonconformity
//                   edges get small p-values.
// Both are exactly uniform under exchangeability thanks to the tie draw.
enum class Orientation { Paper, PowerCorrected };

Orientation parse_orientation(std::string_view name);
std::string to_string(Orientation orientation);

// Nonconformity scores of the calibration split, kept sorted for counting.
class CalibrationScores {
 public:
  explicit CalibrationScores(std::vector<double> scores);

  const std::vector<double>& scores() const { return scores_; }
  std::size_t size() const { return scores_.size(); }

  std::size_t count_below(double alpha) const;
  std::size_t count_equal(double alpha) const;
  std::size_t count_above(double alpha) const;

 private:
  std::vector<double> scores_;
  std::vector<double> sorted_;
};

struct AnomalyVerdict {
  double alpha = 0.0;
  double p_value = 0.0;
  double epsilon = 0.0;
  bool is_anomalous = false;
  double u_draw = 0.0;
};

// Negative predictive log-likelihood under the fitted model.
double nonconformity_score(const FittedModel& model, const Edge& edge);

CalibrationScores calibrate(const FittedModel& model, const EdgeCorpus& calib);

/// Inductive conformal p-value of `alpha_test` against the calibration
/// scores. The pool is calibration plus the test point itself, so the tie
/// count is at least one.
double conformal_p_value(double alpha_test, const CalibrationScores& calib, double u,
                         Orientation orientation);

// Transductive p-values over the whole pool, one uniform per point.
std::vector<double> full_conformal_p_values(std::span<const double> scores,
                                            std::span<const double> u, Orientation orientation);

// Ascending rank of values[index] after the perturbation x_j + xi * u_j,
// u_j in (-1, 1). Without ties this is |{j : x_j <= x_i}|.
std::size_t tie_broken_rank(std::span<const double> values, std::size_t index,
                            std::span<const double> u);

AnomalyVerdict detect(const FittedModel& model, const CalibrationScores& calib, const Edge& edge,
                      double epsilon, std::uint64_t seed,
                      Orientation orientation = Orientation::PowerCorrected);

}  // namespace adnd

#endif  // ADND_CONFORMAL_HPP
