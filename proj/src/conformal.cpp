#include "adnd/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adnd/random.hpp"

namespace adnd {
namespace {

void check_u(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("tie-break draw u must lie in (0, 1)");
}

double p_from_counts(std::size_t below, std::size_t equal, std::size_t above, std::size_t pool,
                     double u, Orientation orientation) {
  const std::size_t strict = orientation == Orientation::Paper ? below : above;
  return (static_cast<double>(strict) + u * static_cast<double>(equal)) / static_cast<double>(pool);
}

}  // namespace

Orientation parse_orientation(std::string_view name) {
  if (name == "paper") return Orientation::Paper;
  if (name == "power-corrected") return Orientation::PowerCorrected;
  throw std::invalid_argument("unknown orientation '" + std::string(name) +
                              "' (expected paper or power-corrected)");
}

std::string to_string(Orientation orientation) {
  return orientation == Orientation::Paper ? "paper" : "power-corrected";
}

CalibrationScores::CalibrationScores(std::vector<double> scores) : scores_(std::move(scores)) {
  if (scores_.empty()) throw std::invalid_argument("empty calibration set");
  for (double s : scores_) {
    if (!std::isfinite(s)) throw std::invalid_argument("calibration scores must be finite");
  }
  sorted_ = scores_;
  std::sort(sorted_.begin(), sorted_.end());
}

std::size_t CalibrationScores::count_below(double alpha) const {
  return static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), alpha) -
                                  sorted_.begin());
}

std::size_t CalibrationScores::count_equal(double alpha) const {
  auto [lo, hi] = std::equal_range(sorted_.begin(), sorted_.end(), alpha);
  return static_cast<std::size_t>(hi - lo);
}

std::size_t CalibrationScores::count_above(double alpha) const {
  return static_cast<std::size_t>(sorted_.end() -
                                  std::upper_bound(sorted_.begin(), sorted_.end(), alpha));
}

double nonconformity_score(const FittedModel& model, const Edge& edge) {
  return -predictive_log_likelihood(model, edge);
}

CalibrationScores calibrate(const FittedModel& model, const EdgeCorpus& calib) {
  std::vector<double> scores;
  scores.reserve(calib.size());
  for (const Edge& e : calib.edges()) scores.push_back(nonconformity_score(model, e));
  return CalibrationScores(std::move(scores));
}

double conformal_p_value(double alpha_test, const CalibrationScores& calib, double u,
                         Orientation orientation) {
  check_u(u);
  // +1 on the tie count and the pool size: the test point itself.
  return p_from_counts(calib.count_below(alpha_test), calib.count_equal(alpha_test) + 1,
                       calib.count_above(alpha_test), calib.size() + 1, u, orientation);
}

std::vector<double> full_conformal_p_values(std::span<const double> scores,
                                            std::span<const double> u, Orientation orientation) {
  if (scores.size() < 2) throw std::invalid_argument("full conformal needs at least two scores");
  if (u.size() != scores.size()) throw std::invalid_argument("one uniform draw per score");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> p(scores.size());
  for (std::size_t n = 0; n < scores.size(); ++n) {
    check_u(u[n]);
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), scores[n]);
    const auto hi = std::upper_bound(lo, sorted.end(), scores[n]);
    p[n] = p_from_counts(static_cast<std::size_t>(lo - sorted.begin()),
                         static_cast<std::size_t>(hi - lo),
                         static_cast<std::size_t>(sorted.end() - hi), scores.size(), u[n],
                         orientation);
  }
  return p;
}

std::size_t tie_broken_rank(std::span<const double> values, std::size_t index,
                            std::span<const double> u) {
  if (index >= values.size()) throw std::out_of_range("tie_broken_rank: index out of range");
  if (u.size() != values.size()) throw std::invalid_argument("one perturbation per value");

  double min_gap = std::numeric_limits<double>::infinity();
  bool has_ties = false;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    const double gap = sorted[k] - sorted[k - 1];
    if (gap == 0.0) {
      has_ties = true;
    } else {
      min_gap = std::min(min_gap, gap);
    }
  }

  const double xi = has_ties ? (std::isfinite(min_gap) ? min_gap / 2.0 : 1.0) : 0.0;
  const double target = values[index] + xi * u[index];
  std::size_t rank = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] + xi * u[j] <= target) ++rank;
  }
  return rank;
}

AnomalyVerdict detect(const FittedModel& model, const CalibrationScores& calib, const Edge& edge,
                      double epsilon, std::uint64_t seed, Orientation orientation) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  AnomalyVerdict v;
  v.alpha = nonconformity_score(model, edge);
  Rng rng(seed);
  v.u_draw = rng.uniform_open();
  v.p_value = conformal_p_value(v.alpha, calib, v.u_draw, orientation);
  v.epsilon = epsilon;
  v.is_anomalous = v.p_value <= epsilon;
  return v;
}

}  // namespace adnd
