#ifndef ADND_TESTS_ORACLES_HPP
#define ADND_TESTS_ORACLES_HPP

// Brute-force reference computations shared by the unit and acceptance
// suites. Nothing here calls into the code paths it is used to check.

#include <cstddef>
#include <functional>
#include <vector>

#include "adnd/conformal.hpp"
#include "adnd/eval.hpp"

namespace adnd::oracle {

// p-value of pool[index] by direct enumeration of the pooled multiset.
inline double pooled_p_value(const std::vector<double>& pool, std::size_t index, double u,
                             Orientation orientation) {
  std::size_t strict = 0, ties = 0;
  for (double x : pool) {
    if (x == pool[index]) {
      ++ties;
    } else if (orientation == Orientation::Paper ? pool[index] > x : x > pool[index]) {
      ++strict;
    }
  }
  return (static_cast<double>(strict) + u * static_cast<double>(ties)) /
         static_cast<double>(pool.size());
}

// Calls visit(seq) for every sequence of the given length over {0, ..., alphabet-1}.
inline void for_each_sequence(std::size_t length, int alphabet,
                              const std::function<void(const std::vector<double>&)>& visit) {
  std::vector<int> digits(length, 0);
  std::vector<double> seq(length);
  while (true) {
    for (std::size_t i = 0; i < length; ++i) seq[i] = digits[i];
    visit(seq);
    std::size_t pos = 0;
    while (pos < length && ++digits[pos] == alphabet) digits[pos++] = 0;
    if (pos == length) return;
  }
}

// Fraction of (anomaly, normal) pairs where the anomaly scores lower, ties half.
inline double mann_whitney_auc(const std::vector<LabeledScore>& entries) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (const auto& a : entries) {
    if (!a.is_anomaly) continue;
    for (const auto& b : entries) {
      if (b.is_anomaly) continue;
      ++pairs;
      wins += a.score < b.score ? 1.0 : (a.score == b.score ? 0.5 : 0.0);
    }
  }
  return wins / static_cast<double>(pairs);
}

// c_k for every k: anomalies among the k lowest scores, ties by input order
// (selection by repeated minimum scan).
inline std::vector<std::size_t> hits_at_k(const std::vector<LabeledScore>& entries) {
  std::vector<bool> taken(entries.size(), false);
  std::vector<std::size_t> hits;
  std::size_t c = 0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    std::size_t best = entries.size();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (taken[i]) continue;
      if (best == entries.size() || entries[i].score < entries[best].score) best = i;
    }
    taken[best] = true;
    c += entries[best].is_anomaly ? 1 : 0;
    hits.push_back(c);
  }
  return hits;
}

}  // namespace adnd::oracle

#endif  // ADND_TESTS_ORACLES_HPP
