#ifndef ADND_RHSS_HPP
#define ADND_RHSS_HPP

#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "adnd/graph.hpp"

namespace adnd {

// Count structures of an observed edge multiset. Order of observation is
// irrelevant to every score derived from it.
class StreamHistory {
 public:
  void observe(const Edge& edge);
  void observe(const EdgeCorpus& corpus);

  std::uint64_t total_edges() const { return total_; }
  std::uint64_t edge_count(const Edge& edge) const;
  std::uint64_t out_degree(NodeIndex u) const;
  std::uint64_t in_degree(NodeIndex v) const;
  const std::unordered_set<NodeIndex>& out_neighbors(NodeIndex u) const;
  const std::unordered_set<NodeIndex>& in_neighbors(NodeIndex v) const;

  // Sum of edge counts, out-degrees and in-degrees all equal total_edges().
  bool consistent() const;

 private:
  static std::uint64_t key(const Edge& e) {
    return (static_cast<std::uint64_t>(e.sender) << 32) | e.receiver;
  }

  std::unordered_map<std::uint64_t, std::uint64_t> edge_counts_;
  std::unordered_map<NodeIndex, std::uint64_t> out_deg_;
  std::unordered_map<NodeIndex, std::uint64_t> in_deg_;
  std::unordered_map<NodeIndex, std::unordered_set<NodeIndex>> out_nbrs_;
  std::unordered_map<NodeIndex, std::unordered_set<NodeIndex>> in_nbrs_;
  std::uint64_t total_ = 0;
};

// Laplace-smoothed edge frequency (count + 1) / (m + 1).
double sample_score(const StreamHistory& h, const Edge& edge);
// out_deg(u) * in_deg(v) / m^2, zero on an empty history.
double preferential_attachment_score(const StreamHistory& h, const Edge& edge);
// Jaccard overlap of out_neighbors(u) and in_neighbors(v).
double homophily_score(const StreamHistory& h, const Edge& edge);
// Equal-weight mean of the three; lower means more anomalous.
double rhss_score(const StreamHistory& h, const Edge& edge);

}  // namespace adnd

#endif  // ADND_RHSS_HPP
