#ifndef ADND_GRAPH_HPP
#define ADND_GRAPH_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace adnd {

using NodeIndex = std::uint32_t;

// Dense 0-based interning of external node labels. Index W (== size())
// is the shared slot for nodes never seen during ingestion.
class NodeVocab {
 public:
  NodeVocab() = default;
  explicit NodeVocab(std::vector<std::string> labels);

  NodeIndex intern(std::string_view label);

  // Lookup against the frozen vocabulary; unknown labels map to unseen_slot().
  NodeIndex resolve(std::string_view label) const;

  std::size_t size() const { return labels_.size(); }
  NodeIndex unseen_slot() const { return static_cast<NodeIndex>(labels_.size()); }
  // Categorical dimension seen by the model: W + 1.
  std::size_t dimension() const { return labels_.size() + 1; }

  const std::string& label(NodeIndex index) const;
  const std::vector<std::string>& labels() const { return labels_; }

  bool operator==(const NodeVocab& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeIndex> index_;
};

struct Edge {
  NodeIndex sender = 0;
  NodeIndex receiver = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// An ordered multiset of edges over a shared vocabulary. Multiple corpora
// (train / calibration / test) may point at the same vocab.
class EdgeCorpus {
 public:
  EdgeCorpus() : vocab_(std::make_shared<NodeVocab>()) {}
  EdgeCorpus(std::shared_ptr<const NodeVocab> vocab, std::vector<Edge> edges);

  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const Edge& operator[](std::size_t n) const { return edges_[n]; }

  const NodeVocab& vocab() const { return *vocab_; }
  const std::shared_ptr<const NodeVocab>& shared_vocab() const { return vocab_; }

 private:
  std::shared_ptr<const NodeVocab> vocab_;
  std::vector<Edge> edges_;
};

struct CorpusSplit {
  EdgeCorpus train;
  EdgeCorpus calib;
};

// Seeded Fisher-Yates permutation of 0..n-1; the first floor(n * f)
// positions form the calibration part.
std::vector<std::size_t> split_order(std::size_t n, double calib_fraction, std::uint64_t seed,
                                     std::size_t& n_calib);

// Seeded uniform partition: the calibration part receives floor(N * f) edges,
// training gets the rest. Throws std::invalid_argument for N < 2 or f outside (0, 1).
CorpusSplit split_train_calib(const EdgeCorpus& corpus, double calib_fraction, std::uint64_t seed);

}  // namespace adnd

#endif  // ADND_GRAPH_HPP
