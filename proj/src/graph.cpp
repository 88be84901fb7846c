#include "adnd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "adnd/random.hpp"

namespace adnd {

NodeVocab::NodeVocab(std::vector<std::string> labels) {
  for (auto& label : labels) intern(label);
}

NodeIndex NodeVocab::intern(std::string_view label) {
  std::string key(label);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  const auto next = static_cast<NodeIndex>(labels_.size());
  index_.emplace(key, next);
  labels_.push_back(std::move(key));
  return next;
}

NodeIndex NodeVocab::resolve(std::string_view label) const {
  if (auto it = index_.find(std::string(label)); it != index_.end()) return it->second;
  return unseen_slot();
}

const std::string& NodeVocab::label(NodeIndex index) const {
  static const std::string unseen = "<unseen>";
  if (index == unseen_slot()) return unseen;
  return labels_.at(index);
}

EdgeCorpus::EdgeCorpus(std::shared_ptr<const NodeVocab> vocab, std::vector<Edge> edges)
    : vocab_(std::move(vocab)), edges_(std::move(edges)) {
  if (!vocab_) throw std::invalid_argument("EdgeCorpus: null vocabulary");
  const auto limit = vocab_->unseen_slot();
  for (const Edge& e : edges_) {
    if (e.sender > limit || e.receiver > limit) {
      throw std::out_of_range("EdgeCorpus: node index exceeds vocabulary");
    }
  }
}

std::vector<std::size_t> split_order(std::size_t n, double calib_fraction, std::uint64_t seed,
                                     std::size_t& n_calib) {
  if (n < 2) throw std::invalid_argument("corpus too small to split");
  if (!(calib_fraction > 0.0 && calib_fraction < 1.0)) {
    throw std::invalid_argument("calib_fraction must lie in (0, 1)");
  }
  n_calib = static_cast<std::size_t>(std::floor(static_cast<double>(n) * calib_fraction));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_index(i + 1)]);
  }
  return order;
}

CorpusSplit split_train_calib(const EdgeCorpus& corpus, double calib_fraction, std::uint64_t seed) {
  std::size_t n_calib = 0;
  const auto order = split_order(corpus.size(), calib_fraction, seed, n_calib);
  std::vector<Edge> train, calib;
  train.reserve(corpus.size() - n_calib);
  calib.reserve(n_calib);
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_calib ? calib : train).push_back(corpus[order[k]]);
  }
  return {EdgeCorpus(corpus.shared_vocab(), std::move(train)),
          EdgeCorpus(corpus.shared_vocab(), std::move(calib))};
}

}  // namespace adnd
