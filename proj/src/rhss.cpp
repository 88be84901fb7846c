#include "adnd/rhss.hpp"

namespace adnd {
namespace {

const std::unordered_set<NodeIndex> kEmpty;

template <typename Map>
std::uint64_t lookup(const Map& m, typename Map::key_type k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

void StreamHistory::observe(const Edge& edge) {
  ++edge_counts_[key(edge)];
  ++out_deg_[edge.sender];
  ++in_deg_[edge.receiver];
  out_nbrs_[edge.sender].insert(edge.receiver);
  in_nbrs_[edge.receiver].insert(edge.sender);
  ++total_;
}

void StreamHistory::observe(const EdgeCorpus& corpus) {
  for (const Edge& e : corpus.edges()) observe(e);
}

std::uint64_t StreamHistory::edge_count(const Edge& edge) const { return lookup(edge_counts_, key(edge)); }
std::uint64_t StreamHistory::out_degree(NodeIndex u) const { return lookup(out_deg_, u); }
std::uint64_t StreamHistory::in_degree(NodeIndex v) const { return lookup(in_deg_, v); }

const std::unordered_set<NodeIndex>& StreamHistory::out_neighbors(NodeIndex u) const {
  auto it = out_nbrs_.find(u);
  return it == out_nbrs_.end() ? kEmpty : it->second;
}

const std::unordered_set<NodeIndex>& StreamHistory::in_neighbors(NodeIndex v) const {
  auto it = in_nbrs_.find(v);
  return it == in_nbrs_.end() ? kEmpty : it->second;
}

bool StreamHistory::consistent() const {
  std::uint64_t e = 0, o = 0, i = 0;
  for (const auto& [k, c] : edge_counts_) e += c;
  for (const auto& [k, c] : out_deg_) o += c;
  for (const auto& [k, c] : in_deg_) i += c;
  return e == total_ && o == total_ && i == total_;
}

double sample_score(const StreamHistory& h, const Edge& edge) {
  return static_cast<double>(h.edge_count(edge) + 1) / static_cast<double>(h.total_edges() + 1);
}

double preferential_attachment_score(const StreamHistory& h, const Edge& edge) {
  const auto m = static_cast<double>(h.total_edges());
  if (m == 0.0) return 0.0;
  return static_cast<double>(h.out_degree(edge.sender)) *
         static_cast<double>(h.in_degree(edge.receiver)) / (m * m);
}

double homophily_score(const StreamHistory& h, const Edge& edge) {
  const auto& a = h.out_neighbors(edge.sender);
  const auto& b = h.in_neighbors(edge.receiver);
  if (a.empty() && b.empty()) return 0.0;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  std::size_t common = 0;
  for (NodeIndex x : small) common += large.count(x);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

double rhss_score(const StreamHistory& h, const Edge& edge) {
  return (sample_score(h, edge) + preferential_attachment_score(h, edge) +
          homophily_score(h, edge)) /
         3.0;
}

}  // namespace adnd
