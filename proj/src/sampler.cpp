#include "adnd/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adnd {
namespace {

Eigen::VectorXd truncated_gem(double concentration, int k, Rng& rng) {
  Eigen::VectorXd fractions(k);
  for (int i = 0; i < k; ++i) fractions[i] = rng.beta(1.0, concentration);
  return stick_weights(fractions, /*truncate_last=*/true);
}

Eigen::VectorXd side_marginal(const Eigen::VectorXd& beta, const std::vector<Eigen::Index>& c,
                              const Eigen::MatrixXd& phi) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(phi.cols());
  for (std::size_t t = 0; t < c.size(); ++t) {
    out += beta[static_cast<Eigen::Index>(t)] * phi.row(c[t]).transpose();
  }
  return out;
}

}  // namespace

Eigen::VectorXd AdndParameters::sender_marginal() const { return side_marginal(beta_a, c_a, phi); }
Eigen::VectorXd AdndParameters::receiver_marginal() const { return side_marginal(beta_b, c_b, phi); }

double AdndParameters::edge_log_probability(const Edge& edge) const {
  double pu = 0.0, pv = 0.0;
  for (std::size_t t = 0; t < c_a.size(); ++t) pu += beta_a[t] * phi(c_a[t], edge.sender);
  for (std::size_t t = 0; t < c_b.size(); ++t) pv += beta_b[t] * phi(c_b[t], edge.receiver);
  return std::log(pu) + std::log(pv);
}

double AdndParameters::sequence_log_density(std::span<const Edge> edges) const {
  double total = 0.0;
  for (const Edge& e : edges) total += edge_log_probability(e);
  return total;
}

AdndParameters sample_parameters(const HyperParams& hyper, const TruncationLevels& trunc,
                                 std::size_t nodes, Rng& rng) {
  hyper.validate();
  trunc.validate();
  if (nodes < 1) throw std::invalid_argument("sample_parameters: need at least one node");
  const auto w = static_cast<Eigen::Index>(nodes);

  AdndParameters p;
  p.beta_h = truncated_gem(hyper.gamma, trunc.k_h, rng);
  // Topics come from the symmetric Dirichlet base measure over the W known
  // nodes; the unseen slot never generates data.
  p.phi = Eigen::MatrixXd::Zero(trunc.k_h, w + 1);
  const Eigen::VectorXd base = Eigen::VectorXd::Constant(w, hyper.eta);
  for (int i = 0; i < trunc.k_h; ++i) p.phi.row(i).head(w) = rng.dirichlet(base).transpose();

  p.beta_a = truncated_gem(hyper.tau, trunc.k_a, rng);
  p.beta_b = truncated_gem(hyper.tau, trunc.k_b, rng);
  for (int t = 0; t < trunc.k_a; ++t) p.c_a.push_back(rng.categorical(p.beta_h));
  for (int t = 0; t < trunc.k_b; ++t) p.c_b.push_back(rng.categorical(p.beta_h));
  return p;
}

std::vector<Edge> sample_edges_from(const AdndParameters& params, std::size_t n, Rng& rng) {
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto za = rng.categorical(params.beta_a);
    const auto zb = rng.categorical(params.beta_b);
    const auto u = rng.categorical(params.phi.row(params.c_a[za]).transpose());
    const auto v = rng.categorical(params.phi.row(params.c_b[zb]).transpose());
    edges.push_back({static_cast<NodeIndex>(u), static_cast<NodeIndex>(v)});
  }
  return edges;
}

std::shared_ptr<const NodeVocab> numbered_vocab(std::size_t nodes) {
  auto vocab = std::make_shared<NodeVocab>();
  for (std::size_t i = 0; i < nodes; ++i) vocab->intern("n" + std::to_string(i));
  return vocab;
}

SampledCorpus sample_edges(const HyperParams& hyper, const TruncationLevels& trunc,
                           std::size_t nodes, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_edges: need at least one edge");
  Rng param_rng(derive_seed(seed, "parameters"));
  AdndParameters params = sample_parameters(hyper, trunc, nodes, param_rng);
  Rng edge_rng(derive_seed(seed, "edges"));
  auto edges = sample_edges_from(params, n, edge_rng);
  return {EdgeCorpus(numbered_vocab(nodes), std::move(edges)), std::move(params)};
}

PlantedCorpus sample_planted(const HyperParams& hyper, const TruncationLevels& trunc,
                             std::size_t nodes, std::size_t n, double anomaly_fraction,
                             std::uint64_t param_seed, std::uint64_t edge_seed) {
  if (!(anomaly_fraction >= 0.0 && anomaly_fraction <= 1.0)) {
    throw std::invalid_argument("anomaly_fraction must lie in [0, 1]");
  }
  Rng normal_rng(derive_seed(param_seed, "parameters"));
  Rng anomaly_rng(derive_seed(param_seed, "anomaly-parameters"));
  PlantedCorpus out{EdgeCorpus(), {}, sample_parameters(hyper, trunc, nodes, normal_rng),
                    sample_parameters(hyper, trunc, nodes, anomaly_rng)};

  Rng rng(edge_seed);
  const auto n_anom = static_cast<std::size_t>(std::llround(static_cast<double>(n) * anomaly_fraction));
  out.labels.assign(n, false);
  std::fill(out.labels.begin(), out.labels.begin() + static_cast<std::ptrdiff_t>(n_anom), true);
  for (std::size_t i = n; i > 1; --i) {
    std::vector<bool>::swap(out.labels[i - 1], out.labels[rng.uniform_index(i)]);
  }
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back(sample_edges_from(out.labels[i] ? out.anomalous : out.normal, 1, rng).front());
  }
  out.corpus = EdgeCorpus(numbered_vocab(nodes), std::move(edges));
  return out;
}

}  // namespace adnd
