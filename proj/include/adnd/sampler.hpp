#ifndef ADND_SAMPLER_HPP
#define ADND_SAMPLER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adnd/graph.hpp"
#include "adnd/random.hpp"
#include "adnd/variational.hpp"

namespace adnd {

// One draw of the generative parameters at the configured truncations.
struct AdndParameters {
  Eigen::VectorXd beta_h;  // K_H corpus-level weights
  Eigen::MatrixXd phi;     // K_H x (W+1) topics; the unseen column is zero
  Eigen::VectorXd beta_a;  // K_A sender weights
  Eigen::VectorXd beta_b;  // K_B receiver weights
  std::vector<Eigen::Index> c_a;  // sender topic -> corpus topic
  std::vector<Eigen::Index> c_b;  // receiver topic -> corpus topic

  // p(u) = sum_t beta_a[t] * phi(c_a[t], u), and the receiver analogue.
  Eigen::VectorXd sender_marginal() const;
  Eigen::VectorXd receiver_marginal() const;

  double edge_log_probability(const Edge& edge) const;
  // Joint log density of an edge sequence given these parameters.
  double sequence_log_density(std::span<const Edge> edges) const;
};

AdndParameters sample_parameters(const HyperParams& hyper, const TruncationLevels& trunc,
                                 std::size_t nodes, Rng& rng);

std::vector<Edge> sample_edges_from(const AdndParameters& params, std::size_t n, Rng& rng);

struct SampledCorpus {
  EdgeCorpus corpus;
  AdndParameters params;
};

// Vocabulary of `nodes` labels "n0" ... ; parameters and edges from one seed.
std::shared_ptr<const NodeVocab> numbered_vocab(std::size_t nodes);

SampledCorpus sample_edges(const HyperParams& hyper, const TruncationLevels& trunc,
                           std::size_t nodes, std::size_t n, std::uint64_t seed);

// Normal edges from one parameter draw plus round(n * anomaly_fraction)
// edges, at random positions, from an independent draw. Parameters depend
// only on param_seed, so corpora sharing it come from the same model.
struct PlantedCorpus {
  EdgeCorpus corpus;
  std::vector<bool> labels;  // true = planted anomaly
  AdndParameters normal;
  AdndParameters anomalous;
};

PlantedCorpus sample_planted(const HyperParams& hyper, const TruncationLevels& trunc,
                             std::size_t nodes, std::size_t n, double anomaly_fraction,
                             std::uint64_t param_seed, std::uint64_t edge_seed);

}  // namespace adnd

#endif  // ADND_SAMPLER_HPP
