#include "adnd/graph.hpp"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

namespace adnd {
namespace {

TEST(NodeVocab, InternAssignsSequentialIndices) {
  NodeVocab vocab;
  EXPECT_EQ(vocab.intern("alice"), 0u);
  EXPECT_EQ(vocab.intern("alice"), 0u);
  EXPECT_EQ(vocab.intern("bob"), 1u);
  EXPECT_EQ(vocab.size(), 2u);
  EXPECT_EQ(vocab.unseen_slot(), 2u);
  EXPECT_EQ(vocab.dimension(), 3u);
}

TEST(NodeVocab, ResolveFallsBackToUnseenSlot) {
  const NodeVocab three({"a", "b", "c"});
  EXPECT_EQ(three.resolve("mallory"), 3u);
  const NodeVocab two({"a", "b"});
  EXPECT_EQ(two.resolve("b"), 1u);
  const NodeVocab empty;
  EXPECT_EQ(empty.resolve("anything"), 0u);
}

TEST(NodeVocab, ResolveNeverExceedsW) {
  const NodeVocab vocab({"x", "y", "z", "w"});
  for (const char* label : {"x", "y", "z", "w", "q", "", "xx"}) {
    EXPECT_LE(vocab.resolve(label), vocab.unseen_slot());
  }
}

TEST(EdgeCorpus, RejectsIndicesBeyondUnseenSlot) {
  auto vocab = std::make_shared<NodeVocab>(std::vector<std::string>{"a", "b"});
  EXPECT_NO_THROW(EdgeCorpus(vocab, {{0, 2}, {2, 2}}));
  EXPECT_THROW(EdgeCorpus(vocab, {{0, 3}}), std::out_of_range);
}

EdgeCorpus chain(std::size_t n) {
  auto vocab = std::make_shared<NodeVocab>();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = vocab->intern("n" + std::to_string(i % 17));
    const auto v = vocab->intern("n" + std::to_string((i * 7 + 3) % 17));
    edges.push_back({u, v});
  }
  return EdgeCorpus(vocab, std::move(edges));
}

std::vector<Edge> sorted_edges(std::vector<Edge> e) {
  std::sort(e.begin(), e.end());
  return e;
}

TEST(Split, ReplicaSizes) {
  const auto corpus = chain(726);
  const auto split = split_train_calib(corpus, 0.5, 1);
  EXPECT_EQ(split.train.size(), 363u);
  EXPECT_EQ(split.calib.size(), 363u);
}

TEST(Split, MinimalCorpus) {
  const auto split = split_train_calib(chain(2), 0.5, 9);
  EXPECT_EQ(split.train.size(), 1u);
  EXPECT_EQ(split.calib.size(), 1u);
}

TEST(Split, TooSmallCorpusIsAnError) {
  EXPECT_THROW(split_train_calib(chain(1), 0.5, 0), std::invalid_argument);
  EXPECT_THROW(split_train_calib(chain(10), 0.0, 0), std::invalid_argument);
  EXPECT_THROW(split_train_calib(chain(10), 1.0, 0), std::invalid_argument);
}

TEST(Split, DeterministicForSeed) {
  const auto corpus = chain(100);
  const auto a = split_train_calib(corpus, 0.3, 42);
  const auto b = split_train_calib(corpus, 0.3, 42);
  EXPECT_EQ(a.train.edges(), b.train.edges());
  EXPECT_EQ(a.calib.edges(), b.calib.edges());
  EXPECT_EQ(&a.train.vocab(), &corpus.vocab());
}

TEST(Split, PreservesMultisetAndSizesForAnySeed) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 60;
    const double f = 0.05 + 0.9 * static_cast<double>(gen() % 1000) / 1000.0;
    const auto corpus = chain(n);
    const auto split = split_train_calib(corpus, f, gen());
    const auto expected_calib = static_cast<std::size_t>(std::floor(n * f));
    ASSERT_EQ(split.calib.size(), expected_calib);
    ASSERT_EQ(split.train.size(), n - expected_calib);
    std::vector<Edge> merged = split.train.edges();
    merged.insert(merged.end(), split.calib.edges().begin(), split.calib.edges().end());
    ASSERT_EQ(sorted_edges(merged), sorted_edges(corpus.edges()));
  }
}

TEST(Split, SizesDependOnlyOnNAndFraction) {
  auto corpus = chain(50);
  std::vector<Edge> shuffled = corpus.edges();
  std::mt19937_64 gen(3);
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  const EdgeCorpus permuted(corpus.shared_vocab(), shuffled);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = split_train_calib(corpus, 0.37, seed);
    const auto b = split_train_calib(permuted, 0.37, seed + 1000);
    EXPECT_EQ(a.train.size(), b.train.size());
    EXPECT_EQ(a.calib.size(), b.calib.size());
  }
}

}  // namespace
}  // namespace adnd
