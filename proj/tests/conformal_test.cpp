#include "adnd/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "adnd/eval.hpp"
#include "adnd/sampler.hpp"
#include "oracles.hpp"

namespace adnd {
namespace {

FittedModel uniform_model() {
  FittedModel m;
  m.vocab = std::make_shared<NodeVocab>(std::vector<std::string>{"a", "b", "c"});
  m.lambda_bar = Eigen::MatrixXd::Constant(1, 4, 0.25);
  m.beta_bar_h = Eigen::VectorXd::Ones(1);
  return m;
}

TEST(ConformalPValue, PowerCorrectedEnumeration) {
  const CalibrationScores calib({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(conformal_p_value(2.5, calib, 0.5, Orientation::PowerCorrected), 0.5);
}

TEST(ConformalPValue, StrictlyBelowOrientationEnumeration) {
  const CalibrationScores calib({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(conformal_p_value(10.0, calib, 0.5, Orientation::Paper), 0.9);
}

TEST(ConformalPValue, AllTiesGiveU) {
  const CalibrationScores calib({3, 3, 3, 3, 3});
  for (auto o : {Orientation::Paper, Orientation::PowerCorrected}) {
    EXPECT_NEAR(conformal_p_value(3.0, calib, 0.37, o), 0.37, 1e-15);
  }
}

TEST(ConformalPValue, Errors) {
  EXPECT_THROW(CalibrationScores({}), std::invalid_argument);
  EXPECT_THROW(CalibrationScores({1.0, std::nan("")}), std::invalid_argument);
  const CalibrationScores calib({1.0});
  EXPECT_THROW(conformal_p_value(1.0, calib, 0.0, Orientation::Paper), std::invalid_argument);
  EXPECT_THROW(conformal_p_value(1.0, calib, 1.0, Orientation::Paper), std::invalid_argument);
}

TEST(ConformalPValue, MatchesExhaustiveEnumeration) {
  for (std::size_t len = 2; len <= 8; ++len) {
    oracle::for_each_sequence(len, 3, [&](const std::vector<double>& pool) {
      const std::vector<double> calib_scores(pool.begin(), pool.end() - 1);
      const CalibrationScores calib(calib_scores);
      for (double u : {0.13, 0.5, 0.91}) {
        for (auto o : {Orientation::Paper, Orientation::PowerCorrected}) {
          ASSERT_EQ(conformal_p_value(pool.back(), calib, u, o),
                    oracle::pooled_p_value(pool, len - 1, u, o));
        }
      }
    });
  }
}

TEST(FullConformal, Examples) {
  const std::vector<double> scores{3, 1, 2};
  const std::vector<double> u(3, 0.5);
  const auto p = full_conformal_p_values(scores, u, Orientation::Paper);
  EXPECT_DOUBLE_EQ(p[0], 2.5 / 3);
  EXPECT_DOUBLE_EQ(p[1], 0.5 / 3);
  EXPECT_DOUBLE_EQ(p[2], 1.5 / 3);
}

TEST(FullConformal, ExtremesWithDistinctScores) {
  const std::vector<double> scores{0.4, -2.0, 7.5, 3.3, 1.0};
  const std::vector<double> u{0.2, 0.3, 0.7, 0.1, 0.9};
  const auto p = full_conformal_p_values(scores, u, Orientation::Paper);
  EXPECT_DOUBLE_EQ(p[1], 0.3 / 5);
  EXPECT_DOUBLE_EQ(p[2], (4 + 0.7) / 5);
  EXPECT_THROW(full_conformal_p_values(std::vector<double>{1.0}, std::vector<double>{0.5},
                                       Orientation::Paper),
               std::invalid_argument);
}

TEST(FullConformal, MatchesExhaustiveEnumeration) {
  for (std::size_t len = 2; len <= 8; ++len) {
    std::vector<double> u(len);
    for (std::size_t i = 0; i < len; ++i) u[i] = (static_cast<double>(i) + 0.5) / len;
    oracle::for_each_sequence(len, 3, [&](const std::vector<double>& pool) {
      for (auto o : {Orientation::Paper, Orientation::PowerCorrected}) {
        const auto p = full_conformal_p_values(pool, u, o);
        for (std::size_t i = 0; i < len; ++i) {
          ASSERT_EQ(p[i], oracle::pooled_p_value(pool, i, u[i], o));
        }
      }
    });
  }
}

TEST(ConformalPValue, InvariantUnderIncreasingMaps) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> scores(30);
    for (auto& s : scores) s = std::round(normal(gen) * 4.0) / 4.0;  // ensure ties
    const double test = std::round(normal(gen) * 4.0) / 4.0;
    std::vector<double> mapped(scores.size());
    std::transform(scores.begin(), scores.end(), mapped.begin(),
                   [](double x) { return std::exp(x) + 3.0 * x; });
    const double mapped_test = std::exp(test) + 3.0 * test;
    const double u = 0.123;
    for (auto o : {Orientation::Paper, Orientation::PowerCorrected}) {
      EXPECT_EQ(conformal_p_value(test, CalibrationScores(scores), u, o),
                conformal_p_value(mapped_test, CalibrationScores(mapped), u, o));
    }
  }
}

TEST(ConformalPValue, OrientationStrictCountsPartitionThePool) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> scores(1 + gen() % 20);
    for (auto& s : scores) s = static_cast<double>(gen() % 5);
    const double test = static_cast<double>(gen() % 5);
    const CalibrationScores calib(scores);
    const double pool = static_cast<double>(scores.size() + 1);
    const double ties = static_cast<double>(calib.count_equal(test) + 1);
    // u -> 0 isolates the strict counts
    const double tiny = 1e-300;
    const double strict_paper = conformal_p_value(test, calib, tiny, Orientation::Paper) * pool;
    const double strict_power = conformal_p_value(test, calib, tiny, Orientation::PowerCorrected) * pool;
    EXPECT_NEAR(strict_paper + strict_power, pool - ties, 1e-9);
    const double u = 0.3;
    EXPECT_NEAR(conformal_p_value(test, calib, u, Orientation::Paper) +
                    conformal_p_value(test, calib, 1.0 - u, Orientation::PowerCorrected),
                1.0, 1e-12);
  }
}

TEST(ConformalPValue, UniformUnderExchangeableScores) {
  Rng rng(17);
  std::vector<double> p;
  for (int rep = 0; rep < 5000; ++rep) {
    std::vector<double> calib(40);
    for (auto& s : calib) s = std::floor(rng.uniform_open() * 6.0);  // heavy ties
    const double test = std::floor(rng.uniform_open() * 6.0);
    p.push_back(conformal_p_value(test, CalibrationScores(calib), rng.uniform_open(),
                                  Orientation::PowerCorrected));
  }
  EXPECT_LT(ks_uniformity(p), 1.628 / std::sqrt(5000.0));
}

TEST(TieBrokenRank, DistinctValues) {
  const std::vector<double> v{10, 20, 30};
  const std::vector<double> u{0.9, -0.9, 0.1};
  EXPECT_EQ(tie_broken_rank(v, 1, u), 2u);
  EXPECT_EQ(tie_broken_rank(v, 0, u), 1u);
  EXPECT_EQ(tie_broken_rank(v, 2, u), 3u);
}

TEST(TieBrokenRank, PerturbationOrdersTies) {
  const std::vector<double> v{5, 5};
  const std::vector<double> u{-0.5, 0.5};
  EXPECT_EQ(tie_broken_rank(v, 0, u), 1u);
  EXPECT_EQ(tie_broken_rank(v, 1, u), 2u);
}

TEST(TieBrokenRank, RanksFormAPermutation) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 12;
    std::vector<double> v(n), u(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = std::floor(rng.uniform_open() * 4.0) * 0.5;
      u[i] = rng.uniform(-1.0, 1.0);
    }
    std::vector<std::size_t> ranks;
    for (std::size_t i = 0; i < n; ++i) ranks.push_back(tie_broken_rank(v, i, u));
    std::sort(ranks.begin(), ranks.end());
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(ranks[i], i + 1);
  }
}

TEST(TieBrokenRank, PreservesOrderOfDistinctValues) {
  const std::vector<double> v{1.0, 1.0, 2.0, 2.0, 3.0};
  const std::vector<double> u{0.99, 0.98, -0.99, -0.98, -0.999};
  EXPECT_LT(tie_broken_rank(v, 0, u), tie_broken_rank(v, 2, u));
  EXPECT_LT(tie_broken_rank(v, 1, u), tie_broken_rank(v, 3, u));
  EXPECT_EQ(tie_broken_rank(v, 4, u), 5u);
}

TEST(Nonconformity, UniformModelGivesLog16) {
  const auto m = uniform_model();
  for (NodeIndex u = 0; u < 4; ++u)
    for (NodeIndex v = 0; v < 4; ++v) EXPECT_NEAR(nonconformity_score(m, {u, v}), std::log(16.0), 1e-14);
}

TEST(Nonconformity, RepeatedEdgeScoresBelowEdgesOnOtherNodes) {
  auto vocab = std::make_shared<NodeVocab>(std::vector<std::string>{"a", "b", "c", "d"});
  const EdgeCorpus corpus(vocab, std::vector<Edge>(100, Edge{0, 1}));
  const auto model = fit(corpus, {}, {}, {});
  const double seen = nonconformity_score(model, {0, 1});
  EXPECT_EQ(seen, nonconformity_score(model, {0, 1}));
  for (NodeIndex u = 0; u < 5; ++u)
    for (NodeIndex v = 0; v < 5; ++v)
      if (u > 1 || v > 1) EXPECT_LT(seen, nonconformity_score(model, {u, v}));
}

TEST(Detect, ThresholdSemanticsAndDeterminism) {
  const auto m = uniform_model();
  const CalibrationScores calib({std::log(16.0), std::log(16.0), 1.0});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto v = detect(m, calib, {0, 1}, 0.999, seed);
    EXPECT_EQ(v.is_anomalous, v.p_value <= 0.999);
    EXPECT_TRUE(v.is_anomalous);
    EXPECT_GT(v.u_draw, 0.0);
    EXPECT_LT(v.u_draw, 1.0);
    const auto again = detect(m, calib, {0, 1}, 0.999, seed);
    EXPECT_EQ(v.p_value, again.p_value);
    EXPECT_EQ(v.u_draw, again.u_draw);
  }
  EXPECT_THROW(detect(m, calib, {0, 1}, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(detect(m, calib, {0, 1}, 1.0, 1), std::invalid_argument);
}

TEST(Detect, FlagRateOnExchangeableEdgesIsBounded) {
  const auto sampled = sample_edges({}, {}, 15, 1200, 31);
  const EdgeCorpus train(sampled.corpus.shared_vocab(),
                         {sampled.corpus.edges().begin(), sampled.corpus.edges().begin() + 400});
  const EdgeCorpus calib(sampled.corpus.shared_vocab(),
                         {sampled.corpus.edges().begin() + 400, sampled.corpus.edges().begin() + 800});
  const auto model = fit(train, {}, {}, {});
  const auto scores = calibrate(model, calib);
  std::size_t flagged = 0;
  for (std::size_t n = 800; n < 1200; ++n) {
    flagged += detect(model, scores, sampled.corpus[n], 0.1, n).is_anomalous ? 1 : 0;
  }
  // 0.1 + 3 sigma of a binomial over 400 draws, plus calibration-set slack
  EXPECT_LE(static_cast<double>(flagged) / 400.0, 0.1 + 3 * std::sqrt(0.09 / 400) + 0.03);
}

TEST(Orientation, ParsesNames) {
  EXPECT_EQ(parse_orientation("paper"), Orientation::Paper);
  EXPECT_EQ(parse_orientation("power-corrected"), Orientation::PowerCorrected);
  EXPECT_THROW(parse_orientation("upside-down"), std::invalid_argument);
  EXPECT_EQ(to_string(Orientation::PowerCorrected), "power-corrected");
}

}  // namespace
}  // namespace adnd
