#include "lexbias/bleu.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace lexbias {
namespace {

TEST(BleuStatsTest, Identity) {
  const auto s = bleu_stats("a b c d", "a b c d");
  EXPECT_EQ(s.matches, s.counts);
  EXPECT_EQ(s.counts, (std::array<long, 4>{4, 3, 2, 1}));
  EXPECT_EQ(corpus_bleu(std::vector<BleuStats>{s}), 100.0);
}

TEST(BleuStatsTest, DisjointAndUncased) {
  EXPECT_EQ(bleu_stats("a b", "c d").matches, (std::array<long, 4>{0, 0, 0, 0}));
  EXPECT_EQ(bleu_stats("The Cat", "the cat").matches[0], 2);
  EXPECT_THROW(bleu_stats("", "a"), std::invalid_argument);
  EXPECT_THROW(bleu_stats("a", " "), std::invalid_argument);
}

TEST(BleuStatsTest, ClippedCounts) {
  const auto s = bleu_stats("the the the the", "the cat the");
  EXPECT_EQ(s.matches[0], 2);
  EXPECT_EQ(s.counts[0], 4);
}

TEST(CorpusBleuTest, ZeroFourGramPrecisionScoresZero) {
  EXPECT_EQ(corpus_bleu(std::vector<BleuStats>{bleu_stats("a b c x", "a b c d")}), 0.0);
  // Three words have no 4-grams at all.
  EXPECT_EQ(corpus_bleu(std::vector<BleuStats>{bleu_stats("a b c", "a b c")}), 0.0);
  EXPECT_THROW(corpus_bleu(std::vector<BleuStats>{}), std::invalid_argument);
}

TEST(CorpusBleuTest, BrevityPenalty) {
  const auto s = bleu_stats("a b c d", "a b c d e f g h");
  EXPECT_NEAR(corpus_bleu(std::vector<BleuStats>{s}), 100.0 * std::exp(1.0 - 2.0), 1e-12);
}

TEST(SentenceBleuTest, ShortIdentityIsHundred) {
  EXPECT_EQ(sentence_bleu("she went home", "she went home"), 100.0);
  EXPECT_EQ(sentence_bleu("home", "HOME"), 100.0);
}

TEST(OverlapProfileTest, Examples) {
  const auto p = overlap_profile("a b x", "a b c");
  EXPECT_DOUBLE_EQ(p[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
  EXPECT_EQ(p[2], 0.0);
  EXPECT_EQ(p[3], 0.0);
  EXPECT_EQ(overlap_profile("a b c d", "a b c d"), (std::array<double, 4>{1, 1, 1, 1}));
  EXPECT_EQ(overlap_profile("a b c d", "e f g h"), (std::array<double, 4>{0, 0, 0, 0}));
}

std::string random_sentence(std::mt19937& rng, int min_len) {
  static const std::vector<std::string> words = {"a", "b", "c", "The", "the", "dog", "Dog", "ran"};
  std::string s;
  for (int i = min_len + static_cast<int>(rng() % 6); i > 0; --i) s += words[rng() % words.size()] + " ";
  return s;
}

TEST(BleuPropertyTest, SelfScoreCaseInvarianceAndPermutation) {
  std::mt19937 rng(8);
  std::vector<BleuStats> stats;
  for (int i = 0; i < 200; ++i) {
    const std::string x = random_sentence(rng, 4);
    EXPECT_EQ(corpus_bleu(std::vector<BleuStats>{bleu_stats(x, x)}), 100.0);
    const std::string y = random_sentence(rng, 1);
    std::string upper = y;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    EXPECT_EQ(bleu_stats(y, x), bleu_stats(upper, x));
    stats.push_back(bleu_stats(y, x));
  }
  const double base = corpus_bleu(stats);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(stats.begin(), stats.end(), rng);
    EXPECT_EQ(corpus_bleu(stats), base);
  }
}

// Values in bleu_oracle.json come from sacrebleu; see make_fixtures.py.
TEST(BleuOracleTest, AgreesWithReferenceImplementation) {
  std::ifstream pairs_file(std::string(LEXBIAS_FIXTURE_DIR) + "/bleu_pairs.tsv");
  std::ifstream oracle_file(std::string(LEXBIAS_FIXTURE_DIR) + "/bleu_oracle.json");
  ASSERT_TRUE(pairs_file && oracle_file);
  const auto oracle = nlohmann::json::parse(oracle_file);
  std::vector<BleuStats> stats;
  for (std::string line; std::getline(pairs_file, line);) {
    const auto tab = line.find('\t');
    const std::string cand = line.substr(0, tab);
    const std::string ref = line.substr(tab + 1);
    const auto& want = oracle["pairs"][stats.size()];
    const BleuStats s = bleu_stats(cand, ref);
    for (int n = 0; n < 4; ++n) {
      EXPECT_EQ(s.matches[n], want["matches"][n].get<long>()) << "pair " << stats.size();
      EXPECT_EQ(s.counts[n], want["counts"][n].get<long>()) << "pair " << stats.size();
    }
    EXPECT_EQ(s.candidate_length, want["candidate_length"].get<long>());
    EXPECT_EQ(s.reference_length, want["reference_length"].get<long>());
    EXPECT_NEAR(sentence_bleu(cand, ref), want["sentence_bleu"].get<double>(), 1e-4) << "pair " << stats.size();
    stats.push_back(s);
  }
  ASSERT_EQ(stats.size(), 50u);
  for (const auto& [n, value] : oracle["corpus"].items()) {
    const auto k = static_cast<std::size_t>(std::stoi(n));
    EXPECT_NEAR(corpus_bleu(std::span(stats).first(k)), value.get<double>(), 1e-4) << "first " << k;
  }
}

}  // namespace
}  // namespace lexbias
