#include "lexbias/subword_vocab.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "lexbias/text.h"

namespace lexbias {
namespace {

const std::string M(kWordBoundary);

std::filesystem::path write_temp(const std::string& name, const std::string& contents) {
  auto path = std::filesystem::temp_directory_path() / ("lexbias_" + name);
  std::ofstream(path, std::ios::binary) << contents;
  return path;
}

std::set<std::string> raws(const SubwordVocab& v, const std::vector<TokenId>& ids) {
  std::set<std::string> out;
  for (TokenId id : ids) out.insert(v[id].raw);
  return out;
}

SubwordVocab vocab_of(std::vector<std::string> tokens) {
  tokens.insert(tokens.begin(), {"</s>", "<unk>"});
  return SubwordVocab::from_tokens(std::move(tokens));
}

TEST(LoadVocabTest, LineOrderAndBoundaryFlags) {
  const auto path = write_temp("vocab1.txt", "</s>\n<unk>\n" + M + "the\n" + M + "The\natre\n");
  const auto v = SubwordVocab::load(path);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.eos_id(), 0);
  EXPECT_EQ(v.unk_id(), 1);
  EXPECT_TRUE(v[2].word_initial);
  EXPECT_EQ(v[2].surface, "the");
  EXPECT_FALSE(v[4].word_initial);
  EXPECT_EQ(v[3].surface_folded, "the");
  EXPECT_EQ(v[3].surface_folded, v[2].surface_folded);
  for (const auto& s : v.subwords()) {
    EXPECT_EQ(s.surface_folded, casefold(s.surface));
    EXPECT_EQ(s.surface.find(kWordBoundary), std::string::npos);
  }
}

TEST(LoadVocabTest, DuplicateTokenNamesLine) {
  const auto path = write_temp("vocab_dup.txt", "</s>\n<unk>\n" + M + "the\nx\n" + M + "the\n");
  try {
    SubwordVocab::load(path);
    FAIL() << "expected duplicate-token error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
  }
}

TEST(LoadVocabTest, MissingReservedAndEmpty) {
  EXPECT_THROW(SubwordVocab::load(write_temp("vocab_noeos.txt", "<unk>\n" + M + "a\n")), std::runtime_error);
  EXPECT_THROW(SubwordVocab::load(write_temp("vocab_nounk.txt", "</s>\n" + M + "a\n")), std::runtime_error);
  EXPECT_THROW(SubwordVocab::load(write_temp("vocab_empty.txt", "")), std::runtime_error);
  EXPECT_THROW(SubwordVocab::load("/nonexistent/vocab.txt"), std::runtime_error);
}

TEST(LoadVocabTest, ReservedTokensAnywhere) {
  const auto v = SubwordVocab::from_tokens({M + "a", "<unk>", "b", "</s>"});
  EXPECT_EQ(v.eos_id(), 3);
  EXPECT_EQ(v.unk_id(), 1);
}

TEST(SubwordsBeginningTest, CaseVariantsIncluded) {
  const auto v = vocab_of({M + "the", M + "The", M + "th", "atre", M + "x"});
  EXPECT_EQ(raws(v, v.subwords_beginning("theatre")), (std::set<std::string>{M + "the", M + "The", M + "th"}));
}

TEST(SubwordsBeginningTest, OnlyWordInitial) {
  const auto v = vocab_of({M + "store.", M + "st", "ore."});
  EXPECT_EQ(raws(v, v.subwords_beginning("store.")), (std::set<std::string>{M + "store.", M + "st"}));
}

TEST(SubwordsBeginningTest, PrefixDirection) {
  const auto v = vocab_of({M + "thereby"});
  EXPECT_TRUE(v.subwords_beginning("the").empty());
}

TEST(SubwordsBeginningTest, NeverEos) {
  const auto v = vocab_of({M + "a"});
  EXPECT_TRUE(v.subwords_beginning("</s>").empty());
}

TEST(WordsFromTokensTest, Examples) {
  const auto v = vocab_of({M + "the", "atre", M + "is", M + "She", M + "went"});
  const TokenId eos = v.eos_id();
  const auto id = [&](const std::string& raw) { return *v.find(raw); };
  EXPECT_EQ(v.words_from_tokens(std::vector<TokenId>{id(M + "the"), id("atre"), id(M + "is"), eos}),
            (std::vector<std::string>{"theatre", "is"}));
  EXPECT_EQ(v.words_from_tokens(std::vector<TokenId>{id(M + "She"), id(M + "went")}, true),
            (std::vector<std::string>{"She", "went"}));
  EXPECT_EQ(v.words_from_tokens(std::vector<TokenId>{id(M + "She"), id(M + "went")}),
            (std::vector<std::string>{"She"}));
  EXPECT_EQ(v.words_from_tokens(std::vector<TokenId>{id("atre")}, true), (std::vector<std::string>{"atre"}));
}

TEST(WordsFromTokensTest, Errors) {
  const auto v = vocab_of({M + "a"});
  EXPECT_THROW(v.words_from_tokens(std::vector<TokenId>{7}), std::out_of_range);
  EXPECT_THROW(v.words_from_tokens(std::vector<TokenId>{v.eos_id(), 2}), std::invalid_argument);
}

// Random vocabularies over a tiny alphabet so that prefix collisions are common.
struct RandomVocab {
  std::vector<std::string> tokens;
  SubwordVocab vocab;
};

std::string random_piece(std::mt19937& rng, int max_len) {
  static const std::vector<std::string> alphabet = {"a", "b", "A", "B", "é", "É"};
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
  std::string s;
  for (int i = len(rng); i > 0; --i) s += alphabet[ch(rng)];
  return s;
}

RandomVocab random_vocab(std::mt19937& rng, int size) {
  std::set<std::string> seen = {"</s>", "<unk>"};
  std::vector<std::string> tokens = {"</s>", "<unk>"};
  std::bernoulli_distribution initial(0.6);
  while (static_cast<int>(tokens.size()) < size) {
    std::string t = (initial(rng) ? M : "") + random_piece(rng, 4);
    if (seen.insert(t).second) tokens.push_back(t);
  }
  std::shuffle(tokens.begin(), tokens.end(), rng);
  auto copy = tokens;
  return {std::move(tokens), SubwordVocab::from_tokens(std::move(copy))};
}

TEST(SubwordVocabPropertyTest, SubwordsBeginningMatchesBruteForce) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rv = random_vocab(rng, 5 + trial % 60);
    const std::string word = random_piece(rng, 6);
    const auto got = rv.vocab.subwords_beginning(word);
    std::vector<TokenId> want;
    const std::string folded = casefold(word);
    for (const auto& s : rv.vocab.subwords()) {
      if (s.word_initial && !s.surface_folded.empty() && folded.starts_with(s.surface_folded)) want.push_back(s.id);
    }
    ASSERT_EQ(got, want) << "word=" << word;
    // Case closure.
    for (TokenId i : got) {
      for (const auto& s : rv.vocab.subwords()) {
        if (s.word_initial && s.surface_folded == rv.vocab[i].surface_folded) {
          EXPECT_TRUE(std::binary_search(got.begin(), got.end(), s.id));
        }
      }
    }
  }
}

TEST(SubwordVocabPropertyTest, SegmentationRoundTrips) {
  std::mt19937 rng(5);
  std::vector<std::string> tokens = {"</s>", "<unk>"};
  for (const char* c : {"a", "b", "A", "B", "é", "É"}) {
    tokens.push_back(M + c);
    tokens.push_back(c);
  }
  for (const char* t : {"ab", "bA", "éa", "aaB"}) {
    tokens.push_back(M + t);
    tokens.push_back(t);
  }
  const auto v = SubwordVocab::from_tokens(tokens);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> words;
    for (int i = 1 + trial % 5; i > 0; --i) words.push_back(random_piece(rng, 7));
    const auto ids = v.segment(join(words));
    ASSERT_TRUE(v[ids.front()].word_initial);
    EXPECT_EQ(v.words_from_tokens(ids, true), words);
  }
}

TEST(SegmentTest, GreedyLongestMatch) {
  const auto v = vocab_of({M + "th", M + "the", "atre", "a", "t", "r", "e"});
  const auto ids = v.segment("theatre");
  ASSERT_EQ(ids.size(), 2u);
  EXPECT_EQ(v[ids[0]].raw, M + "the");
  EXPECT_EQ(v[ids[1]].raw, "atre");
}

TEST(SegmentTest, UncoveredCodePointBecomesUnk) {
  const auto v = vocab_of({M + "a"});
  const auto ids = v.segment("aé");
  ASSERT_EQ(ids.size(), 2u);
  EXPECT_EQ(ids[1], v.unk_id());
}

}  // namespace
}  // namespace lexbias
