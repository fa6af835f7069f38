#include <benchmark/benchmark.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "lexbias/beam_decoder.h"
#include "lexbias/penalty_table.h"
#include "lexbias/text.h"
#include "lexbias/toy_models.h"

namespace {

using namespace lexbias;

// Synthetic vocab of `n` tokens: word-initial and continuation pieces over a
// small alphabet, so prefix lookups have plenty of hits.
SubwordVocab synthetic_vocab(std::size_t n) {
  const std::string mark(kWordBoundary);
  std::vector<std::string> tokens = {"</s>", "<unk>"};
  std::mt19937 rng(11);
  std::set<std::string> seen(tokens.begin(), tokens.end());
  while (tokens.size() < n) {
    std::string piece;
    for (int len = 1 + static_cast<int>(rng() % 6); len > 0; --len) piece += static_cast<char>('a' + rng() % 8);
    if (rng() % 4 == 0) piece[0] = static_cast<char>(piece[0] - 'a' + 'A');
    const std::string raw = (rng() % 3 ? mark : "") + piece;
    if (seen.insert(raw).second) tokens.push_back(raw);
  }
  return SubwordVocab::from_tokens(tokens);
}

std::string synthetic_sentence(int words) {
  std::mt19937 rng(3);
  std::string s;
  for (int i = 0; i < words; ++i) {
    for (int len = 2 + static_cast<int>(rng() % 5); len > 0; --len) s += static_cast<char>('a' + rng() % 8);
    s += ' ';
  }
  return s;
}

void BM_BuildPenalties(benchmark::State& state) {
  const auto vocab = synthetic_vocab(static_cast<std::size_t>(state.range(0)));
  const auto sentence = synthetic_sentence(static_cast<int>(state.range(1)));
  const DecodeConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(build_penalties(sentence, vocab, config));
}
BENCHMARK(BM_BuildPenalties)->Args({1000, 12})->Args({32000, 12})->Args({32000, 40});

void BM_Adjustments(benchmark::State& state) {
  const auto vocab = synthetic_vocab(32000);
  const auto sentence = synthetic_sentence(30);
  const auto table = build_penalties(sentence, vocab, DecodeConfig{});
  const auto words = split_whitespace(sentence);
  const std::vector<std::string> suffix(words.begin() + 4, words.begin() + 7);
  for (auto _ : state) benchmark::DoNotOptimize(table.adjustments(suffix));
}
BENCHMARK(BM_Adjustments);

void BM_Penalize(benchmark::State& state) {
  const auto vocab = synthetic_vocab(32000);
  const auto sentence = synthetic_sentence(30);
  const auto table = build_penalties(sentence, vocab, DecodeConfig{});
  const auto words = split_whitespace(sentence);
  const std::vector<std::string> suffix(words.begin() + 4, words.begin() + 7);
  const std::vector<double> logprobs(vocab.size(), -10.0);
  for (auto _ : state) benchmark::DoNotOptimize(table.penalize(suffix, logprobs));
}
BENCHMARK(BM_Penalize);

void BM_DecodeCopy(benchmark::State& state) {
  const auto vocab = synthetic_vocab(static_cast<std::size_t>(state.range(0)));
  const CopyModel model(vocab);
  const auto sentence = synthetic_sentence(12);
  DecodeConfig config;
  config.alpha = 0.006;
  for (auto _ : state) benchmark::DoNotOptimize(decode(model, sentence, vocab, config));
}
BENCHMARK(BM_DecodeCopy)->Arg(1000)->Arg(8000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
