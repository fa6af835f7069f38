#include "lexbias/beam_decoder.h"

#include <algorithm>
#include <stdexcept>

#include "lexbias/text.h"

namespace lexbias {

namespace {

void push_word(std::vector<std::string>& words, std::string word, int max_order) {
  const auto keep = static_cast<std::size_t>(std::max(max_order - 1, 0));
  words.push_back(std::move(word));
  if (words.size() > keep) words.erase(words.begin(), words.end() - static_cast<std::ptrdiff_t>(keep));
}

struct Candidate {
  double score;
  double logprob;
  double penalty;
  TokenId token;
  std::size_t parent;
};

// Higher score first; ties go to the lower token id, then the better-ranked
// parent. All candidates of one step have equal length.
bool candidate_before(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.token != b.token) return a.token < b.token;
  return a.parent < b.parent;
}

double ranking_score(const Hypothesis& h, bool length_normalize) {
  if (!length_normalize || h.tokens.empty()) return h.score;
  return h.score / static_cast<double>(h.tokens.size());
}

// Ties: lower token ids first, then the shorter hypothesis.
bool hypothesis_before(const Hypothesis& a, const Hypothesis& b, bool length_normalize) {
  const double sa = ranking_score(a, length_normalize);
  const double sb = ranking_score(b, length_normalize);
  if (sa != sb) return sa > sb;
  return a.tokens < b.tokens;
}

ScoredOutput to_output(const Hypothesis& h, const SubwordVocab& vocab) {
  return {join(vocab.words_from_tokens(h.tokens, /*finalize=*/true)), h.tokens, h.score, h.model_score, h.penalty};
}

}  // namespace

std::vector<std::string> context_words(const Hypothesis& hyp, int max_order) {
  std::vector<std::string> words = hyp.complete_words;
  if (!hyp.pending.empty()) push_word(words, casefold(hyp.pending), max_order);
  const auto keep = static_cast<std::size_t>(std::max(max_order - 1, 0));
  if (words.size() > keep) words.erase(words.begin(), words.end() - static_cast<std::ptrdiff_t>(keep));
  return words;
}

Hypothesis advance_word_state(Hypothesis hyp, const Subword& subword, TokenId eos_id, int max_order) {
  if (hyp.finished) throw std::logic_error("cannot extend a finished hypothesis");
  hyp.tokens.push_back(subword.id);
  if (subword.id == eos_id) {
    if (!hyp.pending.empty()) push_word(hyp.complete_words, casefold(hyp.pending), max_order);
    hyp.pending.clear();
    hyp.finished = true;
    return hyp;
  }
  if (subword.word_initial) {
    if (!hyp.pending.empty()) push_word(hyp.complete_words, casefold(hyp.pending), max_order);
    hyp.pending = subword.surface;
  } else {
    hyp.pending += subword.surface;
  }
  return hyp;
}

DecodeResult decode(const SequenceModel& model, std::string_view source, const SubwordVocab& vocab,
                    const DecodeConfig& config) {
  config.validate();
  return decode_with_table(model, source, vocab, config, build_penalties(source, vocab, config));
}

DecodeResult decode_with_table(const SequenceModel& model, std::string_view source, const SubwordVocab& vocab,
                               const DecodeConfig& config, const PenaltyTable& table) {
  config.validate();
  if (split_whitespace(source).empty()) throw std::invalid_argument("source sentence is empty");
  if (model.vocab_size() != vocab.size()) {
    throw std::runtime_error("model vocab size " + std::to_string(model.vocab_size()) + " != vocab size " +
                             std::to_string(vocab.size()));
  }

  const auto beam = static_cast<std::size_t>(config.beam_size);
  const TokenId eos = vocab.eos_id();
  std::vector<Hypothesis> live(1);
  std::vector<Hypothesis> finished;
  std::vector<Candidate> candidates;

  const auto hyp_order = [&](const Hypothesis& a, const Hypothesis& b) {
    return hypothesis_before(a, b, config.length_normalize);
  };
  // Once beam_size hypotheses have finished, keep going only while some live
  // hypothesis still outscores the worst of the best beam_size finished ones.
  // Step scores are log-probs minus penalties (<= 0), so a live score only
  // drops.
  const auto done = [&] {
    if (finished.size() < beam) return false;
    std::nth_element(finished.begin(), finished.begin() + static_cast<std::ptrdiff_t>(beam - 1), finished.end(),
                     hyp_order);
    const Hypothesis& worst = finished[beam - 1];
    return std::none_of(live.begin(), live.end(), [&](const Hypothesis& h) { return hyp_order(h, worst); });
  };

  for (int step = 0; step < config.max_len && !live.empty() && !done(); ++step) {
    candidates.clear();
    const bool eos_allowed = step >= config.min_len;
    for (std::size_t p = 0; p < live.size(); ++p) {
      const Hypothesis& h = live[p];
      const std::vector<double> logprobs = model.score_step(source, h.tokens);
      if (logprobs.size() != vocab.size()) {
        throw std::runtime_error("model returned " + std::to_string(logprobs.size()) + " scores for a vocab of " +
                                 std::to_string(vocab.size()));
      }
      const auto adjustments = table.adjustments(context_words(h, config.max_order));
      auto adj = adjustments.begin();
      for (std::size_t v = 0; v < logprobs.size(); ++v) {
        const auto token = static_cast<TokenId>(v);
        double penalty = 0.0;
        if (adj != adjustments.end() && adj->id == token) {
          penalty = adj->penalty;
          ++adj;
        }
        if (token == eos && !eos_allowed) continue;
        const double penalized = logprobs[v] - penalty;
        candidates.push_back({h.score + penalized, logprobs[v], penalty, token, p});
      }
    }

    const std::size_t keep = std::min(beam, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                      candidate_before);

    std::vector<Hypothesis> next;
    next.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
      const Candidate& c = candidates[i];
      Hypothesis h = advance_word_state(live[c.parent], vocab[c.token], eos, config.max_order);
      h.score = c.score;
      h.model_score += c.logprob;
      h.penalty += c.penalty;
      if (h.finished) {
        finished.push_back(std::move(h));
      } else {
        next.push_back(std::move(h));
      }
    }
    live = std::move(next);
  }

  DecodeResult result;
  std::vector<Hypothesis>& pool = finished.empty() ? live : finished;
  result.truncated = finished.empty();
  std::sort(pool.begin(), pool.end(), hyp_order);
  if (pool.size() > beam) pool.resize(beam);
  for (const auto& h : pool) result.n_best.push_back(to_output(h, vocab));
  if (!result.n_best.empty()) {
    const ScoredOutput& top = result.n_best.front();
    result.best = top.text;
    result.best_tokens = top.tokens;
    result.score = top.score;
    result.model_score = top.model_score;
    result.total_penalty = top.penalty;
    result.steps = static_cast<int>(top.tokens.size());
  }
  return result;
}

}  // namespace lexbias
