#include "lexbias/penalty_table.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "lexbias/text.h"

namespace lexbias {

std::vector<WordNgram> extract_ngrams(std::string_view input, int max_order) {
  if (max_order < 1) throw std::invalid_argument("max_order must be >= 1");
  std::vector<std::string> words = split_whitespace(input);
  if (words.empty()) throw std::invalid_argument("input has no words");
  for (auto& w : words) w = casefold(w);

  std::set<WordNgram> ngrams;
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(max_order), words.size());
  for (std::size_t n = 1; n <= top; ++n) {
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
      ngrams.emplace(words.begin() + static_cast<std::ptrdiff_t>(i),
                     words.begin() + static_cast<std::ptrdiff_t>(i + n));
    }
  }
  return {ngrams.begin(), ngrams.end()};
}

double ngram_penalty(double alpha, double beta, int n) {
  return alpha * std::pow(static_cast<double>(n), beta);
}

std::string PenaltyTable::encode(std::span<const std::string> context) {
  // Length-prefixed so that no two distinct word tuples collide.
  std::string key;
  for (const auto& w : context) {
    key += std::to_string(w.size());
    key += ':';
    key += w;
  }
  return key;
}

const PenaltyTable::Entry* PenaltyTable::find(std::span<const std::string> context) const {
  auto it = index_.find(encode(context));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::vector<TokenPenalty> PenaltyTable::adjustments(std::span<const std::string> word_suffix) const {
  std::vector<TokenPenalty> out;
  if (entries_.empty()) return out;
  const std::size_t longest = std::min<std::size_t>(word_suffix.size(), static_cast<std::size_t>(max_order_ - 1));
  for (std::size_t k = 0; k <= longest; ++k) {
    if (const Entry* e = find(word_suffix.last(k))) {
      out.insert(out.end(), e->penalties.begin(), e->penalties.end());
    }
  }
  std::sort(out.begin(), out.end(), [](const TokenPenalty& a, const TokenPenalty& b) {
    return a.id != b.id ? a.id < b.id : a.penalty > b.penalty;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const TokenPenalty& a, const TokenPenalty& b) { return a.id == b.id; }),
            out.end());
  return out;
}

std::vector<double> PenaltyTable::penalize(std::span<const std::string> word_suffix,
                                           std::span<const double> logprobs) const {
  if (vocab_size_ != 0 && logprobs.size() != vocab_size_) {
    throw std::invalid_argument("penalize: got " + std::to_string(logprobs.size()) + " log-probs for a vocab of " +
                                std::to_string(vocab_size_));
  }
  std::vector<double> out(logprobs.begin(), logprobs.end());
  for (const auto& [id, penalty] : adjustments(word_suffix)) {
    out[static_cast<std::size_t>(id)] = logprobs[static_cast<std::size_t>(id)] - penalty;
  }
  return out;
}

std::string PenaltyTable::to_json(const SubwordVocab& vocab) const {
  std::string out = "{\"max_order\": " + std::to_string(max_order_) + ", \"entries\": [";
  char buf[64];
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    out += i ? ", " : "";
    out += "{\"context\": [";
    for (std::size_t j = 0; j < e.context.size(); ++j) {
      out += j ? ", " : "";
      out += nlohmann::json(e.context[j]).dump();
    }
    out += "], \"penalties\": {";
    for (std::size_t j = 0; j < e.penalties.size(); ++j) {
      out += j ? ", " : "";
      out += nlohmann::json(vocab.at(e.penalties[j].id).raw).dump();
      std::snprintf(buf, sizeof buf, ": %.6f", e.penalties[j].penalty);
      out += buf;
    }
    out += "}}";
  }
  out += "]}";
  return out;
}

PenaltyTable build_penalties(std::string_view input, const SubwordVocab& vocab, const DecodeConfig& config) {
  config.validate();
  const auto ngrams = extract_ngrams(input, config.max_order);

  PenaltyTable table;
  table.max_order_ = config.max_order;
  table.vocab_size_ = vocab.size();
  if (config.alpha == 0.0) return table;

  std::map<std::vector<std::string>, std::map<TokenId, double>> staged;
  for (const auto& ngram : ngrams) {
    const int n = static_cast<int>(ngram.size());
    const double penalty = ngram_penalty(config.alpha, config.beta, n);
    const auto targets = vocab.subwords_beginning(ngram.back());
    if (targets.empty()) continue;
    auto& slot = staged[std::vector<std::string>(ngram.begin(), ngram.end() - 1)];
    for (TokenId id : targets) {
      auto [it, inserted] = slot.emplace(id, penalty);
      if (!inserted) it->second = std::max(it->second, penalty);
    }
  }

  table.entries_.reserve(staged.size());
  for (auto& [context, penalties] : staged) {
    PenaltyTable::Entry e;
    e.context = context;
    e.penalties.reserve(penalties.size());
    for (const auto& [id, p] : penalties) e.penalties.push_back({id, p});
    table.index_.emplace(PenaltyTable::encode(e.context), table.entries_.size());
    table.entries_.push_back(std::move(e));
  }
  return table;
}

}  // namespace lexbias
