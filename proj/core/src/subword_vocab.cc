#include "lexbias/subword_vocab.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "lexbias/text.h"

namespace lexbias {

namespace {

std::vector<Subword> make_subwords(std::vector<std::string> tokens) {
  std::vector<Subword> subwords;
  subwords.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Subword s;
    s.id = static_cast<TokenId>(i);
    s.raw = std::move(tokens[i]);
    s.word_initial = s.raw.starts_with(kWordBoundary);
    s.surface = s.word_initial ? s.raw.substr(kWordBoundary.size()) : s.raw;
    // The marker is only meaningful at the front.
    for (auto pos = s.surface.find(kWordBoundary); pos != std::string::npos;
         pos = s.surface.find(kWordBoundary, pos)) {
      s.surface.erase(pos, kWordBoundary.size());
    }
    s.surface_folded = casefold(s.surface);
    subwords.push_back(std::move(s));
  }
  return subwords;
}

}  // namespace

SubwordVocab SubwordVocab::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open vocab file: " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(std::move(line));
  }
  if (tokens.empty()) throw std::runtime_error("vocab file is empty: " + path.string());
  try {
    return from_tokens(std::move(tokens));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

SubwordVocab SubwordVocab::from_tokens(std::vector<std::string> tokens) {
  if (tokens.empty()) throw std::runtime_error("vocab is empty");
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) {
      throw std::runtime_error("empty token on line " + std::to_string(i + 1));
    }
    auto [it, inserted] = seen.emplace(tokens[i], i);
    if (!inserted) {
      throw std::runtime_error("duplicate token '" + tokens[i] + "' on line " + std::to_string(i + 1) +
                               " (first on line " + std::to_string(it->second + 1) + ")");
    }
  }
  auto eos = seen.find(std::string(kEosToken));
  if (eos == seen.end()) throw std::runtime_error("reserved token </s> missing from vocab");
  auto unk = seen.find(std::string(kUnkToken));
  if (unk == seen.end()) throw std::runtime_error("reserved token <unk> missing from vocab");
  return SubwordVocab(make_subwords(std::move(tokens)), static_cast<TokenId>(eos->second),
                      static_cast<TokenId>(unk->second));
}

SubwordVocab::SubwordVocab(std::vector<Subword> subwords, TokenId eos, TokenId unk)
    : subwords_(std::move(subwords)), eos_id_(eos), unk_id_(unk) {
  by_raw_.reserve(subwords_.size());
  for (const auto& s : subwords_) {
    by_raw_.emplace(s.raw, s.id);
    if (s.id == eos_id_ || s.id == unk_id_) continue;
    if (s.word_initial) {
      prefix_index_[s.surface_folded].push_back(s.id);
      if (!s.surface.empty()) initial_exact_.emplace(s.surface, s.id);
    } else if (!s.surface.empty()) {
      continuation_exact_.emplace(s.surface, s.id);
    }
    max_surface_bytes_ = std::max(max_surface_bytes_, s.surface.size());
  }
}

const Subword& SubwordVocab::at(TokenId id) const {
  if (!valid(id)) throw std::out_of_range("token id " + std::to_string(id) + " outside vocab");
  return (*this)[id];
}

std::optional<TokenId> SubwordVocab::find(std::string_view raw) const {
  auto it = by_raw_.find(std::string(raw));
  if (it == by_raw_.end()) return std::nullopt;
  return it->second;
}

std::span<const TokenId> SubwordVocab::word_initial_with_surface(std::string_view folded_surface) const {
  auto it = prefix_index_.find(std::string(folded_surface));
  if (it == prefix_index_.end()) return {};
  return it->second;
}

std::vector<TokenId> SubwordVocab::subwords_beginning(std::string_view word) const {
  const std::string folded = casefold(word);
  std::vector<TokenId> ids;
  for (std::size_t end : codepoint_ends(folded)) {
    auto matches = word_initial_with_surface(std::string_view(folded).substr(0, end));
    ids.insert(ids.end(), matches.begin(), matches.end());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<std::string> SubwordVocab::words_from_tokens(std::span<const TokenId> ids, bool finalize) const {
  std::vector<std::string> words;
  std::string pending;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const TokenId id = ids[i];
    if (!valid(id)) throw std::out_of_range("token id " + std::to_string(id) + " outside vocab");
    if (id == eos_id_) {
      if (i + 1 != ids.size()) throw std::invalid_argument("eos before the end of a token sequence");
      finalize = true;
      break;
    }
    const Subword& s = (*this)[id];
    if (s.word_initial && !pending.empty()) {
      words.push_back(std::move(pending));
      pending.clear();
    }
    pending += s.surface;
  }
  if (finalize && !pending.empty()) words.push_back(std::move(pending));
  return words;
}

std::vector<TokenId> SubwordVocab::segment(std::string_view text) const {
  std::vector<TokenId> out;
  for (const auto& word : split_whitespace(text)) segment_word(word, out);
  return out;
}

void SubwordVocab::segment_word(std::string_view word, std::vector<TokenId>& out) const {
  const auto ends = codepoint_ends(word);
  std::size_t pos = 0;
  bool first = true;
  while (pos < word.size()) {
    const auto& table = first ? initial_exact_ : continuation_exact_;
    TokenId match = -1;
    std::size_t match_end = 0;
    for (auto it = ends.rbegin(); it != ends.rend(); ++it) {
      const std::size_t end = *it;
      if (end <= pos) break;
      if (end - pos > max_surface_bytes_) continue;
      auto found = table.find(std::string(word.substr(pos, end - pos)));
      if (found != table.end()) {
        match = found->second;
        match_end = end;
        break;
      }
    }
    if (match < 0) {
      match = unk_id_;
      match_end = *std::upper_bound(ends.begin(), ends.end(), pos);
    }
    out.push_back(match);
    pos = match_end;
    first = false;
  }
}

}  // namespace lexbias
