#include "lexbias/toy_models.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <fstream>
#include <stdexcept>

#include "lexbias/text.h"

namespace lexbias {

CopyModel::CopyModel(const SubwordVocab& vocab, double margin) : vocab_(&vocab), margin_(margin) {
  if (!(margin > 0.0) || !std::isfinite(margin)) throw std::invalid_argument("copy margin must be > 0");
}

TokenId CopyModel::copy_token(std::string_view source, std::size_t prefix_len) const {
  const auto copy = vocab_->segment(source);
  return prefix_len < copy.size() ? copy[prefix_len] : vocab_->eos_id();
}

std::vector<double> CopyModel::score_step(std::string_view source, std::span<const TokenId> prefix) const {
  std::vector<double> out(vocab_->size(), -margin_);
  out[static_cast<std::size_t>(copy_token(source, prefix.size()))] = 0.0;
  return out;
}

NgramLM NgramLM::train(const std::filesystem::path& corpus, int order, double delta, const SubwordVocab& vocab) {
  std::ifstream in(corpus, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus: " + corpus.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!split_whitespace(line).empty()) lines.push_back(std::move(line));
  }
  if (lines.empty()) throw std::runtime_error("corpus is empty: " + corpus.string());
  return train(lines, order, delta, vocab);
}

NgramLM NgramLM::train(const std::vector<std::string>& sentences, int order, double delta, const SubwordVocab& vocab) {
  if (order < 1) throw std::invalid_argument("n-gram order must be >= 1");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("smoothing delta must be > 0");
  NgramLM lm(vocab, order, delta);
  std::size_t used = 0;
  for (const auto& sentence : sentences) {
    std::vector<TokenId> tokens = vocab.segment(sentence);
    if (tokens.empty()) continue;
    tokens.push_back(vocab.eos_id());
    ++used;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto ctx = lm.context_of(std::span<const TokenId>(tokens).first(i));
      auto& slot = lm.counts_[std::vector<TokenId>(ctx.begin(), ctx.end())];
      ++slot.total;
      ++slot.next[tokens[i]];
    }
  }
  if (used == 0) throw std::runtime_error("corpus has no sentences");
  return lm;
}

std::span<const TokenId> NgramLM::context_of(std::span<const TokenId> prefix) const {
  const auto width = std::min<std::size_t>(prefix.size(), static_cast<std::size_t>(order_ - 1));
  return prefix.last(width);
}

const NgramLM::ContextCounts* NgramLM::lookup(std::span<const TokenId> context) const {
  auto it = counts_.find(std::vector<TokenId>(context.begin(), context.end()));
  return it == counts_.end() ? nullptr : &it->second;
}

double NgramLM::prob(std::span<const TokenId> prefix, TokenId token) const {
  const double v = static_cast<double>(vocab_->size());
  const ContextCounts* c = lookup(context_of(prefix));
  if (!c) return 1.0 / v;
  auto it = c->next.find(token);
  const double count = it == c->next.end() ? 0.0 : static_cast<double>(it->second);
  return (count + delta_) / (static_cast<double>(c->total) + delta_ * v);
}

std::vector<double> NgramLM::score_step(std::string_view /*source*/, std::span<const TokenId> prefix) const {
  const double v = static_cast<double>(vocab_->size());
  const ContextCounts* c = lookup(context_of(prefix));
  if (!c) return std::vector<double>(vocab_->size(), -std::log(v));
  const double denom = std::log(static_cast<double>(c->total) + delta_ * v);
  std::vector<double> out(vocab_->size(), std::log(delta_) - denom);
  for (const auto& [token, count] : c->next) {
    out[static_cast<std::size_t>(token)] = std::log(static_cast<double>(count) + delta_) - denom;
  }
  return out;
}

namespace {

std::map<std::string, std::string> parse_params(std::string_view params, std::string_view spec) {
  std::map<std::string, std::string> out;
  if (params.empty()) return out;
  std::size_t start = 0;
  while (start <= params.size()) {
    const std::size_t comma = std::min(params.find(',', start), params.size());
    const std::string_view item = params.substr(start, comma - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw std::invalid_argument("malformed model parameter '" + std::string(item) + "' in '" + std::string(spec) +
                                  "'");
    }
    out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) throw std::invalid_argument(key + " is not a number: '" + value + "'");
  return d;
}

int parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  int i = 0;
  try {
    i = std::stoi(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) throw std::invalid_argument(key + " is not an integer: '" + value + "'");
  return i;
}

}  // namespace

std::unique_ptr<SequenceModel> make_model(std::string_view spec, const SubwordVocab& vocab) {
  const std::size_t colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  auto params = parse_params(colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1), spec);

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    std::string v = it->second;
    params.erase(it);
    return v;
  };
  auto reject_leftovers = [&] {
    if (!params.empty()) {
      throw std::invalid_argument("unknown model parameter '" + params.begin()->first + "' in '" + std::string(spec) +
                                  "'");
    }
  };

  if (kind == "copy") {
    const auto g = take("g");
    reject_leftovers();
    return std::make_unique<CopyModel>(vocab, g ? parse_double("g", *g) : CopyModel::kDefaultMargin);
  }
  if (kind == "ngram") {
    const auto order = take("order");
    const auto delta = take("delta");
    const auto corpus = take("corpus");
    reject_leftovers();
    if (!corpus) throw std::invalid_argument("ngram model needs corpus=PATH");
    return std::make_unique<NgramLM>(NgramLM::train(std::filesystem::path(*corpus),
                                                    order ? parse_int("order", *order) : 3,
                                                    delta ? parse_double("delta", *delta) : 0.1, vocab));
  }
  throw std::invalid_argument("unknown model kind '" + std::string(kind) + "' (expected copy or ngram)");
}

}  // namespace lexbias
