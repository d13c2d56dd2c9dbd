#include "btsel/ngram.hpp"

#include "btsel/errors.hpp"

namespace btsel {

std::vector<NGram> extract_ngrams(const Sentence& s, int order) {
  if (order < 1) throw ConfigError("n-gram order must be >= 1");
  std::vector<NGram> grams;
  const std::size_t m = s.tokens.size();
  for (int n = 1; n <= order; ++n) {
    if (static_cast<std::size_t>(n) > m) break;
    for (std::size_t start = 0; start + n <= m; ++start) {
      grams.emplace_back(s.tokens.begin() + start, s.tokens.begin() + start + n);
    }
  }
  return grams;
}

SeedNGramSet::SeedNGramSet(const Corpus& seed, int order) : order_(order) {
  if (order < 1 || order > kMaxNgramOrder) {
    throw ConfigError("n-gram order must be in [1, " + std::to_string(kMaxNgramOrder) + "]");
  }
  if (seed.empty()) throw DataError("seed corpus is empty");
  std::vector<std::uint32_t> ids;
  for (const Sentence& s : seed) {
    ids.clear();
    for (const std::string& tok : s.tokens) {
      auto [it, inserted] =
          token_ids_.try_emplace(tok, static_cast<std::uint32_t>(token_ids_.size()));
      ids.push_back(it->second);
    }
    const std::size_t m = ids.size();
    for (int n = 1; n <= order_; ++n) {
      if (static_cast<std::size_t>(n) > m) break;
      for (std::size_t start = 0; start + n <= m; ++start) {
        detail::GramKey key{};
        key.len = static_cast<std::uint8_t>(n);
        for (int j = 0; j < n; ++j) key.ids[j] = ids[start + j];
        grams_.try_emplace(key, static_cast<std::uint32_t>(grams_.size()));
      }
    }
  }
}

std::uint32_t SeedNGramSet::token_id(std::string_view token) const {
  auto it = token_ids_.find(token);
  return it == token_ids_.end() ? kNoToken : it->second;
}

std::uint32_t SeedNGramSet::gram_id(const NGram& gram) const {
  if (gram.empty() || gram.size() > static_cast<std::size_t>(order_)) return kNoGram;
  detail::GramKey key{};
  key.len = static_cast<std::uint8_t>(gram.size());
  for (std::size_t j = 0; j < gram.size(); ++j) {
    std::uint32_t id = token_id(gram[j]);
    if (id == kNoToken) return kNoGram;
    key.ids[j] = id;
  }
  auto it = grams_.find(key);
  return it == grams_.end() ? kNoGram : it->second;
}

void SeedNGramSet::encode(const std::vector<std::string>& tokens,
                          std::vector<std::uint32_t>& out,
                          std::vector<std::uint32_t>& ids_scratch) const {
  ids_scratch.clear();
  for (const std::string& tok : tokens) ids_scratch.push_back(token_id(tok));
  const std::size_t m = ids_scratch.size();
  for (int n = 1; n <= order_; ++n) {
    if (static_cast<std::size_t>(n) > m) break;
    for (std::size_t start = 0; start + n <= m; ++start) {
      detail::GramKey key{};
      key.len = static_cast<std::uint8_t>(n);
      bool oov = false;
      for (int j = 0; j < n; ++j) {
        std::uint32_t id = ids_scratch[start + j];
        if (id == kNoToken) {
          oov = true;
          break;
        }
        key.ids[j] = id;
      }
      if (oov) continue;
      auto it = grams_.find(key);
      if (it != grams_.end()) out.push_back(it->second);
    }
  }
}

std::vector<std::uint32_t> SeedNGramSet::encode(const std::vector<std::string>& tokens) const {
  std::vector<std::uint32_t> out, scratch;
  encode(tokens, out, scratch);
  return out;
}

std::vector<NGram> shared_ngrams(const Sentence& s, const SeedNGramSet& seed) {
  std::vector<NGram> shared;
  for (NGram& gram : extract_ngrams(s, seed.order())) {
    if (seed.contains(gram)) shared.push_back(std::move(gram));
  }
  return shared;
}

void SelectedCounts::add_sentence(const Sentence& s) {
  for (std::uint32_t g : seed_->encode(s.tokens)) ++counts_[g];
  ++version_;
}

std::uint32_t SelectedCounts::count_of(const NGram& gram) const {
  std::uint32_t id = seed_->gram_id(gram);
  return id == SeedNGramSet::kNoGram ? 0 : counts_[id];
}

}  // namespace btsel
