#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "btsel/corpus.hpp"

namespace btsel {

inline constexpr int kMaxNgramOrder = 8;

// An n-gram as plain tokens, for the slow/introspection API. The selection
// engine works on interned gram ids instead.
using NGram = std::vector<std::string>;

// All contiguous n-grams of orders 1..order, with multiplicity, in canonical
// enumeration order: order ascending, start position ascending. A sentence of
// length m yields sum over k of max(0, m-k+1) grams. This order also fixes
// the floating-point summation order of the selection scores.
std::vector<NGram> extract_ngrams(const Sentence& s, int order);

namespace detail {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

struct GramKey {
  std::array<std::uint32_t, kMaxNgramOrder> ids{};
  std::uint8_t len = 0;
  bool operator==(const GramKey&) const = default;
};

struct GramKeyHash {
  std::size_t operator()(const GramKey& k) const {
    std::uint64_t h = 1469598103934665603ULL;
    h = (h ^ k.len) * 1099511628211ULL;
    for (int i = 0; i < k.len; ++i) h = (h ^ k.ids[i]) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

// The seed-side n-gram inventory: every n-gram of orders 1..order occurring
// in the seed corpus, interned to dense ids. Tokens never seen in the seed
// map to a sentinel, and any window containing one is skipped outright —
// such an n-gram cannot occur in the seed, so it can never contribute to a
// score. Grams are compared by their full token-id sequence (hash collisions
// are resolved by equality). Immutable after construction.
class SeedNGramSet {
 public:
  static constexpr std::uint32_t kNoToken = 0xFFFFFFFFu;
  static constexpr std::uint32_t kNoGram = 0xFFFFFFFFu;

  SeedNGramSet(const Corpus& seed, int order);

  int order() const { return order_; }
  std::size_t num_grams() const { return grams_.size(); }
  std::size_t vocab_size() const { return token_ids_.size(); }

  std::uint32_t token_id(std::string_view token) const;
  std::uint32_t gram_id(const NGram& gram) const;
  bool contains(const NGram& gram) const { return gram_id(gram) != kNoGram; }

  // Appends the dense gram id of every seed-occurring n-gram of `tokens`
  // (with multiplicity, canonical enumeration order) to `out`.
  // `ids_scratch` avoids per-call allocation on the hot path.
  void encode(const std::vector<std::string>& tokens, std::vector<std::uint32_t>& out,
              std::vector<std::uint32_t>& ids_scratch) const;

  std::vector<std::uint32_t> encode(const std::vector<std::string>& tokens) const;

 private:
  int order_;
  std::unordered_map<std::string, std::uint32_t, detail::StringHash, std::equal_to<>> token_ids_;
  std::unordered_map<detail::GramKey, std::uint32_t, detail::GramKeyHash> grams_;
};

// The sub-multiset of extract_ngrams(s, seed.order()) occurring in the seed,
// one entry per candidate-side occurrence, canonical order.
std::vector<NGram> shared_ngrams(const Sentence& s, const SeedNGramSet& seed);

// Occurrence counts of seed n-grams over the selected set L. Only seed
// n-grams are tracked; anything else has zero score contribution forever.
class SelectedCounts {
 public:
  explicit SelectedCounts(const SeedNGramSet& seed)
      : seed_(&seed), counts_(seed.num_grams(), 0) {}

  // Adds every seed-gram occurrence of s (the sentence just selected into L).
  void add_sentence(const Sentence& s);

  std::uint32_t count_by_id(std::uint32_t gram_id) const { return counts_[gram_id]; }
  std::uint32_t count_of(const NGram& gram) const;
  std::uint64_t version() const { return version_; }
  const SeedNGramSet& seed() const { return *seed_; }

 private:
  const SeedNGramSet* seed_;
  std::vector<std::uint32_t> counts_;
  std::uint64_t version_ = 0;
};

}  // namespace btsel
