#include <map>
#include <set>

#include "doctest.h"

#include "btsel/errors.hpp"
#include "btsel/ngram.hpp"
#include "btsel/rng.hpp"
#include "testutil.hpp"

using namespace btsel;

namespace {

Sentence sent(std::vector<std::string> tokens) { return Sentence{std::move(tokens), 0}; }

std::string joined(const NGram& gram) {
  std::string out;
  for (std::size_t i = 0; i < gram.size(); ++i) {
    if (i > 0) out += ' ';
    out += gram[i];
  }
  return out;
}

std::map<std::string, int> as_multiset(const std::vector<NGram>& grams) {
  std::map<std::string, int> m;
  for (const NGram& g : grams) ++m[joined(g)];
  return m;
}

}  // namespace

TEST_CASE("extract_ngrams enumerates orders then positions") {
  const auto grams = extract_ngrams(sent({"a", "b", "c"}), 2);
  REQUIRE(grams.size() == 5);
  CHECK(as_multiset(grams) ==
        std::map<std::string, int>{{"a", 1}, {"b", 1}, {"c", 1}, {"a b", 1}, {"b c", 1}});
  // canonical order: unigrams first, then bigrams, positions ascending
  CHECK(joined(grams[0]) == "a");
  CHECK(joined(grams[2]) == "c");
  CHECK(joined(grams[3]) == "a b");
  CHECK(joined(grams[4]) == "b c");
}

TEST_CASE("extract_ngrams keeps multiplicity") {
  CHECK(as_multiset(extract_ngrams(sent({"a", "a"}), 2)) ==
        std::map<std::string, int>{{"a", 2}, {"a a", 1}});
}

TEST_CASE("extract_ngrams truncates at sentence length") {
  CHECK(as_multiset(extract_ngrams(sent({"a"}), 3)) == std::map<std::string, int>{{"a", 1}});
  CHECK(extract_ngrams(sent({}), 3).empty());
  CHECK_THROWS_AS(extract_ngrams(sent({"a"}), 0), ConfigError);
}

TEST_CASE("extract_ngrams count formula") {
  Pcg32 rng(11);
  for (int it = 0; it < 20; ++it) {
    const auto tokens = testutil::random_tokens(rng, 10, 1, 15);
    const int order = 1 + static_cast<int>(rng.bounded(4));
    std::size_t expected = 0;
    for (int k = 1; k <= order; ++k) {
      if (tokens.size() >= static_cast<std::size_t>(k)) expected += tokens.size() - k + 1;
    }
    CHECK(extract_ngrams(sent(tokens), order).size() == expected);
  }
}

TEST_CASE("shared_ngrams against a small seed") {
  const Corpus seed_corpus{sent({"a", "b", "c"})};
  const SeedNGramSet seed(seed_corpus, 3);

  CHECK(as_multiset(shared_ngrams(sent({"a", "b", "d"}), seed)) ==
        std::map<std::string, int>{{"a", 1}, {"b", 1}, {"a b", 1}});
  CHECK(shared_ngrams(sent({"x", "y"}), seed).empty());
  CHECK(as_multiset(shared_ngrams(sent({"a", "a"}), seed)) ==
        std::map<std::string, int>{{"a", 2}});
}

TEST_CASE("seed set basics") {
  const Corpus seed_corpus{sent({"a", "b", "c"})};
  const SeedNGramSet seed(seed_corpus, 3);
  CHECK(seed.num_grams() == 6);  // a b c, "a b" "b c", "a b c"
  CHECK(seed.vocab_size() == 3);
  CHECK(seed.contains({"a", "b", "c"}));
  CHECK_FALSE(seed.contains({"b", "a"}));
  CHECK_FALSE(seed.contains({"d"}));
  CHECK(seed.token_id("zzz") == SeedNGramSet::kNoToken);

  CHECK_THROWS_AS(SeedNGramSet(Corpus{}, 3), DataError);
  CHECK_THROWS_AS(SeedNGramSet(seed_corpus, 0), ConfigError);
  CHECK_THROWS_AS(SeedNGramSet(seed_corpus, kMaxNgramOrder + 1), ConfigError);
}

TEST_CASE("add_selected accumulates occurrence counts") {
  const Corpus seed_corpus{sent({"a", "b"})};
  const SeedNGramSet seed(seed_corpus, 2);
  SelectedCounts counts(seed);

  counts.add_sentence(sent({"a", "b"}));
  CHECK(counts.count_of({"a"}) == 1);
  CHECK(counts.count_of({"b"}) == 1);
  CHECK(counts.count_of({"a", "b"}) == 1);

  counts.add_sentence(sent({"a", "b"}));
  CHECK(counts.count_of({"a"}) == 2);
  CHECK(counts.count_of({"b"}) == 2);
  CHECK(counts.count_of({"a", "b"}) == 2);

  counts.add_sentence(sent({"x"}));  // not in the seed: untracked
  CHECK(counts.count_of({"x"}) == 0);
  CHECK(counts.version() == 3);
}

TEST_CASE("counts equal a brute-force recount over the selected set") {
  Pcg32 rng(23);
  for (int it = 0; it < 25; ++it) {
    const Corpus seed_corpus = testutil::random_corpus(rng, 5, 8, 1, 6);
    const int order = 1 + static_cast<int>(rng.bounded(3));
    const SeedNGramSet seed(seed_corpus, order);
    SelectedCounts counts(seed);

    std::map<std::string, int> brute;
    for (int k = 0; k < 10; ++k) {
      const Sentence s = sent(testutil::random_tokens(rng, 8, 1, 6));
      counts.add_sentence(s);
      for (const NGram& g : extract_ngrams(s, order)) {
        if (seed.contains(g)) ++brute[joined(g)];
      }
    }
    for (const Sentence& s : seed_corpus) {
      for (const NGram& g : extract_ngrams(s, order)) {
        auto it2 = brute.find(joined(g));
        const int expected = it2 == brute.end() ? 0 : it2->second;
        CHECK(counts.count_of(g) == static_cast<std::uint32_t>(expected));
      }
    }
  }
}

TEST_CASE("shared_ngrams is a sub-multiset of extract_ngrams") {
  Pcg32 rng(31);
  for (int it = 0; it < 25; ++it) {
    const Corpus seed_corpus = testutil::random_corpus(rng, 4, 6, 1, 5);
    const SeedNGramSet seed(seed_corpus, 3);
    const Sentence s = sent(testutil::random_tokens(rng, 6, 1, 8));
    const auto all = as_multiset(extract_ngrams(s, 3));
    for (const auto& [gram, count] : as_multiset(shared_ngrams(s, seed))) {
      auto it2 = all.find(gram);
      REQUIRE(it2 != all.end());
      CHECK(count <= it2->second);
    }
  }
}

// Gram lookups run over interned ids with a custom hash; verify against a
// plain string-set reference on small vocabularies where collisions inside
// the token-id space would surface immediately.
TEST_CASE("interned gram membership matches a string-set reference") {
  Pcg32 rng(41);
  for (int it = 0; it < 10; ++it) {
    const Corpus seed_corpus = testutil::random_corpus(rng, 10, 5, 1, 7);
    const int order = 1 + static_cast<int>(rng.bounded(3));
    const SeedNGramSet seed(seed_corpus, order);

    std::set<std::string> reference;
    for (const Sentence& s : seed_corpus) {
      for (const NGram& g : extract_ngrams(s, order)) reference.insert(joined(g));
    }
    CHECK(seed.num_grams() == reference.size());

    for (int k = 0; k < 30; ++k) {
      const Sentence probe = sent(testutil::random_tokens(rng, 6, 1, 6));
      for (const NGram& g : extract_ngrams(probe, order)) {
        CHECK(seed.contains(g) == (reference.count(joined(g)) > 0));
      }
    }
  }
}
