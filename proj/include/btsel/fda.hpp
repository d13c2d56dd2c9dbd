#pragma once

#include <cstdint>
#include <vector>

#include "btsel/corpus.hpp"
#include "btsel/ngram.hpp"

namespace btsel {

// 0.5^c, with contributions for c >= 64 treated as exactly zero (below any
// meaningful score resolution). The table holds exact powers of two, so the
// engine and the brute-force test oracle agree bit for bit.
double decay_weight(std::uint32_t count);

struct EngineOptions {
  // EachFromAll semantics: once a target index is selected, all other
  // candidates for it are dead. Implemented inside the loop rather than by
  // post-filtering, which would distort the decay counts.
  bool per_target_exclusive = false;
  // Count each distinct shared n-gram once per candidate instead of once per
  // occurrence. Comparison mode; decay counts stay occurrence-based.
  bool distinct_grams = false;
  // When false the decay counts are frozen at zero (static ranking).
  bool decay_enabled = true;
  // Thread cap for the initial candidate encoding; 1 = sequential. The
  // result is identical for any thread count.
  int threads = 1;
};

struct SelectionRecord {
  std::uint32_t rank = 0;  // 1-based, selection order
  std::uint32_t system = 0;
  std::uint32_t target_idx = 0;
  double score = 0.0;  // effective score (base x factor) at selection time
  bool fallback = false;
};

struct SelectionResult {
  std::vector<SelectionRecord> records;
  std::vector<std::uint64_t> per_system_counts;  // indexed like pool systems
  std::uint64_t shortfall = 0;                   // budget left unfilled
  std::vector<std::uint32_t> unassigned_targets;  // EachFromAll: no non-empty candidate
};

// Sentence score: sum over occurrences of seed-shared n-grams of
// 0.5^count(gram), divided by the sentence length in words. Zero for an
// empty sentence or empty intersection.
double fda_score(const Sentence& s, const SeedNGramSet& seed, const SelectedCounts& counts,
                 bool distinct_grams = false);

// Greedy selection: repeatedly take the candidate maximizing
// fda_score x factor[system], add its source n-grams to the decay counts,
// stop after `budget` selections or when no candidate has positive score.
// Zero-score candidates are never selected here; the EachFromAll random
// fallback lives in the strategies layer.
//
// Ties on the effective score (exact double equality) are broken by lower
// target index, then lexicographically smaller system name. Internally a
// lazy max-heap is used: scores only decrease as counts grow, so a stale
// entry is re-scored and pushed back instead of rescanning the pool. The
// selected sequence is identical to naive full re-scoring.
SelectionResult select_greedy(const MultiSourcePool& pool, const SeedNGramSet& seed,
                              const std::vector<double>& system_factors, std::uint64_t budget,
                              const EngineOptions& options);

}  // namespace btsel
