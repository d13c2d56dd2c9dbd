#include "btsel/fda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <thread>
#include <unordered_set>

#include "btsel/errors.hpp"

namespace btsel {

namespace {

struct DecayTable {
  double v[64];
  DecayTable() {
    v[0] = 1.0;
    for (int i = 1; i < 64; ++i) v[i] = v[i - 1] * 0.5;
  }
};
const DecayTable kDecay;

}  // namespace

double decay_weight(std::uint32_t count) { return count < 64 ? kDecay.v[count] : 0.0; }

double fda_score(const Sentence& s, const SeedNGramSet& seed, const SelectedCounts& counts,
                 bool distinct_grams) {
  if (s.empty()) return 0.0;
  std::vector<std::uint32_t> grams = seed.encode(s.tokens);
  double sum = 0.0;
  if (distinct_grams) {
    std::unordered_set<std::uint32_t> seen;
    for (std::uint32_t g : grams) {
      if (seen.insert(g).second) sum += decay_weight(counts.count_by_id(g));
    }
  } else {
    for (std::uint32_t g : grams) sum += decay_weight(counts.count_by_id(g));
  }
  return sum / static_cast<double>(s.size());
}

namespace {

// Compact per-candidate view built once up front: the dense ids of all
// seed-shared n-gram occurrences (update list) and, in distinct mode, a
// first-occurrence-deduplicated variant used for scoring.
struct CandidateIndex {
  std::vector<std::uint32_t> arena;        // occurrence lists, concatenated
  std::vector<std::uint64_t> full_begin;   // size C+1
  std::vector<std::uint32_t> score_arena;  // distinct mode only
  std::vector<std::uint64_t> score_begin;  // size C+1 when distinct
  std::vector<std::uint32_t> length;       // token count per candidate
};

struct Chunk {
  std::vector<std::uint32_t> arena;
  std::vector<std::uint32_t> score_arena;
  std::vector<std::uint32_t> gram_counts;        // per candidate in chunk
  std::vector<std::uint32_t> score_gram_counts;  // distinct mode
  std::vector<std::uint32_t> length;
};

// Candidate id = target_idx * S + system.
void encode_range(const MultiSourcePool& pool, const SeedNGramSet& seed, bool distinct,
                  std::size_t t_begin, std::size_t t_end, Chunk& chunk) {
  const std::size_t S = pool.num_systems();
  std::vector<std::uint32_t> grams, ids_scratch;
  std::unordered_set<std::uint32_t> seen;
  for (std::size_t t = t_begin; t < t_end; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      const Sentence& src = pool.source_at(s, t);
      grams.clear();
      seed.encode(src.tokens, grams, ids_scratch);
      chunk.length.push_back(static_cast<std::uint32_t>(src.size()));
      chunk.gram_counts.push_back(static_cast<std::uint32_t>(grams.size()));
      chunk.arena.insert(chunk.arena.end(), grams.begin(), grams.end());
      if (distinct) {
        seen.clear();
        std::uint32_t kept = 0;
        for (std::uint32_t g : grams) {
          if (seen.insert(g).second) {
            chunk.score_arena.push_back(g);
            ++kept;
          }
        }
        chunk.score_gram_counts.push_back(kept);
      }
    }
  }
}

CandidateIndex build_candidate_index(const MultiSourcePool& pool, const SeedNGramSet& seed,
                                     const EngineOptions& options) {
  const std::size_t T = pool.num_targets();
  const std::size_t S = pool.num_systems();
  const std::size_t C = T * S;
  const bool distinct = options.distinct_grams;

  int threads = std::clamp(options.threads, 1, 64);
  if (static_cast<std::size_t>(threads) > T) threads = T == 0 ? 1 : static_cast<int>(T);

  std::vector<Chunk> chunks(threads);
  if (threads <= 1) {
    encode_range(pool, seed, distinct, 0, T, chunks[0]);
  } else {
    std::vector<std::thread> workers;
    const std::size_t per = (T + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const std::size_t lo = std::min(T, w * per);
      const std::size_t hi = std::min(T, lo + per);
      workers.emplace_back(
          [&pool, &seed, distinct, lo, hi, &chunks, w] { encode_range(pool, seed, distinct, lo, hi, chunks[w]); });
    }
    for (auto& th : workers) th.join();
  }

  // Deterministic merge in candidate order regardless of thread count.
  CandidateIndex index;
  index.full_begin.reserve(C + 1);
  index.length.reserve(C);
  std::uint64_t arena_total = 0, score_total = 0;
  for (const Chunk& ch : chunks) {
    arena_total += ch.arena.size();
    score_total += ch.score_arena.size();
  }
  index.arena.reserve(arena_total);
  if (distinct) index.score_arena.reserve(score_total);

  index.full_begin.push_back(0);
  if (distinct) index.score_begin.push_back(0);
  for (const Chunk& ch : chunks) {
    index.arena.insert(index.arena.end(), ch.arena.begin(), ch.arena.end());
    index.length.insert(index.length.end(), ch.length.begin(), ch.length.end());
    for (std::uint32_t n : ch.gram_counts) {
      index.full_begin.push_back(index.full_begin.back() + n);
    }
    if (distinct) {
      index.score_arena.insert(index.score_arena.end(), ch.score_arena.begin(),
                               ch.score_arena.end());
      for (std::uint32_t n : ch.score_gram_counts) {
        index.score_begin.push_back(index.score_begin.back() + n);
      }
    }
  }
  return index;
}

struct HeapEntry {
  double score;
  std::uint32_t cand;
  std::uint32_t stamp;  // selection count at scoring time
};

}  // namespace

SelectionResult select_greedy(const MultiSourcePool& pool, const SeedNGramSet& seed,
                              const std::vector<double>& system_factors, std::uint64_t budget,
                              const EngineOptions& options) {
  const std::size_t S = pool.num_systems();
  const std::size_t T = pool.num_targets();
  if (system_factors.size() != S) {
    throw ConfigError("select_greedy: got " + std::to_string(system_factors.size()) +
                      " factors for " + std::to_string(S) + " systems");
  }
  for (std::size_t s = 0; s < S; ++s) {
    if (!(system_factors[s] > 0.0) || !std::isfinite(system_factors[s])) {
      throw DataError("system factor for \"" + pool.system_name(s) +
                      "\" must be a positive finite number");
    }
  }

  SelectionResult result;
  result.per_system_counts.assign(S, 0);
  if (T == 0 || budget == 0) {
    result.shortfall = budget;
    return result;
  }

  // Lexicographic rank of each system name, for tie-breaking without string
  // compares in the hot loop.
  std::vector<std::uint32_t> lex_rank(S);
  {
    std::vector<std::uint32_t> by_name(S);
    std::iota(by_name.begin(), by_name.end(), 0u);
    std::sort(by_name.begin(), by_name.end(), [&pool](std::uint32_t a, std::uint32_t b) {
      return pool.system_name(a) < pool.system_name(b);
    });
    for (std::uint32_t r = 0; r < S; ++r) lex_rank[by_name[r]] = r;
  }

  const CandidateIndex index = build_candidate_index(pool, seed, options);
  const bool distinct = options.distinct_grams;
  const std::vector<std::uint32_t>& score_arena = distinct ? index.score_arena : index.arena;
  const std::vector<std::uint64_t>& score_begin = distinct ? index.score_begin : index.full_begin;

  std::vector<std::uint32_t> counts(seed.num_grams(), 0);

  auto rescore = [&](std::uint32_t cand) -> double {
    double sum = 0.0;
    const std::uint64_t lo = score_begin[cand];
    const std::uint64_t hi = score_begin[cand + 1];
    for (std::uint64_t i = lo; i < hi; ++i) sum += decay_weight(counts[score_arena[i]]);
    return sum / static_cast<double>(index.length[cand]) * system_factors[cand % S];
  };

  // Greater-rank entries sit on top: higher score, then lower target index,
  // then lexicographically smaller system name. The three fields make a
  // strict total order, so the pop sequence is deterministic.
  auto below = [&](const HeapEntry& a, const HeapEntry& b) {
    if (a.score != b.score) return a.score < b.score;
    const std::uint32_t ta = a.cand / S, tb = b.cand / S;
    if (ta != tb) return ta > tb;
    return lex_rank[a.cand % S] > lex_rank[b.cand % S];
  };

  // Initial scores: all counts are zero, so every occurrence contributes 1.0
  // and the sum equals the gram count exactly.
  std::vector<HeapEntry> entries;
  for (std::size_t c = 0; c < S * T; ++c) {
    const std::uint64_t n = score_begin[c + 1] - score_begin[c];
    if (n == 0) continue;  // never scores above zero, including empty sources
    const double score =
        static_cast<double>(n) / static_cast<double>(index.length[c]) * system_factors[c % S];
    entries.push_back(HeapEntry{score, static_cast<std::uint32_t>(c), 0});
  }
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, decltype(below)> heap(
      below, std::move(entries));

  std::vector<char> target_taken(options.per_target_exclusive ? T : 0, 0);
  std::uint32_t version = 0;  // number of selections so far

  while (result.records.size() < budget && !heap.empty()) {
    HeapEntry top = heap.top();
    heap.pop();
    const std::uint32_t t = top.cand / S;
    if (options.per_target_exclusive && target_taken[t]) continue;
    if (options.decay_enabled && top.stamp != version) {
      heap.push(HeapEntry{rescore(top.cand), top.cand, version});
      continue;
    }
    if (!(top.score > 0.0)) break;  // fresh maximum is zero: nothing selectable remains

    ++version;
    result.records.push_back(SelectionRecord{static_cast<std::uint32_t>(result.records.size() + 1),
                                             static_cast<std::uint32_t>(top.cand % S), t,
                                             top.score, false});
    ++result.per_system_counts[top.cand % S];
    if (options.decay_enabled) {
      const std::uint64_t lo = index.full_begin[top.cand];
      const std::uint64_t hi = index.full_begin[top.cand + 1];
      for (std::uint64_t i = lo; i < hi; ++i) {
        std::uint32_t& c = counts[index.arena[i]];
        if (c != 0xFFFFFFFFu) ++c;
      }
    }
    if (options.per_target_exclusive) target_taken[t] = 1;
  }

  result.shortfall = budget - result.records.size();
  return result;
}

}  // namespace btsel
