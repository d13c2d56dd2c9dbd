#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "btsel/corpus.hpp"
#include "btsel/fda.hpp"
#include "btsel/ngram.hpp"

namespace btsel {

class SystemFactorTable;

enum class StrategyKind { kFromAll, kEachFromAll, kEachFromAllX4, kEachFromAllRescored };

StrategyKind parse_strategy(std::string_view name);  // throws ConfigError on unknown names
std::string strategy_name(StrategyKind kind);

struct StrategyOptions {
  bool distinct_grams = false;
  int threads = 1;
};

// Top ranking `budget` pairs over the concatenated pool; the same target
// sentence may be picked more than once via different systems. If fewer than
// `budget` candidates score above zero the remainder is left unfilled and
// reported in SelectionResult::shortfall.
SelectionResult run_from_all(const MultiSourcePool& pool, const SeedNGramSet& seed,
                             std::uint64_t budget, const StrategyOptions& options = {});

// One selected pair per target sentence. Targets whose candidates all have
// zero seed overlap are assigned a system uniformly at random (seeded PCG32,
// drawn in ascending target order), restricted to systems that produced a
// non-empty source; targets with no non-empty source at all are reported in
// unassigned_targets. `factors` must have one positive entry per system.
SelectionResult run_each_from_all(const MultiSourcePool& pool, const SeedNGramSet& seed,
                                  const std::vector<double>& factors, std::uint64_t rng_seed,
                                  const StrategyOptions& options = {});

// Plain variant with all factors 1.
SelectionResult run_each_from_all(const MultiSourcePool& pool, const SeedNGramSet& seed,
                                  std::uint64_t rng_seed, const StrategyOptions& options = {});

// EachFromAll output repeated four times, ranks renumbered, counts quadrupled.
SelectionResult run_each_from_all_x4(const MultiSourcePool& pool, const SeedNGramSet& seed,
                                     std::uint64_t rng_seed, const StrategyOptions& options = {});

// EachFromAll with per-system phi factors from the table. Every pool system
// must have a finite positive phi.
SelectionResult run_rescored(const MultiSourcePool& pool, const SeedNGramSet& seed,
                             const SystemFactorTable& factors, std::uint64_t rng_seed,
                             const StrategyOptions& options = {});

// TSV with header; columns rank, effective_score (9 decimal places), system,
// target_line_no, source_text, target_text. UTF-8, LF. Byte-stable for
// identical inputs.
void write_selection_tsv(std::ostream& out, const SelectionResult& result,
                         const MultiSourcePool& pool);

}  // namespace btsel
