#include "btsel/strategies.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "btsel/errors.hpp"
#include "btsel/rescoring.hpp"
#include "btsel/rng.hpp"

namespace btsel {

StrategyKind parse_strategy(std::string_view name) {
  if (name == "from-all") return StrategyKind::kFromAll;
  if (name == "each-from-all") return StrategyKind::kEachFromAll;
  if (name == "each-from-all-x4") return StrategyKind::kEachFromAllX4;
  if (name == "each-from-all-rs") return StrategyKind::kEachFromAllRescored;
  throw ConfigError("unknown strategy \"" + std::string(name) +
                    "\" (expected from-all, each-from-all, each-from-all-x4 or each-from-all-rs)");
}

std::string strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kFromAll: return "from-all";
    case StrategyKind::kEachFromAll: return "each-from-all";
    case StrategyKind::kEachFromAllX4: return "each-from-all-x4";
    case StrategyKind::kEachFromAllRescored: return "each-from-all-rs";
  }
  return "?";
}

namespace {

EngineOptions engine_options(const StrategyOptions& options, bool per_target) {
  EngineOptions eo;
  eo.per_target_exclusive = per_target;
  eo.distinct_grams = options.distinct_grams;
  eo.threads = options.threads;
  return eo;
}

}  // namespace

SelectionResult run_from_all(const MultiSourcePool& pool, const SeedNGramSet& seed,
                             std::uint64_t budget, const StrategyOptions& options) {
  std::vector<double> factors(pool.num_systems(), 1.0);
  return select_greedy(pool, seed, factors, budget, engine_options(options, false));
}

SelectionResult run_each_from_all(const MultiSourcePool& pool, const SeedNGramSet& seed,
                                  const std::vector<double>& factors, std::uint64_t rng_seed,
                                  const StrategyOptions& options) {
  const std::size_t T = pool.num_targets();
  const std::size_t S = pool.num_systems();
  SelectionResult result =
      select_greedy(pool, seed, factors, T, engine_options(options, true));
  result.shortfall = 0;

  std::vector<char> taken(T, 0);
  for (const SelectionRecord& rec : result.records) taken[rec.target_idx] = 1;

  // Random fallback for targets with no seed overlap, ascending target order.
  // Eligible systems are those that produced a non-empty source line.
  Pcg32 rng(rng_seed);
  std::vector<std::uint32_t> eligible;
  for (std::size_t t = 0; t < T; ++t) {
    if (taken[t]) continue;
    eligible.clear();
    for (std::size_t s = 0; s < S; ++s) {
      if (!pool.source_at(s, t).empty()) eligible.push_back(static_cast<std::uint32_t>(s));
    }
    if (eligible.empty()) {
      result.unassigned_targets.push_back(static_cast<std::uint32_t>(t));
      continue;
    }
    const std::uint32_t sys = eligible[rng.bounded(static_cast<std::uint32_t>(eligible.size()))];
    result.records.push_back(SelectionRecord{static_cast<std::uint32_t>(result.records.size() + 1),
                                             sys, static_cast<std::uint32_t>(t), 0.0, true});
    ++result.per_system_counts[sys];
  }
  result.shortfall = result.unassigned_targets.size();
  return result;
}

SelectionResult run_each_from_all(const MultiSourcePool& pool, const SeedNGramSet& seed,
                                  std::uint64_t rng_seed, const StrategyOptions& options) {
  std::vector<double> factors(pool.num_systems(), 1.0);
  return run_each_from_all(pool, seed, factors, rng_seed, options);
}

SelectionResult run_each_from_all_x4(const MultiSourcePool& pool, const SeedNGramSet& seed,
                                     std::uint64_t rng_seed, const StrategyOptions& options) {
  const SelectionResult base = run_each_from_all(pool, seed, rng_seed, options);
  SelectionResult out;
  out.per_system_counts.assign(pool.num_systems(), 0);
  out.records.reserve(base.records.size() * 4);
  for (int rep = 0; rep < 4; ++rep) {
    for (const SelectionRecord& rec : base.records) {
      SelectionRecord copy = rec;
      copy.rank = static_cast<std::uint32_t>(out.records.size() + 1);
      out.records.push_back(copy);
    }
  }
  for (std::size_t s = 0; s < pool.num_systems(); ++s) {
    out.per_system_counts[s] = base.per_system_counts[s] * 4;
  }
  out.shortfall = base.shortfall;
  out.unassigned_targets = base.unassigned_targets;
  return out;
}

SelectionResult run_rescored(const MultiSourcePool& pool, const SeedNGramSet& seed,
                             const SystemFactorTable& factors, std::uint64_t rng_seed,
                             const StrategyOptions& options) {
  std::vector<double> phi(pool.num_systems());
  for (std::size_t s = 0; s < pool.num_systems(); ++s) {
    phi[s] = factors.phi_for(pool.system_name(s));
    if (!(phi[s] > 0.0) || !std::isfinite(phi[s])) {
      throw DataError("system \"" + pool.system_name(s) +
                      "\": phi must be a positive finite number, got " + std::to_string(phi[s]));
    }
  }
  return run_each_from_all(pool, seed, phi, rng_seed, options);
}

void write_selection_tsv(std::ostream& out, const SelectionResult& result,
                         const MultiSourcePool& pool) {
  out << "rank\teffective_score\tsystem\ttarget_line_no\tsource_text\ttarget_text\n";
  char score_buf[64];
  for (const SelectionRecord& rec : result.records) {
    std::snprintf(score_buf, sizeof(score_buf), "%.9f", rec.score);
    out << rec.rank << '\t' << score_buf << '\t' << pool.system_name(rec.system) << '\t'
        << pool.target_at(rec.target_idx).line_no << '\t'
        << join_tokens(pool.source_at(rec.system, rec.target_idx)) << '\t'
        << join_tokens(pool.target_at(rec.target_idx)) << '\n';
  }
}

}  // namespace btsel
