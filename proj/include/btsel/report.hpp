#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "btsel/corpus.hpp"
#include "btsel/fda.hpp"

namespace btsel {

// One parsed row of a selection TSV.
struct SelectionRow {
  std::uint64_t rank = 0;
  double score = 0.0;
  std::string system;
  std::size_t target_line_no = 0;
  std::vector<std::string> source_tokens;
  std::vector<std::string> target_tokens;
};

std::vector<SelectionRow> read_selection_tsv(const std::string& path);

// Per-system selection counts in consecutive rank-order bins. Raw counts are
// always preserved; the final partial bin additionally carries the display
// extrapolation factor bin_size / raw_size used by the distribution plots.
struct BinHistogram {
  std::uint64_t bin_size = 100000;
  std::vector<std::string> systems;  // column order: lexicographic
  std::vector<std::vector<std::uint64_t>> bins;  // bins[i][s] = raw count
  bool last_bin_partial = false;
  std::uint64_t last_bin_raw_total = 0;
  double extrapolation_factor = 1.0;
};

inline constexpr std::uint64_t kDefaultBinSize = 100000;

BinHistogram selection_histogram(const std::vector<SelectionRow>& rows,
                                 std::uint64_t bin_size = kDefaultBinSize);
BinHistogram selection_histogram(const SelectionResult& result,
                                 const std::vector<std::string>& system_names,
                                 std::uint64_t bin_size = kDefaultBinSize);

struct LengthRow {
  std::string label;
  std::uint64_t sentences = 0;
  std::uint64_t tokens = 0;
  double mean = 0.0;
};

// Mean token counts per labeled corpus, input order preserved. Every corpus
// must contain at least one sentence.
std::vector<LengthRow> length_table(
    const std::vector<std::pair<std::string, const Corpus*>>& corpora);

struct DiversityRow {
  std::string label;
  std::optional<double> yules_i_x100;  // empty renders as n/a
  std::optional<double> mtld;
  double ttr_x100 = 0.0;
};

// Diversity rows with the report scalings (Yule's I and TTR x100, raw MTLD).
std::vector<DiversityRow> diversity_table(
    const std::vector<std::pair<std::string, const Corpus*>>& corpora);

// Deterministic writers: identical inputs produce byte-identical files.
void write_histogram_tsv(std::ostream& out, const BinHistogram& histogram);
void write_histogram_csv(std::ostream& out, const BinHistogram& histogram);
void write_lengths_tsv(std::ostream& out, const std::vector<LengthRow>& rows);
void write_diversity_tsv(std::ostream& out, const std::vector<DiversityRow>& rows);
std::string report_json(const BinHistogram& histogram, const std::vector<LengthRow>& lengths,
                        const std::vector<DiversityRow>& diversity);

}  // namespace btsel
