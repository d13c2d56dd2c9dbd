#include <algorithm>
#include <map>
#include <sstream>

#include "doctest.h"

#include "btsel/errors.hpp"
#include "btsel/report.hpp"
#include "btsel/rng.hpp"
#include "btsel/strategies.hpp"
#include "testutil.hpp"

using namespace btsel;
using testutil::TempDir;

namespace {

std::vector<SelectionRow> rows_from(const std::vector<std::string>& systems, std::size_t n) {
  std::vector<SelectionRow> rows;
  Pcg32 rng(3);
  for (std::size_t i = 0; i < n; ++i) {
    SelectionRow row;
    row.rank = i + 1;
    row.score = 1.0 / static_cast<double>(i + 1);
    row.system = systems[rng.bounded(static_cast<std::uint32_t>(systems.size()))];
    row.target_line_no = i;
    row.source_tokens = {"s"};
    row.target_tokens = {"t"};
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_CASE("histogram bins and extrapolation arithmetic") {
  const auto rows = rows_from({"a", "b"}, 250);
  const BinHistogram h = selection_histogram(rows, 100);
  REQUIRE(h.bins.size() == 3);
  CHECK(h.last_bin_partial);
  CHECK(h.last_bin_raw_total == 50);
  CHECK(h.extrapolation_factor == doctest::Approx(2.0).epsilon(1e-15));
  std::uint64_t total = 0;
  for (const auto& bin : h.bins) {
    std::uint64_t bin_total = 0;
    for (auto c : bin) bin_total += c;
    CHECK(bin_total <= 100);
    total += bin_total;
  }
  CHECK(total == 250);
}

TEST_CASE("histogram of an exact multiple has no partial bin") {
  const auto rows = rows_from({"a"}, 200);
  const BinHistogram h = selection_histogram(rows, 100);
  REQUIRE(h.bins.size() == 2);
  CHECK_FALSE(h.last_bin_partial);
  CHECK(h.extrapolation_factor == 1.0);
  for (const auto& bin : h.bins) CHECK(bin[0] == 100);
}

TEST_CASE("histogram of an empty selection") {
  const BinHistogram h = selection_histogram(std::vector<SelectionRow>{}, 100);
  CHECK(h.bins.empty());
  CHECK_FALSE(h.last_bin_partial);
}

TEST_CASE("histogram rejects zero bin size and defaults to 100k") {
  CHECK_THROWS_AS(selection_histogram(rows_from({"a"}, 5), 0), ConfigError);
  const BinHistogram h = selection_histogram(rows_from({"a"}, 5));
  CHECK(h.bin_size == 100000);
}

TEST_CASE("histogram conservation from a SelectionResult") {
  Pcg32 rng(44);
  SelectionResult result;
  const std::vector<std::string> names{"rbmt", "pbsmt", "lstm", "transformer"};
  result.per_system_counts.assign(4, 0);
  for (std::size_t i = 0; i < 777; ++i) {
    SelectionRecord rec;
    rec.rank = static_cast<std::uint32_t>(i + 1);
    rec.system = rng.bounded(4);
    rec.target_idx = static_cast<std::uint32_t>(i);
    result.records.push_back(rec);
    ++result.per_system_counts[rec.system];
  }
  const BinHistogram h = selection_histogram(result, names, 100);
  REQUIRE(h.systems.size() == 4);
  // per-system totals across bins match the result counts
  for (std::size_t s = 0; s < 4; ++s) {
    const auto col = std::find(h.systems.begin(), h.systems.end(), names[s]) - h.systems.begin();
    std::uint64_t sum = 0;
    for (const auto& bin : h.bins) sum += bin[col];
    CHECK(sum == result.per_system_counts[s]);
  }
}

TEST_CASE("length table hand cases") {
  Corpus x{Sentence{{"a", "b"}, 0}, Sentence{{"a", "b", "c", "d"}, 1}};
  Corpus one{Sentence{{"a"}, 0}};
  const auto rows = length_table({{"x", &x}, {"one", &one}});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].label == "x");
  CHECK(rows[0].mean == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(rows[0].sentences == 2);
  CHECK(rows[0].tokens == 6);
  CHECK(rows[1].mean == 1.0);

  Corpus empty;
  CHECK_THROWS_AS(length_table({{"bad", &empty}}), DataError);
}

TEST_CASE("length table matches a hand sum on random corpora") {
  Pcg32 rng(55);
  const Corpus c = testutil::random_corpus(rng, 25, 9, 1, 11);
  std::uint64_t tokens = 0;
  for (const auto& s : c) tokens += s.size();
  const auto rows = length_table({{"c", &c}});
  CHECK(rows[0].mean ==
        doctest::Approx(static_cast<double>(tokens) / 25.0).epsilon(1e-15));
}

TEST_CASE("diversity table scalings and degenerate rendering") {
  Corpus aab{Sentence{{"a", "a", "b"}, 0}};
  Corpus hapax{Sentence{{"a", "b", "c"}, 0}};
  const auto rows = diversity_table({{"aab", &aab}, {"hapax", &hapax}});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].label == "aab");
  CHECK(rows[0].ttr_x100 == doctest::Approx(100.0 * 2.0 / 3.0).epsilon(1e-9));
  REQUIRE(rows[0].yules_i_x100.has_value());
  CHECK(*rows[0].yules_i_x100 == doctest::Approx(450.0).epsilon(1e-9));
  CHECK_FALSE(rows[1].yules_i_x100.has_value());

  std::ostringstream tsv;
  write_diversity_tsv(tsv, rows);
  CHECK(tsv.str().find("aab\t450.00\t3.00\t66.67\n") != std::string::npos);
  CHECK(tsv.str().find("hapax\tn/a\tn/a\t100.00\n") != std::string::npos);
}

TEST_CASE("report writers are byte-stable") {
  const auto rows = rows_from({"a", "b", "c"}, 123);
  const BinHistogram h = selection_histogram(rows, 50);
  Corpus x{Sentence{{"a", "b"}, 0}};
  const auto lengths = length_table({{"x", &x}});
  const auto diversity = diversity_table({{"x", &x}});

  auto render = [&] {
    std::ostringstream a, b2, c, d;
    write_histogram_tsv(a, h);
    write_histogram_csv(b2, h);
    write_lengths_tsv(c, lengths);
    write_diversity_tsv(d, diversity);
    return a.str() + b2.str() + c.str() + d.str() + report_json(h, lengths, diversity);
  };
  CHECK(render() == render());
}

TEST_CASE("selection TSV writer and reader round trip") {
  Corpus targets{Sentence{{"t", "one"}, 0}, Sentence{{"t", "two"}, 1}};
  Corpus src_a{Sentence{{"a", "b"}, 0}, Sentence{{"c"}, 1}};
  Corpus src_b{Sentence{{"d"}, 0}, Sentence{{"e", "f"}, 1}};
  const MultiSourcePool pool(targets, {"a", "b"}, {src_a, src_b});

  SelectionResult result;
  result.per_system_counts = {1, 1};
  result.records.push_back(SelectionRecord{1, 0, 1, 0.75, false});
  result.records.push_back(SelectionRecord{2, 1, 0, 0.0, true});

  TempDir dir;
  std::ostringstream out;
  write_selection_tsv(out, result, pool);
  testutil::write_text(dir.file("sel.tsv"), out.str());

  const auto rows = read_selection_tsv(dir.file("sel.tsv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rank == 1);
  CHECK(rows[0].system == "a");
  CHECK(rows[0].score == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rows[0].target_line_no == 1);
  CHECK(rows[0].source_tokens == std::vector<std::string>{"c"});
  CHECK(rows[0].target_tokens == std::vector<std::string>{"t", "two"});
  CHECK(rows[1].system == "b");

  testutil::write_text(dir.file("bad.tsv"), "wrong header\n");
  CHECK_THROWS_AS(read_selection_tsv(dir.file("bad.tsv")), DataError);
  testutil::write_text(dir.file("bad2.tsv"),
                       "rank\teffective_score\tsystem\ttarget_line_no\tsource_text\ttarget_text\n"
                       "1\t0.5\ta\n");
  CHECK_THROWS_AS(read_selection_tsv(dir.file("bad2.tsv")), DataError);
}
