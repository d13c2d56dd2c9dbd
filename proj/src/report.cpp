#include "btsel/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "btsel/diversity.hpp"
#include "btsel/errors.hpp"

namespace btsel {

namespace {

std::vector<std::string> split_tab(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == '\t') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  if (text.empty()) return tokens;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ' ') {
      tokens.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return tokens;
}

std::string fixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

constexpr const char* kSelectionHeader =
    "rank\teffective_score\tsystem\ttarget_line_no\tsource_text\ttarget_text";

}  // namespace

std::vector<SelectionRow> read_selection_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open selection file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kSelectionHeader) {
    throw DataError("selection file " + path + " does not start with the expected header");
  }
  std::vector<SelectionRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_tab(line);
    if (fields.size() != 6) {
      throw DataError("selection file " + path + ", line " + std::to_string(line_no) +
                      ": expected 6 tab-separated fields, got " + std::to_string(fields.size()));
    }
    SelectionRow row;
    try {
      row.rank = std::stoull(fields[0]);
      row.score = std::stod(fields[1]);
      row.target_line_no = std::stoull(fields[3]);
    } catch (const std::exception&) {
      throw DataError("selection file " + path + ", line " + std::to_string(line_no) +
                      ": malformed numeric field");
    }
    row.system = fields[2];
    if (row.system.empty()) {
      throw DataError("selection file " + path + ", line " + std::to_string(line_no) +
                      ": empty system name");
    }
    row.source_tokens = split_tokens(fields[4]);
    row.target_tokens = split_tokens(fields[5]);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

BinHistogram build_histogram(const std::vector<std::string>& systems_in_order,
                             const std::vector<std::size_t>& record_system,
                             std::uint64_t bin_size) {
  if (bin_size == 0) throw ConfigError("histogram bin size must be >= 1");
  BinHistogram h;
  h.bin_size = bin_size;
  h.systems = systems_in_order;

  const std::size_t n = record_system.size();
  if (n == 0) return h;

  const std::size_t num_bins = (n + bin_size - 1) / bin_size;
  h.bins.assign(num_bins, std::vector<std::uint64_t>(h.systems.size(), 0));
  for (std::size_t i = 0; i < n; ++i) {
    ++h.bins[i / bin_size][record_system[i]];
  }
  h.last_bin_raw_total = n - (num_bins - 1) * bin_size;
  h.last_bin_partial = h.last_bin_raw_total < bin_size;
  h.extrapolation_factor =
      h.last_bin_partial
          ? static_cast<double>(bin_size) / static_cast<double>(h.last_bin_raw_total)
          : 1.0;
  return h;
}

}  // namespace

BinHistogram selection_histogram(const std::vector<SelectionRow>& rows, std::uint64_t bin_size) {
  std::map<std::string, std::size_t> column;  // lexicographic column order
  for (const SelectionRow& row : rows) column.emplace(row.system, 0);
  std::vector<std::string> systems;
  for (auto& [name, idx] : column) {
    idx = systems.size();
    systems.push_back(name);
  }
  std::vector<std::size_t> record_system;
  record_system.reserve(rows.size());
  for (const SelectionRow& row : rows) record_system.push_back(column.at(row.system));
  return build_histogram(systems, record_system, bin_size);
}

BinHistogram selection_histogram(const SelectionResult& result,
                                 const std::vector<std::string>& system_names,
                                 std::uint64_t bin_size) {
  std::vector<std::size_t> order(system_names.size());
  {
    std::vector<std::size_t> by_name(system_names.size());
    for (std::size_t i = 0; i < by_name.size(); ++i) by_name[i] = i;
    std::sort(by_name.begin(), by_name.end(),
              [&system_names](std::size_t a, std::size_t b) {
                return system_names[a] < system_names[b];
              });
    for (std::size_t col = 0; col < by_name.size(); ++col) order[by_name[col]] = col;
  }
  std::vector<std::string> systems(system_names.size());
  for (std::size_t i = 0; i < system_names.size(); ++i) systems[order[i]] = system_names[i];
  std::vector<std::size_t> record_system;
  record_system.reserve(result.records.size());
  for (const SelectionRecord& rec : result.records) record_system.push_back(order[rec.system]);
  return build_histogram(systems, record_system, bin_size);
}

std::vector<LengthRow> length_table(
    const std::vector<std::pair<std::string, const Corpus*>>& corpora) {
  std::vector<LengthRow> rows;
  for (const auto& [label, corpus] : corpora) {
    if (corpus == nullptr || corpus->empty()) {
      throw DataError("length table: corpus \"" + label + "\" is empty");
    }
    LengthRow row;
    row.label = label;
    row.sentences = corpus->size();
    row.tokens = total_tokens(*corpus);
    row.mean = static_cast<double>(row.tokens) / static_cast<double>(row.sentences);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DiversityRow> diversity_table(
    const std::vector<std::pair<std::string, const Corpus*>>& corpora) {
  std::vector<DiversityRow> rows;
  for (const auto& [label, corpus] : corpora) {
    if (corpus == nullptr || corpus->empty()) {
      throw DataError("diversity table: corpus \"" + label + "\" is empty");
    }
    const DiversityScores scores = compute_diversity(*corpus);
    DiversityRow row;
    row.label = label;
    row.ttr_x100 = scores.ttr * 100.0;
    if (scores.yules_i) row.yules_i_x100 = *scores.yules_i * 100.0;
    row.mtld = scores.mtld;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_histogram_tsv(std::ostream& out, const BinHistogram& h) {
  out << "bin\tstart_rank\tend_rank";
  for (const std::string& sys : h.systems) out << '\t' << sys;
  out << "\traw_total\n";
  for (std::size_t b = 0; b < h.bins.size(); ++b) {
    const std::uint64_t start = b * h.bin_size + 1;
    std::uint64_t total = 0;
    for (std::uint64_t c : h.bins[b]) total += c;
    out << b << '\t' << start << '\t' << (start + total - 1);
    for (std::uint64_t c : h.bins[b]) out << '\t' << c;
    out << '\t' << total << '\n';
  }
  if (h.last_bin_partial && !h.bins.empty()) {
    out << "# last bin holds " << h.last_bin_raw_total
        << " selections; display extrapolation factor "
        << fixed(h.extrapolation_factor, 6) << '\n';
    out << "extrapolated_last";
    out << "\t\t";
    for (std::uint64_t c : h.bins.back()) {
      out << '\t' << fixed(static_cast<double>(c) * h.extrapolation_factor, 2);
    }
    out << '\t' << fixed(static_cast<double>(h.last_bin_raw_total) * h.extrapolation_factor, 2)
        << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const BinHistogram& h) {
  out << "bin,system,raw_count,extrapolated_count\n";
  for (std::size_t b = 0; b < h.bins.size(); ++b) {
    const bool last = b + 1 == h.bins.size();
    const double factor = (last && h.last_bin_partial) ? h.extrapolation_factor : 1.0;
    for (std::size_t s = 0; s < h.systems.size(); ++s) {
      out << b << ',' << h.systems[s] << ',' << h.bins[b][s] << ','
          << fixed(static_cast<double>(h.bins[b][s]) * factor, 2) << '\n';
    }
  }
}

void write_lengths_tsv(std::ostream& out, const std::vector<LengthRow>& rows) {
  out << "corpus\tsentences\ttokens\tmean_length\n";
  for (const LengthRow& row : rows) {
    out << row.label << '\t' << row.sentences << '\t' << row.tokens << '\t' << fixed(row.mean, 2)
        << '\n';
  }
}

void write_diversity_tsv(std::ostream& out, const std::vector<DiversityRow>& rows) {
  out << "corpus\tyules_i_x100\tmtld\tttr_x100\n";
  for (const DiversityRow& row : rows) {
    out << row.label << '\t' << (row.yules_i_x100 ? fixed(*row.yules_i_x100, 2) : "n/a") << '\t'
        << (row.mtld ? fixed(*row.mtld, 2) : "n/a") << '\t' << fixed(row.ttr_x100, 2) << '\n';
  }
}

std::string report_json(const BinHistogram& h, const std::vector<LengthRow>& lengths,
                        const std::vector<DiversityRow>& diversity) {
  nlohmann::json histogram;
  histogram["bin_size"] = h.bin_size;
  histogram["systems"] = h.systems;
  histogram["bins"] = h.bins;
  histogram["last_bin"] = {
      {"partial", h.last_bin_partial},
      {"raw_total", h.last_bin_raw_total},
      {"extrapolation_factor", h.extrapolation_factor},
  };
  if (!h.bins.empty()) {
    nlohmann::json extrapolated = nlohmann::json::object();
    for (std::size_t s = 0; s < h.systems.size(); ++s) {
      extrapolated[h.systems[s]] =
          static_cast<double>(h.bins.back()[s]) * h.extrapolation_factor;
    }
    histogram["last_bin"]["extrapolated"] = std::move(extrapolated);
  }

  nlohmann::json length_rows = nlohmann::json::array();
  for (const LengthRow& row : lengths) {
    length_rows.push_back({{"corpus", row.label},
                           {"sentences", row.sentences},
                           {"tokens", row.tokens},
                           {"mean_length", row.mean}});
  }

  nlohmann::json diversity_rows = nlohmann::json::array();
  for (const DiversityRow& row : diversity) {
    nlohmann::json r;
    r["corpus"] = row.label;
    r["yules_i_x100"] = row.yules_i_x100 ? nlohmann::json(*row.yules_i_x100) : nlohmann::json();
    r["mtld"] = row.mtld ? nlohmann::json(*row.mtld) : nlohmann::json();
    r["ttr_x100"] = row.ttr_x100;
    diversity_rows.push_back(std::move(r));
  }

  nlohmann::json root;
  root["histogram"] = std::move(histogram);
  root["lengths"] = std::move(length_rows);
  root["diversity"] = std::move(diversity_rows);
  return root.dump(2) + "\n";
}

}  // namespace btsel
