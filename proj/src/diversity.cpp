#include "btsel/diversity.hpp"

#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "btsel/errors.hpp"

namespace btsel {

namespace {

std::vector<std::string_view> flatten(const Corpus& doc) {
  std::vector<std::string_view> stream;
  for (const Sentence& s : doc) {
    for (const std::string& tok : s.tokens) stream.emplace_back(tok);
  }
  return stream;
}

void require_tokens(const std::vector<std::string_view>& stream, const char* metric) {
  if (stream.empty()) throw DataError(std::string(metric) + ": document has no tokens");
}

}  // namespace

double ttr(const Corpus& doc) {
  const auto stream = flatten(doc);
  require_tokens(stream, "ttr");
  std::unordered_set<std::string_view> types(stream.begin(), stream.end());
  return static_cast<double>(types.size()) / static_cast<double>(stream.size());
}

std::optional<double> yules_i(const Corpus& doc) {
  const auto stream = flatten(doc);
  require_tokens(stream, "yules_i");
  std::unordered_map<std::string_view, std::uint64_t> freq;
  for (std::string_view tok : stream) ++freq[tok];
  const double m1 = static_cast<double>(stream.size());
  double m2 = 0.0;
  for (const auto& [tok, f] : freq) m2 += static_cast<double>(f) * static_cast<double>(f);
  if (m2 == m1) return std::nullopt;  // all types occur exactly once
  return m1 * m1 / (m2 - m1);
}

namespace {

// One MTLD pass over the stream in the given direction. Returns the factor
// count, or nullopt if it is zero.
std::optional<double> mtld_pass(const std::vector<std::string_view>& stream, double threshold,
                                bool forward) {
  double factors = 0.0;
  std::unordered_set<std::string_view> seg_types;
  std::size_t seg_tokens = 0;
  const std::size_t n = stream.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::string_view tok = forward ? stream[k] : stream[n - 1 - k];
    ++seg_tokens;
    seg_types.insert(tok);
    const double running =
        static_cast<double>(seg_types.size()) / static_cast<double>(seg_tokens);
    if (running < threshold) {
      factors += 1.0;
      seg_types.clear();
      seg_tokens = 0;
    }
  }
  if (seg_tokens > 0) {
    const double running =
        static_cast<double>(seg_types.size()) / static_cast<double>(seg_tokens);
    factors += (1.0 - running) / (1.0 - threshold);
  }
  if (factors == 0.0) return std::nullopt;
  return factors;
}

}  // namespace

std::optional<double> mtld(const Corpus& doc, double threshold) {
  if (!(threshold > 0.0) || !(threshold < 1.0)) {
    throw ConfigError("mtld threshold must be in (0, 1)");
  }
  const auto stream = flatten(doc);
  require_tokens(stream, "mtld");
  const auto fwd = mtld_pass(stream, threshold, true);
  const auto rev = mtld_pass(stream, threshold, false);
  if (!fwd || !rev) return std::nullopt;
  const double total = static_cast<double>(stream.size());
  return (total / *fwd + total / *rev) / 2.0;
}

DiversityScores compute_diversity(const Corpus& doc, double mtld_threshold) {
  DiversityScores scores;
  scores.ttr = ttr(doc);
  scores.yules_i = yules_i(doc);
  scores.mtld = mtld(doc, mtld_threshold);
  return scores;
}

}  // namespace btsel
