#include "btsel/quality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "btsel/errors.hpp"

namespace btsel {

std::vector<EvalPair> make_eval_pairs(const Corpus& hypotheses, const Corpus& references) {
  if (hypotheses.size() != references.size()) {
    throw DataError("evaluation corpora are misaligned: " + std::to_string(hypotheses.size()) +
                    " hypothesis lines vs " + std::to_string(references.size()) +
                    " reference lines");
  }
  std::vector<EvalPair> pairs;
  pairs.reserve(hypotheses.size());
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    if (references[i].empty()) {
      throw DataError("empty reference sentence at line " +
                      std::to_string(references[i].line_no + 1));
    }
    pairs.push_back(EvalPair{hypotheses[i], references[i]});
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// BLEU

namespace {

void require_pairs(const std::vector<EvalPair>& pairs, const char* metric) {
  if (pairs.empty()) throw DataError(std::string(metric) + ": empty pair list");
}

// Joins tokens with a separator that cannot occur inside a token.
std::string ngram_key(const std::vector<std::string>& tokens, std::size_t start, std::size_t n) {
  std::string key;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) key += '\x1f';
    key += tokens[start + j];
  }
  return key;
}

}  // namespace

double corpus_bleu(const std::vector<EvalPair>& pairs, bool add_one_smoothing) {
  require_pairs(pairs, "corpus_bleu");
  constexpr int kMaxOrder = 4;
  std::uint64_t match[kMaxOrder + 1] = {0};
  std::uint64_t total[kMaxOrder + 1] = {0};
  std::uint64_t hyp_len = 0, ref_len = 0;

  std::unordered_map<std::string, std::uint64_t> hyp_counts, ref_counts;
  for (const EvalPair& pair : pairs) {
    const auto& hyp = pair.hypothesis.tokens;
    const auto& ref = pair.reference.tokens;
    hyp_len += hyp.size();
    ref_len += ref.size();
    for (int n = 1; n <= kMaxOrder; ++n) {
      if (hyp.size() < static_cast<std::size_t>(n)) break;
      hyp_counts.clear();
      ref_counts.clear();
      for (std::size_t start = 0; start + n <= ref.size(); ++start) {
        ++ref_counts[ngram_key(ref, start, n)];
      }
      for (std::size_t start = 0; start + n <= hyp.size(); ++start) {
        ++hyp_counts[ngram_key(hyp, start, n)];
      }
      total[n] += hyp.size() - n + 1;
      for (const auto& [key, count] : hyp_counts) {
        auto it = ref_counts.find(key);
        if (it != ref_counts.end()) match[n] += std::min(count, it->second);
      }
    }
  }

  if (hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    double num = static_cast<double>(match[n]);
    double den = static_cast<double>(total[n]);
    if (add_one_smoothing && n >= 2) {
      num += 1.0;
      den += 1.0;
    }
    if (num == 0.0 || den == 0.0) return 0.0;
    log_sum += std::log(num / den);
  }
  const double bp =
      hyp_len >= ref_len ? 1.0
                         : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
  return bp * std::exp(log_sum / kMaxOrder) * 100.0;
}

// ---------------------------------------------------------------------------
// TER

namespace {

constexpr std::size_t kMaxShiftSize = 10;
constexpr long kMaxShiftDistance = 50;

int word_edit_distance(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

// Reference spans of each length up to kMaxShiftSize, keyed by content.
std::map<std::vector<int>, std::vector<std::size_t>> build_ref_spans(const std::vector<int>& ref) {
  std::map<std::vector<int>, std::vector<std::size_t>> spans;
  for (std::size_t len = 1; len <= std::min(kMaxShiftSize, ref.size()); ++len) {
    for (std::size_t r = 0; r + len <= ref.size(); ++r) {
      spans[std::vector<int>(ref.begin() + r, ref.begin() + r + len)].push_back(r);
    }
  }
  return spans;
}

std::vector<int> apply_shift(const std::vector<int>& hyp, std::size_t i, std::size_t len,
                             std::size_t dest) {
  std::vector<int> out;
  out.reserve(hyp.size());
  out.insert(out.end(), hyp.begin(), hyp.begin() + i);
  out.insert(out.end(), hyp.begin() + i + len, hyp.end());
  const std::size_t at = std::min(dest, out.size());
  out.insert(out.begin() + at, hyp.begin() + i, hyp.begin() + i + len);
  return out;
}

int ter_sentence_edits(std::vector<int> hyp, const std::vector<int>& ref) {
  int shifts = 0;
  int cur = word_edit_distance(hyp, ref);
  if (cur == 0) return 0;
  const auto ref_spans = build_ref_spans(ref);
  std::vector<int> block;
  while (cur > 0) {
    int best_gain = 0;
    std::vector<int> best_hyp;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
      const std::size_t max_len = std::min(kMaxShiftSize, hyp.size() - i);
      for (std::size_t len = 1; len <= max_len; ++len) {
        block.assign(hyp.begin() + i, hyp.begin() + i + len);
        // Already matching the reference at the same position: leave it alone.
        if (i + len <= ref.size() &&
            std::equal(block.begin(), block.end(), ref.begin() + i)) {
          continue;
        }
        auto it = ref_spans.find(block);
        if (it == ref_spans.end()) continue;
        for (std::size_t dest : it->second) {
          if (dest == i) continue;
          if (std::labs(static_cast<long>(dest) - static_cast<long>(i)) > kMaxShiftDistance) {
            continue;
          }
          std::vector<int> candidate = apply_shift(hyp, i, len, dest);
          const int gain = cur - word_edit_distance(candidate, ref);
          if (gain > best_gain) {
            best_gain = gain;
            best_hyp = std::move(candidate);
          }
        }
      }
    }
    if (best_gain < 1) break;
    hyp = std::move(best_hyp);
    cur -= best_gain;
    ++shifts;
  }
  return shifts + cur;
}

}  // namespace

double corpus_ter(const std::vector<EvalPair>& pairs) {
  require_pairs(pairs, "corpus_ter");
  std::uint64_t edits = 0, ref_tokens = 0;
  std::unordered_map<std::string, int> lexicon;
  auto intern = [&lexicon](const std::vector<std::string>& tokens) {
    std::vector<int> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens) {
      auto [it, inserted] = lexicon.try_emplace(t, static_cast<int>(lexicon.size()));
      out.push_back(it->second);
    }
    return out;
  };
  for (const EvalPair& pair : pairs) {
    if (pair.reference.empty()) {
      throw DataError("corpus_ter: empty reference sentence at line " +
                      std::to_string(pair.reference.line_no + 1));
    }
    lexicon.clear();
    edits += ter_sentence_edits(intern(pair.hypothesis.tokens), intern(pair.reference.tokens));
    ref_tokens += pair.reference.size();
  }
  return static_cast<double>(edits) / static_cast<double>(ref_tokens) * 100.0;
}

// ---------------------------------------------------------------------------
// chrF3

namespace {

std::u32string sentence_chars(const Sentence& s) {
  std::string joined;
  for (const std::string& tok : s.tokens) joined += tok;
  return utf8_decode(joined);
}

}  // namespace

double corpus_chrf3(const std::vector<EvalPair>& pairs) {
  require_pairs(pairs, "corpus_chrf3");
  constexpr int kMaxOrder = 6;
  constexpr double kBeta = 3.0;
  std::uint64_t match[kMaxOrder + 1] = {0};
  std::uint64_t hyp_total[kMaxOrder + 1] = {0};
  std::uint64_t ref_total[kMaxOrder + 1] = {0};

  std::unordered_map<std::u32string, std::uint64_t> hyp_counts, ref_counts;
  for (const EvalPair& pair : pairs) {
    const std::u32string hyp = sentence_chars(pair.hypothesis);
    const std::u32string ref = sentence_chars(pair.reference);
    for (int n = 1; n <= kMaxOrder; ++n) {
      const std::size_t un = static_cast<std::size_t>(n);
      hyp_counts.clear();
      ref_counts.clear();
      if (hyp.size() >= un) {
        hyp_total[n] += hyp.size() - un + 1;
        for (std::size_t start = 0; start + un <= hyp.size(); ++start) {
          ++hyp_counts[hyp.substr(start, un)];
        }
      }
      if (ref.size() >= un) {
        ref_total[n] += ref.size() - un + 1;
        for (std::size_t start = 0; start + un <= ref.size(); ++start) {
          ++ref_counts[ref.substr(start, un)];
        }
      }
      for (const auto& [key, count] : hyp_counts) {
        auto it = ref_counts.find(key);
        if (it != ref_counts.end()) match[n] += std::min(count, it->second);
      }
    }
  }

  double precision_sum = 0.0, recall_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    if (hyp_total[n] + ref_total[n] == 0) continue;
    ++orders;
    if (hyp_total[n] > 0) {
      precision_sum += static_cast<double>(match[n]) / static_cast<double>(hyp_total[n]);
    }
    if (ref_total[n] > 0) {
      recall_sum += static_cast<double>(match[n]) / static_cast<double>(ref_total[n]);
    }
  }
  if (orders == 0) return 0.0;
  const double precision = precision_sum / orders;
  const double recall = recall_sum / orders;
  const double denom = kBeta * kBeta * precision + recall;
  if (denom == 0.0) return 0.0;
  return (1.0 + kBeta * kBeta) * precision * recall / denom * 100.0;
}

QualityScores evaluate_corpus(const std::vector<EvalPair>& pairs, bool add_one_smoothing) {
  QualityScores scores;
  scores.bleu = corpus_bleu(pairs, add_one_smoothing);
  scores.ter = corpus_ter(pairs);
  scores.chrf3 = corpus_chrf3(pairs);
  return scores;
}

}  // namespace btsel
