#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace oracles {

namespace {

std::string join(const std::vector<std::string>& tokens, std::size_t start, std::size_t n) {
  std::string key;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) key += ' ';
    key += tokens[start + j];
  }
  return key;
}

// 0.5^c with the same >= 64 cutoff as the engine; ldexp yields the exact
// power of two.
double half_pow(std::uint64_t c) { return c < 64 ? std::ldexp(1.0, -static_cast<int>(c)) : 0.0; }

}  // namespace

std::vector<OracleRecord> fda_select_oracle(const btsel::MultiSourcePool& pool,
                                            const btsel::Corpus& seed,
                                            const std::vector<double>& factors,
                                            std::uint64_t budget, const OracleOptions& options) {
  const std::size_t T = pool.num_targets();
  const std::size_t S = pool.num_systems();

  std::set<std::string> seed_grams;
  for (const btsel::Sentence& s : seed) {
    for (int n = 1; n <= options.order; ++n) {
      for (std::size_t start = 0; start + n <= s.tokens.size(); ++start) {
        seed_grams.insert(join(s.tokens, start, n));
      }
    }
  }

  std::unordered_map<std::string, std::uint64_t> counts;
  std::vector<char> dead(T * S, 0);
  std::vector<char> target_taken(T, 0);
  std::vector<OracleRecord> records;

  auto score_of = [&](std::size_t sys, std::size_t t) -> double {
    const auto& tokens = pool.source_at(sys, t).tokens;
    if (tokens.empty()) return 0.0;
    double sum = 0.0;
    std::set<std::string> seen;
    for (int n = 1; n <= options.order; ++n) {
      for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
        const std::string gram = join(tokens, start, n);
        if (!seed_grams.count(gram)) continue;
        if (options.distinct && !seen.insert(gram).second) continue;
        auto it = counts.find(gram);
        sum += half_pow(it == counts.end() ? 0 : it->second);
      }
    }
    return sum / static_cast<double>(tokens.size()) * factors[sys];
  };

  while (records.size() < budget) {
    bool found = false;
    double best_score = 0.0;
    std::size_t best_sys = 0, best_t = 0;
    for (std::size_t t = 0; t < T; ++t) {
      if (options.per_target && target_taken[t]) continue;
      for (std::size_t sys = 0; sys < S; ++sys) {
        if (dead[t * S + sys]) continue;
        const double score = score_of(sys, t);
        bool better = false;
        if (!found || score > best_score) {
          better = true;
        } else if (score == best_score) {
          if (t < best_t) {
            better = true;
          } else if (t == best_t && pool.system_name(sys) < pool.system_name(best_sys)) {
            better = true;
          }
        }
        if (better) {
          found = true;
          best_score = score;
          best_sys = sys;
          best_t = t;
        }
      }
    }
    if (!found || !(best_score > 0.0)) break;

    records.push_back(OracleRecord{best_sys, best_t, best_score});
    dead[best_t * S + best_sys] = 1;
    if (options.per_target) target_taken[best_t] = 1;
    if (options.decay) {
      const auto& tokens = pool.source_at(best_sys, best_t).tokens;
      for (int n = 1; n <= options.order; ++n) {
        for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
          const std::string gram = join(tokens, start, n);
          if (seed_grams.count(gram)) ++counts[gram];
        }
      }
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// TER oracles

int levenshtein_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1, 0));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

namespace {

constexpr std::size_t kOracleMaxShiftSize = 10;
constexpr long kOracleMaxShiftDistance = 50;

using Words = std::vector<std::string>;

// All hypotheses reachable by one valid shift that strictly reduces the edit
// distance. Validity mirrors the documented rules: the block must not match
// the reference at its current position, must equal some reference span, and
// lands so that it starts at that span's position.
std::vector<Words> improving_shifts(const Words& hyp, const Words& ref, int cur) {
  std::vector<Words> out;
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    for (std::size_t len = 1; len <= std::min(kOracleMaxShiftSize, hyp.size() - i); ++len) {
      const bool in_place = i + len <= ref.size() &&
                            std::equal(hyp.begin() + i, hyp.begin() + i + len, ref.begin() + i);
      if (in_place) continue;
      for (std::size_t r = 0; r + len <= ref.size(); ++r) {
        if (r == i) continue;
        if (std::labs(static_cast<long>(r) - static_cast<long>(i)) > kOracleMaxShiftDistance) {
          continue;
        }
        if (!std::equal(hyp.begin() + i, hyp.begin() + i + len, ref.begin() + r)) continue;
        Words shifted;
        shifted.reserve(hyp.size());
        shifted.insert(shifted.end(), hyp.begin(), hyp.begin() + i);
        shifted.insert(shifted.end(), hyp.begin() + i + len, hyp.end());
        const std::size_t at = std::min(r, shifted.size());
        shifted.insert(shifted.begin() + at, hyp.begin() + i, hyp.begin() + i + len);
        if (levenshtein_oracle(shifted, ref) < cur) out.push_back(std::move(shifted));
      }
    }
  }
  return out;
}

int search_min_edits(const Words& hyp, const Words& ref, std::map<Words, int>& memo) {
  auto it = memo.find(hyp);
  if (it != memo.end()) return it->second;
  const int cur = levenshtein_oracle(hyp, ref);
  int best = cur;
  memo[hyp] = cur;  // provisional, guards cycles (none expected: lev decreases)
  for (const Words& next : improving_shifts(hyp, ref, cur)) {
    best = std::min(best, 1 + search_min_edits(next, ref, memo));
  }
  memo[hyp] = best;
  return best;
}

}  // namespace

int ter_exhaustive_edits(const std::vector<std::string>& hyp,
                         const std::vector<std::string>& ref) {
  std::map<Words, int> memo;
  return search_min_edits(hyp, ref, memo);
}

int ter_greedy_bruteforce_edits(const std::vector<std::string>& hyp_in,
                                const std::vector<std::string>& ref) {
  Words hyp = hyp_in;
  int shifts = 0;
  int cur = levenshtein_oracle(hyp, ref);
  while (cur > 0) {
    int best_gain = 0;
    Words best_hyp;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
      for (std::size_t len = 1; len <= std::min(kOracleMaxShiftSize, hyp.size() - i); ++len) {
        const bool in_place = i + len <= ref.size() &&
                              std::equal(hyp.begin() + i, hyp.begin() + i + len, ref.begin() + i);
        if (in_place) continue;
        for (std::size_t r = 0; r + len <= ref.size(); ++r) {
          if (r == i) continue;
          if (std::labs(static_cast<long>(r) - static_cast<long>(i)) > kOracleMaxShiftDistance) {
            continue;
          }
          if (!std::equal(hyp.begin() + i, hyp.begin() + i + len, ref.begin() + r)) continue;
          Words shifted;
          shifted.reserve(hyp.size());
          shifted.insert(shifted.end(), hyp.begin(), hyp.begin() + i);
          shifted.insert(shifted.end(), hyp.begin() + i + len, hyp.end());
          const std::size_t at = std::min(r, shifted.size());
          shifted.insert(shifted.begin() + at, hyp.begin() + i, hyp.begin() + i + len);
          const int gain = cur - levenshtein_oracle(shifted, ref);
          if (gain > best_gain) {
            best_gain = gain;
            best_hyp = std::move(shifted);
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

// ---------------------------------------------------------------------------
// BLEU / chrF3 references

double bleu_reference(const std::vector<std::vector<std::string>>& hyp,
                      const std::vector<std::vector<std::string>>& ref,
                      bool add_one_smoothing) {
  double matches[5] = {0, 0, 0, 0, 0};
  double totals[5] = {0, 0, 0, 0, 0};
  double hyp_len = 0, ref_len = 0;
  for (std::size_t p = 0; p < hyp.size(); ++p) {
    hyp_len += hyp[p].size();
    ref_len += ref[p].size();
    for (int n = 1; n <= 4; ++n) {
      std::map<std::string, int> h, r;
      for (std::size_t s = 0; s + n <= hyp[p].size(); ++s) ++h[join(hyp[p], s, n)];
      for (std::size_t s = 0; s + n <= ref[p].size(); ++s) ++r[join(ref[p], s, n)];
      for (const auto& [g, c] : h) {
        totals[n] += c;
        auto it = r.find(g);
        if (it != r.end()) matches[n] += std::min(c, it->second);
      }
    }
  }
  if (hyp_len == 0) return 0.0;
  double product = 1.0;
  for (int n = 1; n <= 4; ++n) {
    double num = matches[n], den = totals[n];
    if (add_one_smoothing && n >= 2) {
      num += 1;
      den += 1;
    }
    if (num == 0 || den == 0) return 0.0;
    product *= num / den;
  }
  const double bp = hyp_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / hyp_len);
  return bp * std::pow(product, 0.25) * 100.0;
}

double chrf3_reference(const std::vector<std::vector<std::string>>& hyp,
                       const std::vector<std::vector<std::string>>& ref) {
  double matches[7] = {0};
  double hyp_tot[7] = {0};
  double ref_tot[7] = {0};
  auto chars_of = [](const std::vector<std::string>& tokens) {
    std::string joined;
    for (const auto& t : tokens) joined += t;
    return btsel::utf8_decode(joined);
  };
  for (std::size_t p = 0; p < hyp.size(); ++p) {
    const std::u32string h = chars_of(hyp[p]);
    const std::u32string r = chars_of(ref[p]);
    for (int n = 1; n <= 6; ++n) {
      std::map<std::u32string, int> hc, rc;
      for (std::size_t s = 0; s + n <= h.size(); ++s) ++hc[h.substr(s, n)];
      for (std::size_t s = 0; s + n <= r.size(); ++s) ++rc[r.substr(s, n)];
      for (const auto& [g, c] : hc) {
        hyp_tot[n] += c;
        auto it = rc.find(g);
        if (it != rc.end()) matches[n] += std::min(c, it->second);
      }
      for (const auto& [g, c] : rc) ref_tot[n] += c;
    }
  }
  double p_sum = 0, r_sum = 0;
  int orders = 0;
  for (int n = 1; n <= 6; ++n) {
    if (hyp_tot[n] == 0 && ref_tot[n] == 0) continue;
    ++orders;
    if (hyp_tot[n] > 0) p_sum += matches[n] / hyp_tot[n];
    if (ref_tot[n] > 0) r_sum += matches[n] / ref_tot[n];
  }
  if (orders == 0) return 0.0;
  const double precision = p_sum / orders;
  const double recall = r_sum / orders;
  if (9.0 * precision + recall == 0.0) return 0.0;
  return 10.0 * precision * recall / (9.0 * precision + recall) * 100.0;
}

// ---------------------------------------------------------------------------
// Diversity oracles

namespace {

std::optional<double> mtld_factors_oracle(const std::vector<std::string>& stream,
                                          double threshold) {
  double factors = 0.0;
  std::set<std::string> types;
  double tokens = 0.0;
  for (const std::string& tok : stream) {
    types.insert(tok);
    tokens += 1.0;
    if (types.size() / tokens < threshold) {
      factors += 1.0;
      types.clear();
      tokens = 0.0;
    }
  }
  if (tokens > 0.0) factors += (1.0 - types.size() / tokens) / (1.0 - threshold);
  if (factors == 0.0) return std::nullopt;
  return factors;
}

}  // namespace

std::optional<double> mtld_oracle(const std::vector<std::string>& stream, double threshold) {
  if (stream.empty()) return std::nullopt;
  const auto fwd = mtld_factors_oracle(stream, threshold);
  std::vector<std::string> reversed(stream.rbegin(), stream.rend());
  const auto rev = mtld_factors_oracle(reversed, threshold);
  if (!fwd || !rev) return std::nullopt;
  const double n = static_cast<double>(stream.size());
  return (n / *fwd + n / *rev) / 2.0;
}

std::optional<double> yules_i_oracle(const std::vector<std::string>& stream) {
  std::map<std::string, std::uint64_t> freq;
  for (const auto& tok : stream) ++freq[tok];
  std::map<std::uint64_t, std::uint64_t> classes;  // f -> V_f
  for (const auto& [tok, f] : freq) ++classes[f];
  const double m1 = static_cast<double>(stream.size());
  double m2 = 0.0;
  for (const auto& [f, vf] : classes) {
    m2 += static_cast<double>(f) * static_cast<double>(f) * static_cast<double>(vf);
  }
  if (m2 == m1) return std::nullopt;
  return m1 * m1 / (m2 - m1);
}

}  // namespace oracles
