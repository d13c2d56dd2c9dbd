#pragma once

#include <optional>
#include <vector>

#include "btsel/corpus.hpp"

namespace btsel {

// Document-level lexical diversity. Degenerate cases surface as empty
// optionals: yules_i when every type is a hapax (M2 == M1, the value would
// be infinite), mtld when a pass produces zero factors (the running TTR
// never crossed the threshold and the partial factor is zero).
struct DiversityScores {
  double ttr = 0.0;
  std::optional<double> yules_i;
  std::optional<double> mtld;
};

// Distinct tokens / total tokens. Document must contain at least one token.
double ttr(const Corpus& doc);

// Yule's I = M1^2 / (M2 - M1) with M1 the token count and M2 the sum of
// f^2 * V_f over frequency classes.
std::optional<double> yules_i(const Corpus& doc);

// Bidirectional MTLD (threshold 0.72 by default): scan the token stream,
// completing a factor whenever the running TTR of the current segment drops
// below the threshold; the remaining partial segment contributes
// (1 - TTR) / (1 - threshold). MTLD = tokens / factors, averaged over the
// forward and reversed passes.
std::optional<double> mtld(const Corpus& doc, double threshold = 0.72);

DiversityScores compute_diversity(const Corpus& doc, double mtld_threshold = 0.72);

}  // namespace btsel
