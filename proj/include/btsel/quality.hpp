#pragma once

#include <vector>

#include "btsel/corpus.hpp"

namespace btsel {

struct EvalPair {
  Sentence hypothesis;
  Sentence reference;  // non-empty
};

struct QualityScores {
  double bleu = 0.0;   // [0, 100]
  double ter = 0.0;    // >= 0, may exceed 100
  double chrf3 = 0.0;  // [0, 100]
};

// Zips two line-aligned corpora; throws DataError on size mismatch or an
// empty reference line.
std::vector<EvalPair> make_eval_pairs(const Corpus& hypotheses, const Corpus& references);

// Corpus BLEU: geometric mean of modified n-gram precisions for n = 1..4
// times the brevity penalty, scaled to [0, 100]. Zero if any precision is
// zero; with `add_one_smoothing`, precisions for n >= 2 get +1 on both
// numerator and denominator.
double corpus_bleu(const std::vector<EvalPair>& pairs, bool add_one_smoothing = false);

// Translation edit rate as a percentage: total edits / total reference
// tokens x 100. Per-sentence edits use word-level Levenshtein (unit costs)
// plus the standard greedy block-shift heuristic: repeatedly move the block
// that most reduces the edit distance (the block must mismatch in place and
// exactly match a reference span, where it lands), one edit per shift, until
// no shift reduces the distance. Block size is capped at 10 tokens and shift
// distance at 50 positions.
double corpus_ter(const std::vector<EvalPair>& pairs);

// chrF3: character n-gram F-score, beta = 3, orders 1..6 macro-averaged,
// corpus-level counts. N-grams are taken over each sentence's concatenated
// token characters (spaces excluded, so n-grams cross token boundaries).
// Orders with no hypothesis or reference n-grams anywhere contribute
// precision/recall 0; orders with neither are excluded from the average.
double corpus_chrf3(const std::vector<EvalPair>& pairs);

QualityScores evaluate_corpus(const std::vector<EvalPair>& pairs, bool add_one_smoothing = false);

}  // namespace btsel
