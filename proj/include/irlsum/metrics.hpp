#pragma once

#include <array>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace irlsum {

// The four sub-reward values for one summary, each in [0,1].
// Order everywhere: (rouge, novelty, coverage, compression).
struct ComponentVector {
  double rouge = 0.0;
  double novelty = 0.0;
  double coverage = 0.0;
  double compression = 0.0;

  static constexpr int kCount = 4;
  static constexpr std::array<const char*, 4> kNames = {"rouge", "nov", "cov", "comp"};

  std::array<double, 4> as_array() const { return {rouge, novelty, coverage, compression}; }
  static ComponentVector from_array(const std::array<double, 4>& a) {
    return {a[0], a[1], a[2], a[3]};
  }
};

using Tokens = std::span<const std::string>;

// Longest common subsequence length, O(|a|*|b|) dynamic program.
size_t lcs_len(Tokens a, Tokens b);

// ROUGE-L F1: P = LCS/|cand|, R = LCS/|ref|, F1 = 2PR/(P+R).
// 0 when either side is empty or the LCS is empty.
double rouge_l(Tokens candidate, Tokens reference);

// Distinct contiguous n-token windows.
std::set<std::vector<std::string>> ngram_set(Tokens seq, int n);

// Fraction of the summary's distinct n-grams absent from the article;
// 0 when the summary has no n-grams.
double novelty(Tokens summary, Tokens article, int n);

// Greedy extractive-fragment coverage: scan the summary left to right, take
// the longest contiguous match with any article span (ties: earliest article
// start), singletons for non-matches; coverage = matched tokens / |summary|.
double fragment_coverage(Tokens summary, Tokens article);

// min(1, |summary| / |article|).
double compression(Tokens summary, Tokens article);

// All four components. An empty summary yields all zeros (a degenerate
// policy sample must not crash a training loop); the standalone coverage
// and compression operations still enforce their preconditions.
ComponentVector components(Tokens summary, Tokens article, Tokens reference, int novelty_order);

}  // namespace irlsum
