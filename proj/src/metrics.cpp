#include "irlsum/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace irlsum {

size_t lcs_len(Tokens a, Tokens b) {
  if (a.empty() || b.empty()) return 0;
  // Two rolling rows over the |a| x |b| table.
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(Tokens candidate, Tokens reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const size_t lcs = lcs_len(candidate, reference);
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(candidate.size());
  const double r = static_cast<double>(lcs) / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

std::set<std::vector<std::string>> ngram_set(Tokens seq, int n) {
  if (n < 1) throw std::invalid_argument("ngram_set: order must be >= 1");
  std::set<std::vector<std::string>> out;
  if (seq.size() < static_cast<size_t>(n)) return out;
  for (size_t i = 0; i + static_cast<size_t>(n) <= seq.size(); ++i) {
    out.insert(std::vector<std::string>(seq.begin() + static_cast<long>(i),
                                        seq.begin() + static_cast<long>(i) + n));
  }
  return out;
}

double novelty(Tokens summary, Tokens article, int n) {
  auto summary_grams = ngram_set(summary, n);
  if (summary_grams.empty()) return 0.0;
  auto article_grams = ngram_set(article, n);
  size_t absent = 0;
  for (const auto& g : summary_grams) {
    if (!article_grams.count(g)) ++absent;
  }
  return static_cast<double>(absent) / static_cast<double>(summary_grams.size());
}

double fragment_coverage(Tokens summary, Tokens article) {
  if (summary.empty()) throw std::invalid_argument("fragment_coverage: empty summary");
  size_t covered = 0;
  size_t i = 0;
  while (i < summary.size()) {
    size_t best = 0;
    for (size_t j = 0; j < article.size(); ++j) {
      size_t len = 0;
      while (i + len < summary.size() && j + len < article.size() &&
             summary[i + len] == article[j + len]) {
        ++len;
      }
      if (len > best) best = len;  // strict > keeps the earliest article start
    }
    if (best > 0) {
      covered += best;
      i += best;
    } else {
      ++i;
    }
  }
  return static_cast<double>(covered) / static_cast<double>(summary.size());
}

double compression(Tokens summary, Tokens article) {
  if (article.empty()) throw std::invalid_argument("compression: empty article");
  return std::min(1.0, static_cast<double>(summary.size()) / static_cast<double>(article.size()));
}

ComponentVector components(Tokens summary, Tokens article, Tokens reference, int novelty_order) {
  if (article.empty()) throw std::invalid_argument("components: empty article");
  if (reference.empty()) throw std::invalid_argument("components: empty reference");
  if (summary.empty()) return {};
  ComponentVector c;
  c.rouge = rouge_l(summary, reference);
  c.novelty = novelty(summary, article, novelty_order);
  c.coverage = fragment_coverage(summary, article);
  c.compression = compression(summary, article);
  return c;
}

}  // namespace irlsum
