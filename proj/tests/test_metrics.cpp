#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "irlsum/metrics.hpp"
#include "irlsum/rng.hpp"
#include "oracles.hpp"

using namespace irlsum;

namespace {

std::vector<std::string> toks(std::initializer_list<const char*> list) {
  std::vector<std::string> out;
  for (const char* s : list) out.emplace_back(s);
  return out;
}

std::vector<std::string> random_seq(Rng& rng, size_t max_len, int alphabet) {
  std::vector<std::string> out(rng.next_below(max_len + 1));
  for (auto& t : out) t = std::string(1, static_cast<char>('a' + rng.next_below(alphabet)));
  return out;
}

}  // namespace

TEST_CASE("lcs_len fixtures") {
  CHECK(lcs_len(toks({"a", "b", "c", "d"}), toks({"a", "c", "b", "d"})) == 3);
  const auto s = toks({"x", "y", "x", "z"});
  CHECK(lcs_len(s, s) == s.size());
  CHECK(lcs_len(toks({"a", "b"}), toks({"c", "d"})) == 0);
  CHECK(lcs_len({}, s) == 0);
  CHECK(lcs_len(s, {}) == 0);
}

TEST_CASE("lcs_len matches the brute-force subsequence oracle exhaustively") {
  // Every pair over {a,b,c} with both sides up to length 4.
  std::vector<std::vector<std::string>> sequences = {{}};
  for (size_t len = 1; len <= 4; ++len) {
    const size_t start = sequences.size();
    (void)start;
    std::vector<std::vector<std::string>> next;
    for (const auto& s : sequences) {
      if (s.size() != len - 1) continue;
      for (char c : {'a', 'b', 'c'}) {
        auto ext = s;
        ext.emplace_back(1, c);
        next.push_back(std::move(ext));
      }
    }
    sequences.insert(sequences.end(), next.begin(), next.end());
  }
  for (const auto& a : sequences) {
    for (const auto& b : sequences) {
      CHECK(lcs_len(a, b) == oracles::brute_force_lcs(a, b));
    }
  }
}

TEST_CASE("lcs_len agrees with an independent DP on random pairs") {
  Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_seq(rng, 30, 10);
    const auto b = random_seq(rng, 30, 10);
    CHECK(lcs_len(a, b) == oracles::table_lcs(a, b));
    CHECK(lcs_len(a, b) <= std::min(a.size(), b.size()));
  }
}

TEST_CASE("rouge_l fixtures") {
  const auto s = toks({"a", "b", "c"});
  CHECK(rouge_l(s, s) == doctest::Approx(1.0));
  CHECK(rouge_l(toks({"a", "b", "c", "d"}), toks({"a", "c", "b", "d"})) == doctest::Approx(0.75));
  CHECK(rouge_l(toks({"a"}), toks({"b"})) == 0.0);
  CHECK(rouge_l({}, s) == 0.0);
}

TEST_CASE("rouge_l symmetry and identity-of-one") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_seq(rng, 12, 3);
    const auto b = random_seq(rng, 12, 3);
    CHECK(rouge_l(a, b) == doctest::Approx(rouge_l(b, a)).epsilon(1e-12));
    if (rouge_l(a, b) == 1.0) CHECK(a == b);
    if (a == b && !a.empty()) CHECK(rouge_l(a, b) == doctest::Approx(1.0));
  }
  CHECK(rouge_l(toks({"a", "b"}), toks({"b", "a"})) < 1.0);
}

TEST_CASE("ngram_set fixtures") {
  const auto grams = ngram_set(toks({"a", "b", "a", "b"}), 2);
  CHECK(grams.size() == 2);
  CHECK(grams.count({"a", "b"}) == 1);
  CHECK(grams.count({"b", "a"}) == 1);
  CHECK(ngram_set(toks({"a", "b", "c"}), 4).empty());
  CHECK(ngram_set(toks({"a", "a", "a"}), 1).size() == 1);
  CHECK_THROWS_AS(ngram_set(toks({"a"}), 0), std::invalid_argument);
}

TEST_CASE("novelty fixtures") {
  const auto article = toks({"the", "cat", "sat", "on", "the", "mat"});
  CHECK(novelty(toks({"the", "cat", "sat"}), article, 2) == 0.0);
  CHECK(novelty(toks({"the", "cat", "jumped", "high"}), article, 2) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(novelty(toks({"zeb", "ra"}), article, 1) == doctest::Approx(1.0));
  CHECK(novelty({}, article, 2) == 0.0);  // no n-grams
}

TEST_CASE("novelty complements the present fraction") {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    const auto article = random_seq(rng, 15, 4);
    auto summary = random_seq(rng, 10, 4);
    if (summary.size() < 2) continue;
    const int n = 2;
    const auto grams = ngram_set(summary, n);
    const auto art_grams = ngram_set(article, n);
    size_t present = 0;
    for (const auto& g : grams) present += art_grams.count(g);
    const double present_frac = static_cast<double>(present) / static_cast<double>(grams.size());
    CHECK(novelty(summary, article, n) + present_frac == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("fragment_coverage fixtures") {
  const auto article = toks({"the", "cat", "sat"});
  CHECK(fragment_coverage(toks({"cat", "sat"}), article) == doctest::Approx(1.0));
  CHECK(fragment_coverage(toks({"the", "cat", "jumped"}), article) == doctest::Approx(2.0 / 3.0));
  CHECK(fragment_coverage(toks({"dog", "ran"}), article) == 0.0);
  CHECK_THROWS_AS(fragment_coverage({}, article), std::invalid_argument);
}

TEST_CASE("compression fixtures") {
  std::vector<std::string> article(100, "w");
  std::vector<std::string> summary(10, "w");
  CHECK(compression(summary, article) == doctest::Approx(0.10));
  CHECK(compression(article, summary) == 1.0);  // clamped
  CHECK_THROWS_AS(compression(summary, {}), std::invalid_argument);
}

TEST_CASE("components on a lead-copy pair") {
  const auto article = toks({"the", "cat", "sat", ".", "a", "dog", "ran", "."});
  const auto reference = toks({"the", "cat", "sat", "."});
  const ComponentVector c = components(reference, article, reference, 2);
  CHECK(c.rouge == doctest::Approx(1.0));
  CHECK(c.novelty == 0.0);
  CHECK(c.coverage == doctest::Approx(1.0));
  CHECK(c.compression == doctest::Approx(0.5));
}

TEST_CASE("components of an empty summary are all zero") {
  const auto article = toks({"a", "b"});
  const ComponentVector c = components({}, article, article, 2);
  CHECK(c.rouge == 0.0);
  CHECK(c.novelty == 0.0);
  CHECK(c.coverage == 0.0);
  CHECK(c.compression == 0.0);
}

TEST_CASE("components stay in [0,1]") {
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    auto article = random_seq(rng, 20, 5);
    auto reference = random_seq(rng, 8, 5);
    const auto summary = random_seq(rng, 12, 5);
    if (article.empty()) article = toks({"a"});
    if (reference.empty()) reference = toks({"b"});
    const auto c = components(summary, article, reference, 2).as_array();
    for (double v : c) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}
