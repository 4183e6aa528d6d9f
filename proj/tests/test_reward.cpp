#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "irlsum/reward.hpp"
#include "irlsum/rng.hpp"
#include "oracles.hpp"

using namespace irlsum;

namespace {

SampleRecord record(double logq, const ComponentVector& comps) {
  SampleRecord r;
  r.logq = logq;
  r.comps = comps;
  return r;
}

ComponentVector random_comps(Rng& rng) {
  return {rng.next_double(), rng.next_double(), rng.next_double(), rng.next_double()};
}

}  // namespace

TEST_CASE("reward is the dot product") {
  RewardWeights phi;
  phi.phi = {1, 0, 0, 0};
  CHECK(reward(phi, {0.5, 0.9, 0.1, 0.3}) == doctest::Approx(0.5));
  phi.phi = {0, 0, 0, 0};
  CHECK(reward(phi, {0.5, 0.9, 0.1, 0.3}) == 0.0);
  phi.phi = {0.25, 0.25, 0.25, 0.25};
  CHECK(reward(phi, {1, 1, 1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("beta_weights fixtures") {
  RewardWeights phi;
  phi.phi = {1, 0, 0, 0};

  SUBCASE("equal reward and logq give the uniform split") {
    auto batch = beta_weights({record(-2.0, {0.4, 0, 0, 0}), record(-2.0, {0.4, 0, 0, 0})}, phi);
    CHECK(batch.betas[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(batch.betas[1] == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("rewards (1, 0) with equal logq give the two-point softmax") {
    auto batch = beta_weights({record(-1.0, {1, 0, 0, 0}), record(-1.0, {0, 0, 0, 0})}, phi);
    const double e = std::exp(1.0);
    CHECK(batch.betas[0] == doctest::Approx(e / (e + 1)).epsilon(1e-12));
    CHECK(batch.betas[1] == doctest::Approx(1 / (e + 1)).epsilon(1e-12));
  }

  SUBCASE("shifting every reward leaves betas unchanged") {
    // A shared constant in a component with nonzero weight shifts all
    // rewards equally; so does a constant shift of every logq.
    Rng rng(4);
    std::vector<SampleRecord> base;
    for (int m = 0; m < 8; ++m) base.push_back(record(-1.0 - rng.next_double(), random_comps(rng)));
    auto shifted = base;
    for (auto& r : shifted) r.logq -= 3.25;  // u_m = R - logq grows by the same 3.25
    const auto b0 = beta_weights(base, phi);
    const auto b1 = beta_weights(shifted, phi);
    for (size_t m = 0; m < b0.betas.size(); ++m) {
      CHECK(b0.betas[m] == doctest::Approx(b1.betas[m]).epsilon(1e-12));
    }
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(beta_weights({}, phi), std::invalid_argument);
    CHECK_THROWS_AS(beta_weights({record(std::nan(""), {0, 0, 0, 0})}, phi),
                    std::invalid_argument);
  }
}

TEST_CASE("beta_weights properties over random batches") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    RewardWeights phi;
    for (auto& w : phi.phi) w = 2.0 * rng.next_double() - 1.0;
    std::vector<SampleRecord> records;
    const size_t m = 1 + rng.next_below(12);
    for (size_t i = 0; i < m; ++i) {
      records.push_back(record(-5.0 * rng.next_double(), random_comps(rng)));
    }
    const auto batch = beta_weights(records, phi);
    double sum = 0.0;
    for (double b : batch.betas) {
      CHECK(b >= 0.0);
      sum += b;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);

    // Permutation equivariance: rotate the records by one.
    std::vector<SampleRecord> rotated(records.begin() + 1, records.end());
    rotated.push_back(records.front());
    const auto batch_rot = beta_weights(rotated, phi);
    for (size_t i = 0; i < m; ++i) {
      CHECK(batch_rot.betas[i] == doctest::Approx(batch.betas[(i + 1) % m]).epsilon(1e-12));
    }
  }
}

TEST_CASE("irl_gradient fixtures") {
  SUBCASE("hand-evaluated two-sample case") {
    RewardWeights phi;
    phi.phi = {0, 0, 0, 0};  // uniform rewards, so betas are exactly (0.5, 0.5)
    const std::vector<ComponentVector> demos = {{0.8, 0.8, 0.8, 0.8}};
    auto batch = beta_weights({record(-1.0, {0.2, 0.2, 0.2, 0.2}),
                               record(-1.0, {0.4, 0.4, 0.4, 0.4})},
                              phi);
    const auto grad = irl_gradient(demos, batch);
    for (double g : grad) CHECK(g == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("matched expectations give a zero gradient") {
    RewardWeights phi;
    const ComponentVector c{0.3, 0.6, 0.9, 0.2};
    const std::vector<ComponentVector> demos = {c, c};
    auto batch = beta_weights({record(-2.0, c), record(-2.0, c)}, phi);
    for (double g : irl_gradient(demos, batch)) CHECK(g == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("gradient sign equals data minus model sign") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      RewardWeights phi;
      for (auto& w : phi.phi) w = rng.next_double();
      std::vector<ComponentVector> demos;
      for (int n = 0; n < 5; ++n) demos.push_back(random_comps(rng));
      std::vector<SampleRecord> records;
      for (int m = 0; m < 6; ++m) records.push_back(record(-rng.next_double(), random_comps(rng)));
      const auto batch = beta_weights(records, phi);
      const auto means = irl_means(demos, batch);
      const auto grad = irl_gradient(demos, batch);
      for (size_t k = 0; k < 4; ++k) {
        const double diff = means.data[k] - means.model[k];
        CHECK(grad[k] == diff);  // bitwise: same summation
      }
    }
  }

  SUBCASE("errors") {
    RewardWeights phi;
    auto batch = beta_weights({record(-1.0, {0, 0, 0, 0})}, phi);
    CHECK_THROWS_AS(irl_gradient({}, batch), std::invalid_argument);
    CHECK_THROWS_AS(irl_gradient({{0, 0, 0, 0}}, ImportanceBatch{}), std::invalid_argument);
  }
}

TEST_CASE("irl_gradient matches an independent recomputation to 1e-10") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    RewardWeights phi;
    for (auto& w : phi.phi) w = 2.0 * rng.next_double() - 1.0;
    std::vector<ComponentVector> demos;
    const size_t n = 1 + rng.next_below(20);
    for (size_t i = 0; i < n; ++i) demos.push_back(random_comps(rng));
    std::vector<SampleRecord> records;
    const size_t m = 1 + rng.next_below(20);
    for (size_t i = 0; i < m; ++i) {
      records.push_back(record(-8.0 * rng.next_double(), random_comps(rng)));
    }
    const auto grad = irl_gradient(demos, beta_weights(records, phi));
    const auto expected = oracles::recompute_irl_gradient(demos, records, phi);
    for (size_t k = 0; k < 4; ++k) CHECK(grad[k] == doctest::Approx(expected[k]).epsilon(1e-10));
  }
}

TEST_CASE("reward_update") {
  RewardWeights phi;
  SUBCASE("zero gradient leaves phi unchanged") {
    const auto out = reward_update(phi, {0, 0, 0, 0}, 0.1);
    CHECK(out.phi == phi.phi);
  }
  SUBCASE("single-component arithmetic") {
    const auto out = reward_update(phi, {0.5, 0, 0, 0}, 0.1);
    CHECK(out.phi[0] == doctest::Approx(0.30));
    CHECK(out.phi[1] == doctest::Approx(0.25));
  }
  SUBCASE("two sequential updates equal one update with the summed gradient") {
    const std::array<double, 4> g1{0.1, -0.2, 0.3, 0.0};
    const std::array<double, 4> g2{-0.05, 0.1, 0.2, 0.4};
    const auto two = reward_update(reward_update(phi, g1, 0.07), g2, 0.07);
    std::array<double, 4> sum{};
    for (size_t k = 0; k < 4; ++k) sum[k] = g1[k] + g2[k];
    const auto one = reward_update(phi, sum, 0.07);
    for (size_t k = 0; k < 4; ++k) CHECK(two.phi[k] == doctest::Approx(one.phi[k]).epsilon(1e-15));
  }
  SUBCASE("update sign equals gradient sign") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      std::array<double, 4> g{};
      for (auto& v : g) v = 2.0 * rng.next_double() - 1.0;
      const auto out = reward_update(phi, g, 0.05);
      for (size_t k = 0; k < 4; ++k) {
        const double delta = out.phi[k] - phi.phi[k];
        CHECK((delta > 0) == (g[k] > 0));
        CHECK((delta < 0) == (g[k] < 0));
      }
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(reward_update(phi, {std::nan(""), 0, 0, 0}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(reward_update(phi, {0, 0, 0, 0}, 0.0), std::invalid_argument);
  }
}

namespace {

// Vocab with `n` content tokens a, b, c, ...
Vocab tiny_vocab(int n) {
  Vocab v;
  for (int i = 0; i < n; ++i) v.add(std::string(1, static_cast<char>('a' + i)));
  return v;
}

}  // namespace

TEST_CASE("exact_gradient_enumeration") {
  const Vocab vocab = tiny_vocab(3);
  TokenSeq article = tokenize("a b c a");
  vocab.encode(article);
  TokenSeq reference = tokenize("a b");
  vocab.encode(reference);

  SUBCASE("single-sequence space") {
    const Vocab v1 = tiny_vocab(1);
    TokenSeq art = v1.decode({Vocab::kReserved, Vocab::kReserved});
    TokenSeq ref = v1.decode({Vocab::kReserved});
    RewardWeights phi;
    const auto grad = exact_gradient_enumeration(phi, art, ref, 1, v1, 2);
    const auto demo = components(ref.surf(), art.surf(), ref.surf(), 2).as_array();
    const auto only = components(ref.surf(), art.surf(), ref.surf(), 2).as_array();
    // The one enumerable sequence is exactly the reference token.
    for (size_t k = 0; k < 4; ++k) CHECK(grad[k] == doctest::Approx(demo[k] - only[k]));
  }

  SUBCASE("uniform rewards reduce to the unweighted mean") {
    RewardWeights phi;
    phi.phi = {0, 0, 0, 0};
    const auto grad = exact_gradient_enumeration(phi, article, reference, 2, vocab, 2);
    // Hand enumeration of the 9 sequences with equal probability 1/9.
    std::array<double, 4> mean{};
    for (int t1 = Vocab::kReserved; t1 < vocab.size(); ++t1) {
      for (int t2 = Vocab::kReserved; t2 < vocab.size(); ++t2) {
        const TokenSeq y = vocab.decode({t1, t2});
        const auto c = components(y.surf(), article.surf(), reference.surf(), 2).as_array();
        for (size_t k = 0; k < 4; ++k) mean[k] += c[k] / 9.0;
      }
    }
    const auto demo =
        components(reference.surf(), article.surf(), reference.surf(), 2).as_array();
    for (size_t k = 0; k < 4; ++k) CHECK(grad[k] == doctest::Approx(demo[k] - mean[k]).epsilon(1e-12));
  }

  SUBCASE("space too large") {
    const Vocab v10 = tiny_vocab(10);
    CHECK_THROWS_AS(exact_gradient_enumeration(RewardWeights{}, article, reference, 6, v10, 2),
                    std::invalid_argument);
  }
}
