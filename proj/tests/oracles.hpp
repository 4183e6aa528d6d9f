// Independent oracles used by the unit and acceptance suites. These stay
// deliberately naive and must not share code with the implementations they
// check.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irlsum/policy.hpp"
#include "irlsum/reward.hpp"

namespace oracles {

// Exhaustive subsequence enumeration: every subsequence of `a` (bitmask),
// kept if it is also a subsequence of `b`. Exponential in |a|.
inline size_t brute_force_lcs(std::span<const std::string> a, std::span<const std::string> b) {
  size_t best = 0;
  for (uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
    std::vector<const std::string*> sub;
    for (size_t i = 0; i < a.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(&a[i]);
    }
    size_t j = 0;
    for (size_t i = 0; i < b.size() && j < sub.size(); ++i) {
      if (b[i] == *sub[j]) ++j;
    }
    if (j == sub.size()) best = std::max(best, sub.size());
  }
  return best;
}

// A second LCS implementation with a different shape: full 2D table,
// recursion replaced by explicit indices.
inline size_t table_lcs(std::span<const std::string> a, std::span<const std::string> b) {
  const size_t rows = a.size() + 1, cols = b.size() + 1;
  std::vector<std::vector<size_t>> dp(rows, std::vector<size_t>(cols, 0));
  for (size_t i = 1; i < rows; ++i) {
    for (size_t j = 1; j < cols; ++j) {
      dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1
                                      : (dp[i - 1][j] > dp[i][j - 1] ? dp[i - 1][j] : dp[i][j - 1]);
    }
  }
  return dp[a.size()][b.size()];
}

// Recomputes the importance-sampled gradient from raw rewards and log-probs,
// without max-subtraction and with reversed summation order.
inline std::array<double, 4> recompute_irl_gradient(
    const std::vector<irlsum::ComponentVector>& demos,
    const std::vector<irlsum::SampleRecord>& records, const irlsum::RewardWeights& phi) {
  std::vector<double> weights(records.size());
  double total = 0.0;
  for (size_t m = 0; m < records.size(); ++m) {
    const auto c = records[m].comps.as_array();
    double r = 0.0;
    for (size_t k = 0; k < 4; ++k) r += phi.phi[k] * c[k];
    weights[m] = std::exp(r - records[m].logq);
    total += weights[m];
  }
  std::array<double, 4> grad{};
  for (size_t k = 0; k < 4; ++k) {
    double data = 0.0;
    for (size_t n = demos.size(); n-- > 0;) data += demos[n].as_array()[k];
    data /= static_cast<double>(demos.size());
    double model = 0.0;
    for (size_t m = records.size(); m-- > 0;) {
      model += (weights[m] / total) * records[m].comps.as_array()[k];
    }
    grad[k] = data - model;
  }
  return grad;
}

// Central finite differences of the sequence NLL; returns the worst relative
// error against the analytic gradient.
inline double max_fd_relative_error(const irlsum::PolicyParams& params,
                                    std::span<const int> article, std::span<const int> targets,
                                    double eps) {
  const irlsum::NllResult analytic = irlsum::nll_grad(params, article, targets);
  double worst = 0.0;
  for (size_t i = 0; i < params.count(); ++i) {
    irlsum::PolicyParams plus = params;
    plus.data[i] += eps;
    irlsum::PolicyParams minus = params;
    minus.data[i] -= eps;
    const double lp = irlsum::nll_grad(plus, article, targets).loss;
    const double lm = irlsum::nll_grad(minus, article, targets).loss;
    const double fd = (lp - lm) / (2.0 * eps);
    const double an = analytic.grad[i];
    const double denom = std::max({std::abs(fd), std::abs(an), 1e-4});
    worst = std::max(worst, std::abs(fd - an) / denom);
  }
  return worst;
}

}  // namespace oracles
