#pragma once

#include <array>
#include <vector>

#include "irlsum/corpus.hpp"
#include "irlsum/metrics.hpp"

namespace irlsum {

// Learnable weights over the four sub-rewards. No sign or norm constraint:
// weights drift negative when the data mean sits below the model mean.
struct RewardWeights {
  std::array<double, 4> phi{0.25, 0.25, 0.25, 0.25};

  static RewardWeights uniform() { return RewardWeights{}; }
};

// One policy sample: its tokens, the total sequence log-probability under
// the sampling policy, and its component values.
struct SampleRecord {
  TokenSeq tokens;
  double logq = 0.0;
  ComponentVector comps;
};

// Samples plus their normalized importance weights (betas sum to 1).
struct ImportanceBatch {
  std::vector<SampleRecord> records;
  std::vector<double> betas;
};

// R_phi(y) = phi . C(y).
double reward(const RewardWeights& phi, const ComponentVector& comps);

// beta_m = softmax_m(R_phi(S_m) - log q(S_m)), computed in log space with
// max-subtraction.
ImportanceBatch beta_weights(std::vector<SampleRecord> records, const RewardWeights& phi);

// Data-side and model-side component means of the importance-sampled
// gradient. The gradient is exactly data minus model, so both are exposed
// and the subtraction reuses these values bit for bit.
struct IrlMeans {
  std::array<double, 4> data{};
  std::array<double, 4> model{};
};

IrlMeans irl_means(const std::vector<ComponentVector>& data_comps, const ImportanceBatch& batch);

// Per component k: (1/N) sum_n C_k(y^n) - sum_m beta_m C_k(y^m).
std::array<double, 4> irl_gradient(const std::vector<ComponentVector>& data_comps,
                                   const ImportanceBatch& batch);

// Gradient ascent: phi' = phi + lr * grad.
RewardWeights reward_update(const RewardWeights& phi, const std::array<double, 4>& grad,
                            double lr);

// Test-support oracle: enumerates every sequence of exactly max_len content
// tokens (ids >= Vocab::kReserved), computes the partition function of the
// exp-reward distribution over that space, and returns the demonstration
// components minus the exact model expectation. Errors when the space
// exceeds 1e5 sequences.
std::array<double, 4> exact_gradient_enumeration(const RewardWeights& phi,
                                                 const TokenSeq& article,
                                                 const TokenSeq& reference, int max_len,
                                                 const Vocab& vocab, int novelty_order);

}  // namespace irlsum
