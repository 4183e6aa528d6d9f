#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "irlsum/corpus.hpp"
#include "irlsum/reward.hpp"
#include "irlsum/rng.hpp"

namespace irlsum {

// All trainable parameters of the policy, stored flat so that gradient
// vectors, SGD steps, and finite-difference checks share one layout:
//   [ embedding (V x d) | w_in (d x 2d) | w_rec (d x d) | bias (d) | w_out (V x d) ]
// The recurrence is h' = tanh(w_in . [e_prev; c] + w_rec . h + b), with c the
// mean of the article's token embeddings, and logits = w_out . h'.
struct PolicyParams {
  int vocab_size = 0;
  int dim = 0;
  std::vector<double> data;

  static PolicyParams init(int vocab_size, int dim, uint64_t seed);

  size_t count() const { return data.size(); }
  size_t embedding_off() const { return 0; }
  size_t w_in_off() const { return static_cast<size_t>(vocab_size) * dim; }
  size_t w_rec_off() const { return w_in_off() + static_cast<size_t>(dim) * 2 * dim; }
  size_t bias_off() const { return w_rec_off() + static_cast<size_t>(dim) * dim; }
  size_t w_out_off() const { return bias_off() + static_cast<size_t>(dim); }

  std::span<const double> embedding(int token) const {
    return {data.data() + embedding_off() + static_cast<size_t>(token) * dim,
            static_cast<size_t>(dim)};
  }
};

struct DecodeState {
  std::vector<double> hidden;
  std::vector<double> context;
  int step = 0;
};

struct StepResult {
  std::vector<double> logits;
  DecodeState state;
};

struct NllResult {
  double loss = 0.0;
  std::vector<double> grad;
};

// Mean of the article's token embeddings (order-insensitive bag encoder).
std::vector<double> encode(const PolicyParams& params, std::span<const int> article);

DecodeState initial_state(const PolicyParams& params, std::span<const int> article);

// One decoder step conditioned on the previous token.
StepResult step(const PolicyParams& params, const DecodeState& state, int prev_token);

// Log-softmax with max-subtraction.
std::vector<double> log_softmax(std::span<const double> logits);

// Total log-probability of a summary whose final token is EOS; every step
// including the terminal EOS is scored.
double log_prob(const PolicyParams& params, std::span<const int> article,
                std::span<const int> summary);

// Ancestral sampling until EOS or max_len. When max_len is reached without
// EOS, the EOS log-probability of the next step is still added, so logq is
// always the full model probability of the returned sequence. tokens.ids
// holds content ids only; surfaces are left for the caller's vocab.
SampleRecord sample(const PolicyParams& params, std::span<const int> article, int max_len,
                    Rng& rng);

// Sampling restricted to content tokens (ids >= Vocab::kReserved) with the
// softmax renormalized over them; produces sequences of exactly len tokens.
// This is the proposal distribution used against the enumeration oracle.
SampleRecord sample_fixed_length(const PolicyParams& params, std::span<const int> article,
                                 int len, Rng& rng);

// Argmax decoding, ties to the smallest id; stops at EOS or max_len.
std::vector<int> greedy(const PolicyParams& params, std::span<const int> article, int max_len);

// Loss and exact gradient of -sum_t log p(target_t | target_<t, article).
// Targets are scored as given; callers wanting the standard sequence loss
// include the terminal EOS.
NllResult nll_grad(const PolicyParams& params, std::span<const int> article,
                   std::span<const int> targets);

// Teacher-forced MLE on the reference (terminal EOS appended).
NllResult mle_grad(const PolicyParams& params, std::span<const int> article,
                   std::span<const int> reference);

// Score-function gradient of -advantage * log q(sampled | article), with the
// advantage treated as a constant. Exactly zero when advantage is zero.
std::vector<double> pg_grad(const PolicyParams& params, std::span<const int> article,
                            const SampleRecord& sampled, double advantage);

// Plain gradient-descent step, no momentum.
PolicyParams apply_grads(const PolicyParams& params, std::span<const double> grad, double lr);

}  // namespace irlsum
