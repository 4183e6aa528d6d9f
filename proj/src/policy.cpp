#include "irlsum/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irlsum {

namespace {

void check_token(const PolicyParams& params, int token, const char* where) {
  if (token < 0 || token >= params.vocab_size) {
    throw std::invalid_argument(std::string(where) + ": token id out of range");
  }
}

// Forward pass with everything the backward pass needs.
struct Trace {
  std::vector<double> context;
  std::vector<int> prev_tokens;            // input token per step
  std::vector<std::vector<double>> hidden; // hidden[t] = state after step t; hidden[0] = h0
  std::vector<std::vector<double>> probs;  // softmax per step
};

std::vector<double> softmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

std::vector<double> step_logits(const PolicyParams& params, const std::vector<double>& h_prev,
                                const std::vector<double>& context, int prev_token,
                                std::vector<double>& h_out) {
  const int d = params.dim;
  const double* w_in = params.data.data() + params.w_in_off();
  const double* w_rec = params.data.data() + params.w_rec_off();
  const double* bias = params.data.data() + params.bias_off();
  const double* w_out = params.data.data() + params.w_out_off();
  const auto emb = params.embedding(prev_token);

  h_out.assign(static_cast<size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    double z = bias[i];
    const double* row = w_in + static_cast<size_t>(i) * 2 * d;
    for (int j = 0; j < d; ++j) z += row[j] * emb[static_cast<size_t>(j)];
    for (int j = 0; j < d; ++j) z += row[d + j] * context[static_cast<size_t>(j)];
    const double* rrow = w_rec + static_cast<size_t>(i) * d;
    for (int j = 0; j < d; ++j) z += rrow[j] * h_prev[static_cast<size_t>(j)];
    h_out[static_cast<size_t>(i)] = std::tanh(z);
  }
  std::vector<double> logits(static_cast<size_t>(params.vocab_size), 0.0);
  for (int v = 0; v < params.vocab_size; ++v) {
    const double* row = w_out + static_cast<size_t>(v) * d;
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += row[j] * h_out[static_cast<size_t>(j)];
    logits[static_cast<size_t>(v)] = s;
  }
  return logits;
}

// Runs the decoder over `targets`, filling the trace and returning the
// negative log-likelihood.
double forward(const PolicyParams& params, std::span<const int> article,
               std::span<const int> targets, Trace& trace) {
  trace.context = encode(params, article);
  trace.hidden.clear();
  trace.hidden.push_back(std::vector<double>(static_cast<size_t>(params.dim), 0.0));
  trace.prev_tokens.clear();
  trace.probs.clear();
  double nll = 0.0;
  // Degenerate vocabularies smaller than the reserved range start from id 0.
  int prev = Vocab::kBos < params.vocab_size ? Vocab::kBos : 0;
  for (int target : targets) {
    check_token(params, target, "forward");
    check_token(params, prev, "forward");
    std::vector<double> h;
    std::vector<double> logits = step_logits(params, trace.hidden.back(), trace.context, prev, h);
    std::vector<double> p = softmax(logits);
    nll -= std::log(p[static_cast<size_t>(target)]);
    trace.prev_tokens.push_back(prev);
    trace.hidden.push_back(std::move(h));
    trace.probs.push_back(std::move(p));
    prev = target;
  }
  return nll;
}

// Exact backpropagation through the softmax, the tanh recurrence, and the
// mean encoder. `targets` must match the trace.
std::vector<double> backward(const PolicyParams& params, std::span<const int> article,
                             std::span<const int> targets, const Trace& trace) {
  const int d = params.dim;
  const size_t steps = targets.size();
  const double* w_in = params.data.data() + params.w_in_off();
  const double* w_rec = params.data.data() + params.w_rec_off();
  const double* w_out = params.data.data() + params.w_out_off();

  std::vector<double> grad(params.count(), 0.0);
  double* g_emb = grad.data() + params.embedding_off();
  double* g_w_in = grad.data() + params.w_in_off();
  double* g_w_rec = grad.data() + params.w_rec_off();
  double* g_bias = grad.data() + params.bias_off();
  double* g_w_out = grad.data() + params.w_out_off();

  std::vector<double> dh_next(static_cast<size_t>(d), 0.0);  // dL/dh via step t+1
  std::vector<double> dcontext(static_cast<size_t>(d), 0.0);
  std::vector<double> dz(static_cast<size_t>(d), 0.0);

  for (size_t t = steps; t-- > 0;) {
    const auto& p = trace.probs[t];
    const auto& h = trace.hidden[t + 1];
    const auto& h_prev = trace.hidden[t];
    const int prev_tok = trace.prev_tokens[t];
    const auto emb = params.embedding(prev_tok);

    // dlogits = p - onehot(target); dh = w_out^T dlogits + carry
    std::vector<double> dh = dh_next;
    for (int v = 0; v < params.vocab_size; ++v) {
      double dl = p[static_cast<size_t>(v)] - (v == targets[t] ? 1.0 : 0.0);
      const double* row = w_out + static_cast<size_t>(v) * d;
      double* grow = g_w_out + static_cast<size_t>(v) * d;
      for (int j = 0; j < d; ++j) {
        grow[j] += dl * h[static_cast<size_t>(j)];
        dh[static_cast<size_t>(j)] += dl * row[j];
      }
    }
    // Through tanh.
    for (int i = 0; i < d; ++i) {
      const double hi = h[static_cast<size_t>(i)];
      dz[static_cast<size_t>(i)] = dh[static_cast<size_t>(i)] * (1.0 - hi * hi);
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (int i = 0; i < d; ++i) {
      const double dzi = dz[static_cast<size_t>(i)];
      double* row = g_w_in + static_cast<size_t>(i) * 2 * d;
      for (int j = 0; j < d; ++j) {
        row[j] += dzi * emb[static_cast<size_t>(j)];
        row[d + j] += dzi * trace.context[static_cast<size_t>(j)];
      }
      const double* wrow = w_in + static_cast<size_t>(i) * 2 * d;
      double* e_row = g_emb + static_cast<size_t>(prev_tok) * d;
      for (int j = 0; j < d; ++j) {
        e_row[j] += dzi * wrow[j];
        dcontext[static_cast<size_t>(j)] += dzi * wrow[d + j];
      }
      double* rrow = g_w_rec + static_cast<size_t>(i) * d;
      const double* wrec_row = w_rec + static_cast<size_t>(i) * d;
      for (int j = 0; j < d; ++j) {
        rrow[j] += dzi * h_prev[static_cast<size_t>(j)];
        dh_next[static_cast<size_t>(j)] += dzi * wrec_row[j];
      }
      g_bias[i] += dzi;
    }
  }
  // Mean encoder: dc spreads evenly over the article's embeddings.
  const double inv_n = 1.0 / static_cast<double>(article.size());
  for (int tok : article) {
    double* e_row = g_emb + static_cast<size_t>(tok) * d;
    for (int j = 0; j < d; ++j) e_row[j] += dcontext[static_cast<size_t>(j)] * inv_n;
  }
  return grad;
}

}  // namespace

PolicyParams PolicyParams::init(int vocab_size, int dim, uint64_t seed) {
  if (vocab_size < 1 || dim < 1) {
    throw std::invalid_argument("PolicyParams::init: dimensions must be positive");
  }
  PolicyParams p;
  p.vocab_size = vocab_size;
  p.dim = dim;
  const size_t n = static_cast<size_t>(vocab_size) * dim * 2 +
                   static_cast<size_t>(dim) * 2 * dim + static_cast<size_t>(dim) * dim +
                   static_cast<size_t>(dim);
  p.data.resize(n);
  Rng rng(derive_seed(seed, "policy-init"));
  for (double& v : p.data) v = 0.1 * rng.next_gauss();
  return p;
}

std::vector<double> encode(const PolicyParams& params, std::span<const int> article) {
  if (article.empty()) throw std::invalid_argument("encode: empty article");
  std::vector<double> c(static_cast<size_t>(params.dim), 0.0);
  for (int tok : article) {
    check_token(params, tok, "encode");
    const auto emb = params.embedding(tok);
    for (int j = 0; j < params.dim; ++j) c[static_cast<size_t>(j)] += emb[static_cast<size_t>(j)];
  }
  const double inv = 1.0 / static_cast<double>(article.size());
  for (double& v : c) v *= inv;
  return c;
}

DecodeState initial_state(const PolicyParams& params, std::span<const int> article) {
  DecodeState s;
  s.hidden.assign(static_cast<size_t>(params.dim), 0.0);
  s.context = encode(params, article);
  s.step = 0;
  return s;
}

StepResult step(const PolicyParams& params, const DecodeState& state, int prev_token) {
  check_token(params, prev_token, "step");
  StepResult out;
  out.state.context = state.context;
  out.state.step = state.step + 1;
  out.logits = step_logits(params, state.hidden, state.context, prev_token, out.state.hidden);
  return out;
}

std::vector<double> log_softmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double v : logits) z += std::exp(v - m);
  const double logz = m + std::log(z);
  std::vector<double> out(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - logz;
  return out;
}

double log_prob(const PolicyParams& params, std::span<const int> article,
                std::span<const int> summary) {
  if (summary.empty() || summary.back() != Vocab::kEos) {
    throw std::invalid_argument("log_prob: summary must end with EOS");
  }
  Trace trace;
  return -forward(params, article, summary, trace);
}

SampleRecord sample(const PolicyParams& params, std::span<const int> article, int max_len,
                    Rng& rng) {
  if (max_len < 1) throw std::invalid_argument("sample: max_len must be >= 1");
  SampleRecord rec;
  DecodeState state = initial_state(params, article);
  int prev = Vocab::kBos;
  for (int t = 0; t < max_len; ++t) {
    StepResult r = step(params, state, prev);
    std::vector<double> logp = log_softmax(r.logits);
    // Inverse-CDF draw in probability space, fixed summation order.
    const double u = rng.next_double();
    double acc = 0.0;
    int pick = params.vocab_size - 1;
    for (int v = 0; v < params.vocab_size; ++v) {
      acc += std::exp(logp[static_cast<size_t>(v)]);
      if (u < acc) {
        pick = v;
        break;
      }
    }
    rec.logq += logp[static_cast<size_t>(pick)];
    state = std::move(r.state);
    if (pick == Vocab::kEos) return rec;
    rec.tokens.ids.push_back(pick);
    prev = pick;
  }
  // EOS forced at max_len: include its log-probability so logq is the exact
  // model probability of the returned sequence.
  StepResult r = step(params, state, prev);
  rec.logq += log_softmax(r.logits)[Vocab::kEos];
  return rec;
}

SampleRecord sample_fixed_length(const PolicyParams& params, std::span<const int> article,
                                 int len, Rng& rng) {
  if (len < 1) throw std::invalid_argument("sample_fixed_length: len must be >= 1");
  if (params.vocab_size <= Vocab::kReserved) {
    throw std::invalid_argument("sample_fixed_length: no content tokens");
  }
  SampleRecord rec;
  DecodeState state = initial_state(params, article);
  int prev = Vocab::kBos;
  for (int t = 0; t < len; ++t) {
    StepResult r = step(params, state, prev);
    std::vector<double> logp = log_softmax(r.logits);
    double mass = 0.0;
    for (int v = Vocab::kReserved; v < params.vocab_size; ++v) {
      mass += std::exp(logp[static_cast<size_t>(v)]);
    }
    const double u = rng.next_double() * mass;
    double acc = 0.0;
    int pick = params.vocab_size - 1;
    for (int v = Vocab::kReserved; v < params.vocab_size; ++v) {
      acc += std::exp(logp[static_cast<size_t>(v)]);
      if (u < acc) {
        pick = v;
        break;
      }
    }
    rec.logq += logp[static_cast<size_t>(pick)] - std::log(mass);
    rec.tokens.ids.push_back(pick);
    state = std::move(r.state);
    prev = pick;
  }
  return rec;
}

std::vector<int> greedy(const PolicyParams& params, std::span<const int> article, int max_len) {
  if (max_len < 1) throw std::invalid_argument("greedy: max_len must be >= 1");
  std::vector<int> out;
  DecodeState state = initial_state(params, article);
  int prev = Vocab::kBos;
  for (int t = 0; t < max_len; ++t) {
    StepResult r = step(params, state, prev);
    int best = 0;
    for (int v = 1; v < params.vocab_size; ++v) {
      if (r.logits[static_cast<size_t>(v)] > r.logits[static_cast<size_t>(best)]) best = v;
    }
    if (best == Vocab::kEos) break;
    out.push_back(best);
    state = std::move(r.state);
    prev = best;
  }
  return out;
}

NllResult nll_grad(const PolicyParams& params, std::span<const int> article,
                   std::span<const int> targets) {
  Trace trace;
  NllResult out;
  out.loss = forward(params, article, targets, trace);
  out.grad = backward(params, article, targets, trace);
  return out;
}

NllResult mle_grad(const PolicyParams& params, std::span<const int> article,
                   std::span<const int> reference) {
  if (reference.empty()) throw std::invalid_argument("mle_grad: empty reference");
  std::vector<int> targets(reference.begin(), reference.end());
  targets.push_back(Vocab::kEos);
  return nll_grad(params, article, targets);
}

std::vector<double> pg_grad(const PolicyParams& params, std::span<const int> article,
                            const SampleRecord& sampled, double advantage) {
  if (advantage == 0.0) return std::vector<double>(params.count(), 0.0);
  std::vector<int> targets = sampled.tokens.ids;
  targets.push_back(Vocab::kEos);
  NllResult nll = nll_grad(params, article, targets);
  for (double& g : nll.grad) g *= advantage;
  return nll.grad;
}

PolicyParams apply_grads(const PolicyParams& params, std::span<const double> grad, double lr) {
  if (lr <= 0.0) throw std::invalid_argument("apply_grads: learning rate must be positive");
  if (grad.size() != params.count()) throw std::invalid_argument("apply_grads: shape mismatch");
  PolicyParams out = params;
  for (size_t i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i])) throw std::invalid_argument("apply_grads: non-finite gradient");
    out.data[i] -= lr * grad[i];
  }
  return out;
}

}  // namespace irlsum
