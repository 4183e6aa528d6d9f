#include "irlsum/reward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irlsum {

double reward(const RewardWeights& phi, const ComponentVector& comps) {
  const auto c = comps.as_array();
  double r = 0.0;
  for (int k = 0; k < 4; ++k) r += phi.phi[static_cast<size_t>(k)] * c[static_cast<size_t>(k)];
  return r;
}

ImportanceBatch beta_weights(std::vector<SampleRecord> records, const RewardWeights& phi) {
  if (records.empty()) throw std::invalid_argument("beta_weights: no records");
  std::vector<double> u(records.size());
  for (size_t m = 0; m < records.size(); ++m) {
    if (!std::isfinite(records[m].logq)) {
      throw std::invalid_argument("beta_weights: non-finite log q");
    }
    u[m] = reward(phi, records[m].comps) - records[m].logq;
  }
  const double umax = *std::max_element(u.begin(), u.end());
  double z = 0.0;
  for (double& v : u) {
    v = std::exp(v - umax);
    z += v;
  }
  ImportanceBatch out;
  out.records = std::move(records);
  out.betas.resize(u.size());
  for (size_t m = 0; m < u.size(); ++m) out.betas[m] = u[m] / z;
  return out;
}

IrlMeans irl_means(const std::vector<ComponentVector>& data_comps, const ImportanceBatch& batch) {
  if (data_comps.empty()) throw std::invalid_argument("irl_means: no demonstrations");
  if (batch.records.empty() || batch.betas.size() != batch.records.size()) {
    throw std::invalid_argument("irl_means: empty or inconsistent importance batch");
  }
  IrlMeans out;
  for (const auto& c : data_comps) {
    const auto a = c.as_array();
    for (size_t k = 0; k < 4; ++k) out.data[k] += a[k];
  }
  for (size_t k = 0; k < 4; ++k) out.data[k] /= static_cast<double>(data_comps.size());
  for (size_t m = 0; m < batch.records.size(); ++m) {
    const auto a = batch.records[m].comps.as_array();
    for (size_t k = 0; k < 4; ++k) out.model[k] += batch.betas[m] * a[k];
  }
  return out;
}

std::array<double, 4> irl_gradient(const std::vector<ComponentVector>& data_comps,
                                   const ImportanceBatch& batch) {
  const IrlMeans means = irl_means(data_comps, batch);
  std::array<double, 4> grad{};
  for (size_t k = 0; k < 4; ++k) grad[k] = means.data[k] - means.model[k];
  return grad;
}

RewardWeights reward_update(const RewardWeights& phi, const std::array<double, 4>& grad,
                            double lr) {
  if (lr <= 0.0) throw std::invalid_argument("reward_update: learning rate must be positive");
  RewardWeights out = phi;
  for (size_t k = 0; k < 4; ++k) {
    if (!std::isfinite(grad[k])) throw std::invalid_argument("reward_update: non-finite gradient");
    out.phi[k] += lr * grad[k];
  }
  return out;
}

std::array<double, 4> exact_gradient_enumeration(const RewardWeights& phi,
                                                 const TokenSeq& article,
                                                 const TokenSeq& reference, int max_len,
                                                 const Vocab& vocab, int novelty_order) {
  if (max_len < 1) throw std::invalid_argument("exact_gradient_enumeration: max_len must be >= 1");
  const int content = vocab.size() - Vocab::kReserved;
  if (content < 1) throw std::invalid_argument("exact_gradient_enumeration: no content tokens");
  double space = 1.0;
  for (int t = 0; t < max_len; ++t) {
    space *= content;
    if (space > 1e5) {
      throw std::invalid_argument("exact_gradient_enumeration: sequence space too large");
    }
  }

  // Odometer over content-token ids, sequences of exactly max_len.
  std::vector<int> ids(static_cast<size_t>(max_len), Vocab::kReserved);
  std::vector<double> rewards;
  std::vector<ComponentVector> comps;
  rewards.reserve(static_cast<size_t>(space));
  comps.reserve(static_cast<size_t>(space));
  bool done = false;
  while (!done) {
    TokenSeq y = vocab.decode(ids);
    ComponentVector c = components(y.surf(), article.surf(), reference.surf(), novelty_order);
    comps.push_back(c);
    rewards.push_back(reward(phi, c));
    int pos = max_len - 1;
    while (pos >= 0) {
      if (++ids[static_cast<size_t>(pos)] < vocab.size()) break;
      ids[static_cast<size_t>(pos)] = Vocab::kReserved;
      --pos;
    }
    done = pos < 0;
  }

  const double rmax = *std::max_element(rewards.begin(), rewards.end());
  double z = 0.0;
  for (double r : rewards) z += std::exp(r - rmax);
  std::array<double, 4> expectation{};
  for (size_t i = 0; i < comps.size(); ++i) {
    const double p = std::exp(rewards[i] - rmax) / z;
    const auto a = comps[i].as_array();
    for (size_t k = 0; k < 4; ++k) expectation[k] += p * a[k];
  }

  const auto demo =
      components(reference.surf(), article.surf(), reference.surf(), novelty_order).as_array();
  std::array<double, 4> grad{};
  for (size_t k = 0; k < 4; ++k) grad[k] = demo[k] - expectation[k];
  return grad;
}

}  // namespace irlsum
