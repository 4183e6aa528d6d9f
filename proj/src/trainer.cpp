#include "irlsum/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "irlsum/metrics.hpp"
#include "irlsum/rng.hpp"
#include "irlsum/util.hpp"
#include "json.hpp"

namespace irlsum {

void TrainConfig::validate() const {
  if (policy_lr <= 0.0) throw std::invalid_argument("config: policy_lr must be positive");
  if (mle_lr <= 0.0) throw std::invalid_argument("config: mle_lr must be positive");
  if (reward_lr <= 0.0) throw std::invalid_argument("config: reward_lr must be positive");
  if (epochs < 1) throw std::invalid_argument("config: epochs must be positive");
  if (reward_update_frequency < 1) {
    throw std::invalid_argument("config: reward_update_frequency must be positive");
  }
  if (demos_per_update < 1) throw std::invalid_argument("config: demos_per_update must be positive");
  if (samples_per_update < 1) {
    throw std::invalid_argument("config: samples_per_update must be positive");
  }
  if (mix_gamma < 0.0 || mix_gamma > 1.0) {
    throw std::invalid_argument("config: mix_gamma must be in [0,1]");
  }
  if (pg_samples < 1) throw std::invalid_argument("config: pg_samples must be >= 1");
  if (novelty_order < 1) throw std::invalid_argument("config: novelty_order must be >= 1");
  if (max_decode_len < 1) throw std::invalid_argument("config: max_decode_len must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
  if (max_examples < 0) throw std::invalid_argument("config: max_examples must be >= 0");
  if (dim < 1) throw std::invalid_argument("config: dim must be >= 1");
  if (max_vocab < 5) throw std::invalid_argument("config: max_vocab must be >= 5");
  if (val_fraction < 0.0 || val_fraction >= 1.0) {
    throw std::invalid_argument("config: val_fraction must be in [0,1)");
  }
  if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
}

TrainConfig preset_config(const std::string& name) {
  TrainConfig cfg;  // defaults are the paper-scale values
  if (name == "paper-scale") {
    cfg.max_examples = 10000;
    return cfg;
  }
  if (name == "desk-scale") {
    // 1e-6 targets a 140M-parameter model and freezes this one; even 1e-3
    // leaves greedy decodes untouched across a full run. These rates are the
    // smallest that move the compact policy measurably in 20 epochs.
    cfg.policy_lr = 0.08;
    cfg.mle_lr = 0.05;
    cfg.reward_lr = 0.05;
    cfg.batch_size = 4;
    cfg.dim = 16;
    cfg.max_vocab = 256;
    return cfg;
  }
  throw std::invalid_argument("unknown preset: " + name + " (expected paper-scale or desk-scale)");
}

namespace {

template <typename T>
void assign_key(const nlohmann::json& j, const std::string& key, T& field) {
  field = j.at(key).get<T>();
}

}  // namespace

void config_apply_json(TrainConfig& cfg, const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("config: malformed JSON");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key == "policy_lr") assign_key(j, key, cfg.policy_lr);
    else if (key == "mle_lr") assign_key(j, key, cfg.mle_lr);
    else if (key == "reward_lr") assign_key(j, key, cfg.reward_lr);
    else if (key == "epochs") assign_key(j, key, cfg.epochs);
    else if (key == "reward_update_frequency") assign_key(j, key, cfg.reward_update_frequency);
    else if (key == "demos_per_update") assign_key(j, key, cfg.demos_per_update);
    else if (key == "samples_per_update") assign_key(j, key, cfg.samples_per_update);
    else if (key == "mix_gamma") assign_key(j, key, cfg.mix_gamma);
    else if (key == "pg_samples") assign_key(j, key, cfg.pg_samples);
    else if (key == "novelty_order") assign_key(j, key, cfg.novelty_order);
    else if (key == "max_decode_len") assign_key(j, key, cfg.max_decode_len);
    else if (key == "batch_size") assign_key(j, key, cfg.batch_size);
    else if (key == "seed") assign_key(j, key, cfg.seed);
    else if (key == "max_examples") assign_key(j, key, cfg.max_examples);
    else if (key == "dim") assign_key(j, key, cfg.dim);
    else if (key == "max_vocab") assign_key(j, key, cfg.max_vocab);
    else if (key == "val_fraction") assign_key(j, key, cfg.val_fraction);
    else if (key == "workers") assign_key(j, key, cfg.workers);
    else throw std::runtime_error("config: unknown key \"" + key + "\"");
  }
}

void config_load_file(TrainConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  config_apply_json(cfg, buf.str());
}

std::string config_json(const TrainConfig& cfg) {
  nlohmann::json j;
  j["policy_lr"] = cfg.policy_lr;
  j["mle_lr"] = cfg.mle_lr;
  j["reward_lr"] = cfg.reward_lr;
  j["epochs"] = cfg.epochs;
  j["reward_update_frequency"] = cfg.reward_update_frequency;
  j["demos_per_update"] = cfg.demos_per_update;
  j["samples_per_update"] = cfg.samples_per_update;
  j["mix_gamma"] = cfg.mix_gamma;
  j["pg_samples"] = cfg.pg_samples;
  j["novelty_order"] = cfg.novelty_order;
  j["max_decode_len"] = cfg.max_decode_len;
  j["batch_size"] = cfg.batch_size;
  j["seed"] = cfg.seed;
  j["max_examples"] = cfg.max_examples;
  j["dim"] = cfg.dim;
  j["max_vocab"] = cfg.max_vocab;
  j["val_fraction"] = cfg.val_fraction;
  j["workers"] = cfg.workers;
  return j.dump(1);
}

namespace {

const char* kTrajectoryHeader =
    "update,phi_rouge,phi_nov,phi_cov,phi_comp,"
    "grad_rouge,grad_nov,grad_cov,grad_comp,"
    "data_mean_rouge,data_mean_nov,data_mean_cov,data_mean_comp,"
    "model_mean_rouge,model_mean_nov,model_mean_cov,model_mean_comp";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

}  // namespace

std::string trajectory_csv(const WeightTrajectory& traj) {
  std::string out = kTrajectoryHeader;
  out += "\n";
  for (const auto& s : traj.snapshots) {
    out += std::to_string(s.update);
    for (double v : s.phi.phi) out += "," + format_double(v);
    for (double v : s.grad) out += "," + format_double(v);
    for (double v : s.data_mean) out += "," + format_double(v);
    for (double v : s.model_mean) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

void save_trajectory_csv(const WeightTrajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trajectory: " + path);
  out << trajectory_csv(traj);
  if (!out) throw std::runtime_error("write failed: " + path);
}

WeightTrajectory load_trajectory_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trajectory: " + path);
  WeightTrajectory traj;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trajectory: empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrajectoryHeader) throw std::runtime_error("trajectory: unexpected header");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 17) throw std::runtime_error("trajectory: bad row");
    RewardSnapshot s;
    s.update = std::stoi(fields[0]);
    for (size_t k = 0; k < 4; ++k) s.phi.phi[k] = parse_double(fields[1 + k]);
    for (size_t k = 0; k < 4; ++k) s.grad[k] = parse_double(fields[5 + k]);
    for (size_t k = 0; k < 4; ++k) s.data_mean[k] = parse_double(fields[9 + k]);
    for (size_t k = 0; k < 4; ++k) s.model_mean[k] = parse_double(fields[13 + k]);
    traj.snapshots.push_back(s);
  }
  return traj;
}

double advantage(const ComponentVector& sample_comps, const ComponentVector& greedy_comps,
                 const RewardWeights& phi) {
  return reward(phi, sample_comps) - reward(phi, greedy_comps);
}

std::vector<double> mixed_loss_grad(const PolicyParams& params, std::span<const int> article,
                                    std::span<const int> reference, const SampleRecord& sampled,
                                    double adv, double gamma) {
  std::vector<double> grad = pg_grad(params, article, sampled, adv);
  if (gamma == 0.0) return grad;
  NllResult mle = mle_grad(params, article, reference);
  for (size_t i = 0; i < grad.size(); ++i) {
    grad[i] = (1.0 - gamma) * grad[i] + gamma * mle.grad[i];
  }
  return grad;
}

std::array<double, 4> reference_component_means(const std::vector<ExamplePair>& corpus,
                                                int novelty_order) {
  if (corpus.empty()) throw std::invalid_argument("reference_component_means: empty corpus");
  std::array<double, 4> sum{};
  for (const auto& p : corpus) {
    const auto c =
        components(p.reference.surf(), p.article.surf(), p.reference.surf(), novelty_order)
            .as_array();
    for (size_t k = 0; k < 4; ++k) sum[k] += c[k];
  }
  for (auto& v : sum) v /= static_cast<double>(corpus.size());
  return sum;
}

namespace {

struct EncodedPair {
  std::vector<int> article;
  std::vector<int> reference;
};

struct Split {
  std::vector<ExamplePair> pairs;          // truncated working set
  std::vector<EncodedPair> encoded;        // ids under the model vocab
  std::vector<size_t> train;               // indices into pairs
  std::vector<size_t> val;
};

Split make_split(const std::vector<ExamplePair>& corpus, const Vocab& vocab,
                 const TrainConfig& cfg) {
  if (corpus.empty()) throw std::invalid_argument("training: empty corpus");
  Split s;
  size_t n = corpus.size();
  if (cfg.max_examples > 0) n = std::min(n, static_cast<size_t>(cfg.max_examples));
  s.pairs.assign(corpus.begin(), corpus.begin() + static_cast<long>(n));
  s.encoded.resize(n);
  for (size_t i = 0; i < n; ++i) {
    s.encoded[i].article = vocab.encoded(s.pairs[i].article).ids;
    s.encoded[i].reference = vocab.encoded(s.pairs[i].reference).ids;
    if (s.encoded[i].article.empty()) throw std::invalid_argument("training: empty article");
    if (s.encoded[i].reference.empty()) throw std::invalid_argument("training: empty reference");
  }
  size_t n_val = n >= 3 && cfg.val_fraction > 0.0
                     ? std::max<size_t>(1, static_cast<size_t>(cfg.val_fraction *
                                                               static_cast<double>(n)))
                     : 0;
  for (size_t i = 0; i < n - n_val; ++i) s.train.push_back(i);
  for (size_t i = n - n_val; i < n; ++i) s.val.push_back(i);
  if (s.val.empty()) s.val = s.train;  // tiny corpora validate on themselves
  return s;
}

double mean_val_rouge(const PolicyParams& params, const Vocab& vocab, const Split& split,
                      const TrainConfig& cfg) {
  std::vector<double> scores(split.val.size(), 0.0);
  parallel_for(split.val.size(), cfg.workers, [&](size_t i) {
    const size_t idx = split.val[i];
    std::vector<int> ids = greedy(params, split.encoded[idx].article, cfg.max_decode_len);
    TokenSeq decoded = vocab.decode(ids);
    scores[i] = rouge_l(decoded.surf(), split.pairs[idx].reference.surf());
  });
  double sum = 0.0;
  for (double v : scores) sum += v;
  return sum / static_cast<double>(scores.size());
}

// Mean of per-example gradients, accumulated in index order.
std::vector<double> mean_grads(std::vector<std::vector<double>>& grads) {
  std::vector<double> out(grads[0].size(), 0.0);
  for (const auto& g : grads) {
    for (size_t i = 0; i < out.size(); ++i) out[i] += g[i];
  }
  const double inv = 1.0 / static_cast<double>(grads.size());
  for (double& v : out) v *= inv;
  return out;
}

ComponentVector sample_components(const SampleRecord& rec, const Vocab& vocab,
                                  const ExamplePair& pair, int novelty_order) {
  TokenSeq decoded = vocab.decode(rec.tokens.ids);
  return components(decoded.surf(), pair.article.surf(), pair.reference.surf(), novelty_order);
}

}  // namespace

MleResult pretrain_mle(const std::vector<ExamplePair>& corpus, const TrainConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) throw std::invalid_argument("pretrain_mle: empty corpus");
  MleResult result;
  // The vocabulary covers only the examples that will actually be used.
  size_t n = corpus.size();
  if (cfg.max_examples > 0) n = std::min(n, static_cast<size_t>(cfg.max_examples));
  const std::vector<ExamplePair> working(corpus.begin(), corpus.begin() + static_cast<long>(n));
  Vocab vocab = build_vocab(working, cfg.max_vocab);
  Split split = make_split(working, vocab, cfg);
  PolicyParams params = PolicyParams::init(vocab.size(), cfg.dim, cfg.seed);

  PolicyParams best = params;
  double best_rouge = -1.0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<size_t> order = split.train;
    Rng shuffle_rng(derive_seed(cfg.seed, "mle-shuffle", static_cast<uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    double epoch_loss = 0.0;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg.batch_size)) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
      std::vector<std::vector<double>> grads(end - start);
      std::vector<double> losses(end - start, 0.0);
      parallel_for(end - start, cfg.workers, [&](size_t i) {
        const EncodedPair& ex = split.encoded[order[start + i]];
        NllResult r = mle_grad(params, ex.article, ex.reference);
        grads[i] = std::move(r.grad);
        losses[i] = r.loss;
      });
      for (double l : losses) epoch_loss += l;
      params = apply_grads(params, mean_grads(grads), cfg.mle_lr);
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(order.size()));

    const double vr = mean_val_rouge(params, vocab, split, cfg);
    result.val_rouge.push_back(vr);
    if (vr > best_rouge) {
      best_rouge = vr;
      best = params;
    }
  }
  result.model.params = std::move(best);
  result.model.vocab = std::move(vocab);
  return result;
}

namespace {

// Shared policy-update phase: sampled rollouts against the greedy baseline,
// advantage from the supplied reward, mixed gradient, one SGD step per
// mini-batch. With pg_samples > 1 the score-function term is averaged over
// several rollouts of the same example (same greedy baseline for all).
void policy_epoch(PolicyParams& params, const Vocab& vocab, const Split& split,
                  const TrainConfig& cfg, int epoch, const char* tag,
                  const std::function<double(const ComponentVector&, const ComponentVector&)>&
                      advantage_fn) {
  std::vector<size_t> order = split.train;
  Rng shuffle_rng(derive_seed(cfg.seed, std::string(tag) + "-shuffle",
                              static_cast<uint64_t>(epoch)));
  shuffle_rng.shuffle(order);

  for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg.batch_size)) {
    const size_t end = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
    std::vector<std::vector<double>> grads(end - start);
    parallel_for(end - start, cfg.workers, [&](size_t i) {
      const size_t idx = order[start + i];
      const EncodedPair& ex = split.encoded[idx];
      const ExamplePair& pair = split.pairs[idx];
      Rng rng(derive_seed(cfg.seed, std::string(tag) + "-rollout",
                          static_cast<uint64_t>(epoch), idx));
      std::vector<int> greedy_ids = greedy(params, ex.article, cfg.max_decode_len);
      TokenSeq greedy_decoded = vocab.decode(greedy_ids);
      ComponentVector greedy_comps = components(greedy_decoded.surf(), pair.article.surf(),
                                                pair.reference.surf(), cfg.novelty_order);
      std::vector<double> pg_sum;
      for (int k = 0; k < cfg.pg_samples; ++k) {
        SampleRecord rec = sample(params, ex.article, cfg.max_decode_len, rng);
        rec.comps = sample_components(rec, vocab, pair, cfg.novelty_order);
        const double adv = advantage_fn(rec.comps, greedy_comps);
        std::vector<double> g = pg_grad(params, ex.article, rec, adv);
        if (pg_sum.empty()) {
          pg_sum = std::move(g);
        } else {
          for (size_t j = 0; j < pg_sum.size(); ++j) pg_sum[j] += g[j];
        }
      }
      const double pg_scale = (1.0 - cfg.mix_gamma) / static_cast<double>(cfg.pg_samples);
      for (double& g : pg_sum) g *= pg_scale;
      if (cfg.mix_gamma > 0.0) {
        const NllResult mle = mle_grad(params, ex.article, ex.reference);
        for (size_t j = 0; j < pg_sum.size(); ++j) pg_sum[j] += cfg.mix_gamma * mle.grad[j];
      }
      grads[i] = std::move(pg_sum);
    });
    params = apply_grads(params, mean_grads(grads), cfg.policy_lr);
  }
}

}  // namespace

ModelState train_rl(const ModelState& pretrained, const std::vector<ExamplePair>& corpus,
                    const TrainConfig& cfg) {
  cfg.validate();
  ModelState model = pretrained;
  Split split = make_split(corpus, model.vocab, cfg);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    policy_epoch(model.params, model.vocab, split, cfg, epoch, "rl",
                 [](const ComponentVector& s, const ComponentVector& g) {
                   return s.rouge - g.rouge;
                 });
  }
  return model;
}

IrlResult train_irl(const ModelState& pretrained, const RewardWeights& phi0,
                    const std::vector<ExamplePair>& corpus, const TrainConfig& cfg) {
  cfg.validate();
  IrlResult result;
  result.model = pretrained;
  result.trajectory.initial = phi0;
  Split split = make_split(corpus, result.model.vocab, cfg);
  RewardWeights phi = phi0;
  int update_index = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (epoch % cfg.reward_update_frequency == 0) {
      ++update_index;
      // Demonstrations: a fresh seeded subset of the training references.
      std::vector<size_t> demo_order = split.train;
      Rng demo_rng(derive_seed(cfg.seed, "irl-demos", static_cast<uint64_t>(update_index)));
      demo_rng.shuffle(demo_order);
      const size_t n_demo =
          std::min(demo_order.size(), static_cast<size_t>(cfg.demos_per_update));
      std::vector<ComponentVector> demo_comps(n_demo);
      parallel_for(n_demo, cfg.workers, [&](size_t i) {
        const ExamplePair& pair = split.pairs[demo_order[i]];
        demo_comps[i] = components(pair.reference.surf(), pair.article.surf(),
                                   pair.reference.surf(), cfg.novelty_order);
      });

      // Model side: M fresh samples from the current policy.
      Rng pick_rng(derive_seed(cfg.seed, "irl-sample-pick", static_cast<uint64_t>(update_index)));
      std::vector<size_t> sample_pairs(static_cast<size_t>(cfg.samples_per_update));
      for (auto& idx : sample_pairs) {
        idx = split.train[pick_rng.next_below(split.train.size())];
      }
      std::vector<SampleRecord> records(sample_pairs.size());
      parallel_for(sample_pairs.size(), cfg.workers, [&](size_t m) {
        const size_t idx = sample_pairs[m];
        Rng rng(derive_seed(cfg.seed, "irl-rollout", static_cast<uint64_t>(update_index), m));
        SampleRecord rec =
            sample(result.model.params, split.encoded[idx].article, cfg.max_decode_len, rng);
        rec.comps = sample_components(rec, result.model.vocab, split.pairs[idx],
                                      cfg.novelty_order);
        records[m] = std::move(rec);
      });

      ImportanceBatch batch = beta_weights(std::move(records), phi);
      const IrlMeans means = irl_means(demo_comps, batch);
      const std::array<double, 4> grad = irl_gradient(demo_comps, batch);
      phi = reward_update(phi, grad, cfg.reward_lr);

      RewardSnapshot snap;
      snap.update = update_index;
      snap.phi = phi;
      snap.grad = grad;
      snap.data_mean = means.data;
      snap.model_mean = means.model;
      result.trajectory.snapshots.push_back(snap);
    }

    // Policy phase with the reward frozen at the current phi.
    const RewardWeights frozen = phi;
    policy_epoch(result.model.params, result.model.vocab, split, cfg, epoch, "irl",
                 [&frozen](const ComponentVector& s, const ComponentVector& g) {
                   return advantage(s, g, frozen);
                 });
  }

  result.model.phi = phi;
  return result;
}

}  // namespace irlsum
