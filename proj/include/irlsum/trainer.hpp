#pragma once

#include <array>
#include <string>
#include <vector>

#include "irlsum/checkpoint.hpp"
#include "irlsum/corpus.hpp"
#include "irlsum/policy.hpp"
#include "irlsum/reward.hpp"

namespace irlsum {

// Hyperparameters for all three regimes. Defaults are the reported
// full-scale values; the desk-scale preset swaps in learning rates sized for
// the compact policy (1e-6 would freeze a few-thousand-parameter model).
struct TrainConfig {
  double policy_lr = 1e-6;        // alpha, the RL/IRL policy step size
  double mle_lr = 5e-5;           // MLE pretraining step size
  double reward_lr = 0.05;        // beta
  int epochs = 20;                // H
  int reward_update_frequency = 1;  // F
  int demos_per_update = 100;     // N
  int samples_per_update = 100;   // M
  double mix_gamma = 0.0016;      // gamma of the mixed loss
  int pg_samples = 1;             // rollouts per example in the RL/IRL loss
  int novelty_order = 2;
  int max_decode_len = 24;
  int batch_size = 8;
  uint64_t seed = 0;
  int max_examples = 0;           // 0 = use the whole corpus
  int dim = 16;
  int max_vocab = 256;
  double val_fraction = 0.1;
  int workers = 1;

  void validate() const;
};

// Named presets: "paper-scale" records the reported hyperparameters;
// "desk-scale" overrides the learning rate for the compact policy.
TrainConfig preset_config(const std::string& name);

// Flat-key JSON <-> config. Loading overlays only the keys present in the
// file; unknown keys are an error.
void config_apply_json(TrainConfig& cfg, const std::string& json_text);
void config_load_file(TrainConfig& cfg, const std::string& path);
std::string config_json(const TrainConfig& cfg);

// One reward update: phi after the step plus everything that produced it.
struct RewardSnapshot {
  int update = 0;
  RewardWeights phi;
  std::array<double, 4> grad{};
  std::array<double, 4> data_mean{};
  std::array<double, 4> model_mean{};
};

struct WeightTrajectory {
  RewardWeights initial;  // uniform at the start of IRL training
  std::vector<RewardSnapshot> snapshots;
};

std::string trajectory_csv(const WeightTrajectory& traj);
void save_trajectory_csv(const WeightTrajectory& traj, const std::string& path);
// The CSV holds one row per reward update; the initial weights are the
// documented uniform initialization.
WeightTrajectory load_trajectory_csv(const std::string& path);

struct MleResult {
  ModelState model;
  std::vector<double> epoch_loss;      // mean per-example NLL per epoch
  std::vector<double> val_rouge;       // greedy ROUGE-L on the validation split
};

struct IrlResult {
  ModelState model;  // params after the last epoch, phi attached
  WeightTrajectory trajectory;
};

// Shuffled mini-batch MLE; returns the epoch checkpoint with the best
// validation ROUGE-L.
MleResult pretrain_mle(const std::vector<ExamplePair>& corpus, const TrainConfig& cfg);

// Self-critical policy gradient with the reward fixed to ROUGE-L against the
// reference, mixed with the MLE term.
ModelState train_rl(const ModelState& pretrained, const std::vector<ExamplePair>& corpus,
                    const TrainConfig& cfg);

// Alternating reward/policy updates: at the start of each epoch h with
// h % F == 0, N fresh demonstration components and M fresh policy samples
// produce one importance-sampled gradient step on phi; the reward is then
// frozen for that epoch's policy updates.
IrlResult train_irl(const ModelState& pretrained, const RewardWeights& phi0,
                    const std::vector<ExamplePair>& corpus, const TrainConfig& cfg);

// reward(phi, sample) - reward(phi, greedy).
double advantage(const ComponentVector& sample_comps, const ComponentVector& greedy_comps,
                 const RewardWeights& phi);

// (1 - gamma) * pg_grad + gamma * mle_grad, element-wise.
std::vector<double> mixed_loss_grad(const PolicyParams& params, std::span<const int> article,
                                    std::span<const int> reference, const SampleRecord& sampled,
                                    double adv, double gamma);

// Mean components of the references themselves (the demonstration side of
// the component table; exact ground truth on synthetic corpora).
std::array<double, 4> reference_component_means(const std::vector<ExamplePair>& corpus,
                                                int novelty_order);

}  // namespace irlsum
