#pragma once

#include <optional>
#include <string>

#include "irlsum/corpus.hpp"
#include "irlsum/policy.hpp"
#include "irlsum/reward.hpp"

namespace irlsum {

// A trained policy together with the vocabulary it was trained against and,
// after IRL training, the learned reward weights.
struct ModelState {
  PolicyParams params;
  Vocab vocab;
  std::optional<RewardWeights> phi;
};

// JSON checkpoint: dims, vocab (tokens plus content hash), parameter arrays
// as nested lists of decimals, phi when present. load(save(m)) is
// bit-identical; the vocab hash is rechecked on load.
std::string checkpoint_json(const ModelState& model);
void save_checkpoint(const ModelState& model, const std::string& path);
ModelState load_checkpoint(const std::string& path);

}  // namespace irlsum
