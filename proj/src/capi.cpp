#include "irlsum.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "irlsum/checkpoint.hpp"
#include "irlsum/corpus.hpp"
#include "irlsum/report.hpp"
#include "irlsum/trainer.hpp"
#include "irlsum/util.hpp"

namespace {

thread_local std::string last_error;

irlsum_status fail(irlsum_status code, const std::string& message) {
  last_error = message;
  return code;
}

template <typename Fn>
irlsum_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(IRLSUM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(IRLSUM_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(IRLSUM_ERR_INTERNAL, e.what());
  }
}

irlsum_status require(bool ok, const char* what) {
  return ok ? IRLSUM_OK : fail(IRLSUM_ERR_INVALID_ARGUMENT, what);
}

}  // namespace

struct irlsum_corpus {
  std::vector<irlsum::ExamplePair> pairs;
};

struct irlsum_config {
  irlsum::TrainConfig cfg;
};

struct irlsum_model {
  irlsum::ModelState state;
};

struct irlsum_trajectory {
  irlsum::WeightTrajectory traj;
};

struct irlsum_report {
  const irlsum_corpus* corpus = nullptr;
  irlsum::TrainConfig cfg;
  std::vector<std::pair<std::string, irlsum::SystemSummaries>> systems;
  std::vector<std::pair<std::string, std::vector<std::string>>> raw_summaries;
  std::string vocab_hash;  // all models in one report must agree
};

extern "C" {

const char* irlsum_version(void) { return "0.1.0"; }

const char* irlsum_last_error(void) { return last_error.c_str(); }

void irlsum_string_free(char* s) { delete[] s; }

irlsum_status irlsum_corpus_generate(const char* strategy, int pairs, int min_sentences,
                                     int max_sentences, double paraphrase_rate, uint64_t seed,
                                     irlsum_corpus** out) {
  if (auto st = require(strategy && out, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    irlsum::SyntheticSpec spec;
    spec.strategy = irlsum::parse_strategy(strategy);
    spec.pairs = pairs;
    spec.min_sentences = min_sentences;
    spec.max_sentences = max_sentences;
    spec.paraphrase_rate = paraphrase_rate;
    spec.seed = seed;
    auto* c = new irlsum_corpus{irlsum::gen_synthetic(spec)};
    *out = c;
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_corpus_load(const char* path, irlsum_corpus** out) {
  if (auto st = require(path && out, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    *out = new irlsum_corpus{irlsum::load_corpus(path)};
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_corpus_save(const irlsum_corpus* corpus, const char* path) {
  if (auto st = require(corpus && path, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    irlsum::save_corpus(corpus->pairs, path);
    return IRLSUM_OK;
  });
}

int irlsum_corpus_size(const irlsum_corpus* corpus) {
  return corpus ? static_cast<int>(corpus->pairs.size()) : 0;
}

irlsum_status irlsum_corpus_reference_means(const irlsum_corpus* corpus, int novelty_order,
                                            double out_means[4]) {
  if (auto st = require(corpus && out_means, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    const auto means = irlsum::reference_component_means(corpus->pairs, novelty_order);
    for (int k = 0; k < 4; ++k) out_means[k] = means[static_cast<size_t>(k)];
    return IRLSUM_OK;
  });
}

void irlsum_corpus_free(irlsum_corpus* corpus) { delete corpus; }

irlsum_status irlsum_config_create(const char* preset, irlsum_config** out) {
  if (auto st = require(preset && out, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    *out = new irlsum_config{irlsum::preset_config(preset)};
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_config_load_file(irlsum_config* cfg, const char* path) {
  if (auto st = require(cfg && path, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    irlsum::config_load_file(cfg->cfg, path);
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_config_set(irlsum_config* cfg, const char* key, const char* value) {
  if (auto st = require(cfg && key && value, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    irlsum::config_apply_json(cfg->cfg, std::string("{\"") + key + "\": " + value + "}");
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_config_to_json(const irlsum_config* cfg, char** out_json) {
  if (auto st = require(cfg && out_json, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    const std::string text = irlsum::config_json(cfg->cfg);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_json = buf;
    return IRLSUM_OK;
  });
}

void irlsum_config_free(irlsum_config* cfg) { delete cfg; }

irlsum_status irlsum_train_mle(const irlsum_corpus* corpus, const irlsum_config* cfg,
                               irlsum_model** out) {
  if (auto st = require(corpus && cfg && out, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    irlsum::MleResult result = irlsum::pretrain_mle(corpus->pairs, cfg->cfg);
    *out = new irlsum_model{std::move(result.model)};
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_train_rl(const irlsum_model* pretrained, const irlsum_corpus* corpus,
                              const irlsum_config* cfg, irlsum_model** out) {
  if (auto st = require(pretrained && corpus && cfg && out, "null argument"); st != IRLSUM_OK) {
    return st;
  }
  return guarded([&] {
    *out = new irlsum_model{irlsum::train_rl(pretrained->state, corpus->pairs, cfg->cfg)};
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_train_irl(const irlsum_model* pretrained, const irlsum_corpus* corpus,
                               const irlsum_config* cfg, irlsum_model** out,
                               irlsum_trajectory** out_trajectory) {
  if (auto st = require(pretrained && corpus && cfg && out && out_trajectory, "null argument");
      st != IRLSUM_OK) {
    return st;
  }
  return guarded([&] {
    irlsum::IrlResult result = irlsum::train_irl(pretrained->state, irlsum::RewardWeights::uniform(),
                                                 corpus->pairs, cfg->cfg);
    *out = new irlsum_model{std::move(result.model)};
    *out_trajectory = new irlsum_trajectory{std::move(result.trajectory)};
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_model_save(const irlsum_model* model, const char* path) {
  if (auto st = require(model && path, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    irlsum::save_checkpoint(model->state, path);
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_model_load(const char* path, irlsum_model** out) {
  if (auto st = require(path && out, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    *out = new irlsum_model{irlsum::load_checkpoint(path)};
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_model_vocab_hash(const irlsum_model* model, char out_hex[17]) {
  if (auto st = require(model && out_hex, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(model->state.vocab.content_hash()));
    std::memcpy(out_hex, buf, 17);
    return IRLSUM_OK;
  });
}

void irlsum_model_free(irlsum_model* model) { delete model; }

irlsum_status irlsum_trajectory_save_csv(const irlsum_trajectory* traj, const char* path) {
  if (auto st = require(traj && path, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    irlsum::save_trajectory_csv(traj->traj, path);
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_trajectory_load_csv(const char* path, irlsum_trajectory** out) {
  if (auto st = require(path && out, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    *out = new irlsum_trajectory{irlsum::load_trajectory_csv(path)};
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_trajectory_save_svg(const irlsum_trajectory* traj, const char* path) {
  if (auto st = require(traj && path, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(std::string("cannot write file: ") + path);
    out << irlsum::weight_curves_svg(traj->traj);
    if (!out) throw std::runtime_error(std::string("write failed: ") + path);
    return IRLSUM_OK;
  });
}

void irlsum_trajectory_free(irlsum_trajectory* traj) { delete traj; }

irlsum_status irlsum_report_create(const irlsum_corpus* corpus, const irlsum_config* cfg,
                                   irlsum_report** out) {
  if (auto st = require(corpus && cfg && out, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    auto* r = new irlsum_report;
    r->corpus = corpus;
    r->cfg = cfg->cfg;
    *out = r;
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_report_add_reference(irlsum_report* report, const char* name) {
  if (auto st = require(report && name, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    irlsum::SystemSummaries summaries;
    std::vector<std::string> raws;
    for (const auto& pair : report->corpus->pairs) {
      summaries.push_back(pair.reference);
      raws.push_back(pair.reference_raw);
    }
    report->systems.emplace_back(name, std::move(summaries));
    report->raw_summaries.emplace_back(name, std::move(raws));
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_report_add_model(irlsum_report* report, const char* name,
                                      const irlsum_model* model) {
  if (auto st = require(report && name && model, "null argument"); st != IRLSUM_OK) return st;
  char hash[17];
  if (auto st = irlsum_model_vocab_hash(model, hash); st != IRLSUM_OK) return st;
  if (report->vocab_hash.empty()) {
    report->vocab_hash = hash;
  } else if (report->vocab_hash != hash) {
    return fail(IRLSUM_ERR_STATE, "vocab hash mismatch between checkpoints in one report");
  }
  return guarded([&] {
    const auto& state = model->state;
    const auto& pairs = report->corpus->pairs;
    irlsum::SystemSummaries summaries(pairs.size());
    std::vector<std::string> raws(pairs.size());
    irlsum::parallel_for(pairs.size(), report->cfg.workers, [&](size_t i) {
      const std::vector<int> article = state.vocab.encoded(pairs[i].article).ids;
      const std::vector<int> ids =
          irlsum::greedy(state.params, article, report->cfg.max_decode_len);
      irlsum::TokenSeq decoded = state.vocab.decode(ids);
      std::string raw;
      for (const auto& tok : decoded.surface) {
        if (!raw.empty()) raw += " ";
        raw += tok;
      }
      summaries[i] = std::move(decoded);
      raws[i] = std::move(raw);
    });
    report->systems.emplace_back(name, std::move(summaries));
    report->raw_summaries.emplace_back(name, std::move(raws));
    return IRLSUM_OK;
  });
}

irlsum_status irlsum_report_write(const irlsum_report* report, const char* out_dir,
                                  const char* suffix) {
  if (auto st = require(report && out_dir && suffix, "null argument"); st != IRLSUM_OK) return st;
  if (report->systems.empty()) return fail(IRLSUM_ERR_STATE, "report has no systems");
  return guarded([&] {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::string base = std::string(out_dir) + "/";
    const std::string tail = std::string(suffix).empty() ? "" : "_" + std::string(suffix);

    irlsum::ComponentTable table = irlsum::component_table(report->systems, report->corpus->pairs,
                                                           report->cfg.novelty_order);
    irlsum::write_component_table_csv(table, base + "component_table" + tail + ".csv");

    std::vector<std::pair<std::string, std::vector<double>>> profiles;
    for (const auto& [name, summaries] : report->systems) {
      profiles.emplace_back(name,
                            irlsum::novel_ngram_profile(summaries, report->corpus->pairs, 4));
    }
    irlsum::write_novelty_profile_csv(profiles, base + "novelty_profile" + tail + ".csv");

    std::vector<irlsum::EntityStats> stats;
    for (const auto& [name, raws] : report->raw_summaries) {
      stats.push_back(irlsum::entity_stats(name, raws, report->corpus->pairs));
    }
    irlsum::write_entity_stats_csv(stats, base + "entity_stats" + tail + ".csv");
    return IRLSUM_OK;
  });
}

void irlsum_report_free(irlsum_report* report) { delete report; }

irlsum_status irlsum_file_hash(const char* path, char out_hex[17]) {
  if (auto st = require(path && out_hex, "null argument"); st != IRLSUM_OK) return st;
  return guarded([&] {
    const std::string hex = irlsum::file_hash_hex(path);
    std::memcpy(out_hex, hex.c_str(), 17);
    return IRLSUM_OK;
  });
}

}  // extern "C"
