// Command-line front end over the irlsum C API. Subcommands: gen-data,
// train-mle, train-rl, train-irl, evaluate, report. Every training run
// writes a manifest (effective config, seed, input content hashes) that is
// sufficient to reproduce its outputs bit for bit.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irlsum.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

[[noreturn]] void die(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(1);
}

void check(irlsum_status st) {
  if (st != IRLSUM_OK) die(irlsum_last_error());
}

std::string default_out_dir() {
  const char* env = std::getenv("IRLSUM_OUT_DIR");
  return env && *env ? env : "out";
}

using ConfigPtr = std::unique_ptr<irlsum_config, decltype(&irlsum_config_free)>;
using CorpusPtr = std::unique_ptr<irlsum_corpus, decltype(&irlsum_corpus_free)>;
using ModelPtr = std::unique_ptr<irlsum_model, decltype(&irlsum_model_free)>;
using TrajPtr = std::unique_ptr<irlsum_trajectory, decltype(&irlsum_trajectory_free)>;

struct CommonOpts {
  std::string config_path;
  std::string preset = "desk-scale";
  std::string out_dir = default_out_dir();
  int64_t seed = -1;       // -1: keep the config value
  int max_examples = -1;   // -1: keep the config value
  int workers = 0;         // 0: keep the config value
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file (flat TrainConfig keys)");
  cmd->add_option("--preset", opts.preset, "paper-scale or desk-scale")
      ->check(CLI::IsMember({"paper-scale", "desk-scale"}));
  cmd->add_option("--out", opts.out_dir, "output directory (default $IRLSUM_OUT_DIR or ./out)");
  cmd->add_option("--seed", opts.seed, "run seed (overrides config)");
  cmd->add_option("--max-examples", opts.max_examples,
                  "use only the first N corpus examples (overrides config)");
  cmd->add_option("--workers", opts.workers, "intra-run worker threads (overrides config)");
}

ConfigPtr build_config(const CommonOpts& opts) {
  irlsum_config* raw = nullptr;
  check(irlsum_config_create(opts.preset.c_str(), &raw));
  ConfigPtr cfg(raw, irlsum_config_free);
  if (!opts.config_path.empty()) check(irlsum_config_load_file(cfg.get(), opts.config_path.c_str()));
  if (opts.seed >= 0) check(irlsum_config_set(cfg.get(), "seed", std::to_string(opts.seed).c_str()));
  if (opts.max_examples >= 0) {
    check(irlsum_config_set(cfg.get(), "max_examples", std::to_string(opts.max_examples).c_str()));
  }
  if (opts.workers > 0) {
    check(irlsum_config_set(cfg.get(), "workers", std::to_string(opts.workers).c_str()));
  }
  return cfg;
}

std::string config_json(const irlsum_config* cfg) {
  char* raw = nullptr;
  check(irlsum_config_to_json(cfg, &raw));
  std::string text(raw);
  irlsum_string_free(raw);
  return text;
}

std::string hash_of(const std::string& path) {
  char buf[17];
  check(irlsum_file_hash(path.c_str(), buf));
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die("cannot write " + path);
  out << text;
  if (!out) die("write failed: " + path);
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const irlsum_config* cfg, const nlohmann::json& inputs,
                    const std::vector<std::string>& outputs) {
  nlohmann::json manifest;
  manifest["artifact"] = "irlsum";
  manifest["version"] = irlsum_version();
  manifest["command"] = command;
  manifest["config"] = nlohmann::json::parse(config_json(cfg));
  manifest["inputs"] = inputs;
  for (const auto& path : outputs) {
    manifest["outputs"].push_back({{"path", path}, {"hash", hash_of(path)}});
  }
  write_file(out_dir + "/manifest_" + command + ".json", manifest.dump(1) + "\n");
}

CorpusPtr load_corpus_checked(const std::string& path) {
  if (path.empty()) die("--corpus is required");
  irlsum_corpus* raw = nullptr;
  check(irlsum_corpus_load(path.c_str(), &raw));
  return CorpusPtr(raw, irlsum_corpus_free);
}

int run_gen_data(const std::string& out_file, int pairs, int min_sentences, int max_sentences,
                 const std::string& strategy, double paraphrase_rate, uint64_t seed,
                 int novelty_order) {
  irlsum_corpus* raw = nullptr;
  check(irlsum_corpus_generate(strategy.c_str(), pairs, min_sentences, max_sentences,
                               paraphrase_rate, seed, &raw));
  CorpusPtr corpus(raw, irlsum_corpus_free);
  if (fs::path(out_file).has_parent_path()) {
    fs::create_directories(fs::path(out_file).parent_path());
  }
  check(irlsum_corpus_save(corpus.get(), out_file.c_str()));
  double means[4];
  check(irlsum_corpus_reference_means(corpus.get(), novelty_order, means));
  std::printf("pairs: %d\n", irlsum_corpus_size(corpus.get()));
  std::printf("reference means: rouge=%.4f nov=%.4f cov=%.4f comp=%.4f\n", means[0], means[1],
              means[2], means[3]);

  nlohmann::json manifest;
  manifest["artifact"] = "irlsum";
  manifest["version"] = irlsum_version();
  manifest["command"] = "gen-data";
  manifest["config"] = {{"pairs", pairs},
                        {"min_sentences", min_sentences},
                        {"max_sentences", max_sentences},
                        {"strategy", strategy},
                        {"paraphrase_rate", paraphrase_rate},
                        {"seed", seed},
                        {"novelty_order", novelty_order}};
  manifest["outputs"] = {{{"path", out_file}, {"hash", hash_of(out_file)}}};
  const std::string manifest_path =
      (fs::path(out_file).parent_path() / "manifest_gen-data.json").string();
  write_file(manifest_path, manifest.dump(1) + "\n");
  std::printf("wrote %s\nwrote %s\n", out_file.c_str(), manifest_path.c_str());
  return 0;
}

int run_train(const std::string& mode, const CommonOpts& opts, const std::string& corpus_path,
              const std::string& pretrained_path) {
  ConfigPtr cfg = build_config(opts);
  CorpusPtr corpus = load_corpus_checked(corpus_path);

  ModelPtr pretrained(nullptr, irlsum_model_free);
  if (mode != "mle") {
    if (pretrained_path.empty()) {
      die("train-" + mode + " requires --pretrained (an MLE checkpoint, see train-mle)");
    }
    irlsum_model* raw = nullptr;
    check(irlsum_model_load(pretrained_path.c_str(), &raw));
    pretrained.reset(raw);
  }

  fs::create_directories(opts.out_dir);
  ModelPtr model(nullptr, irlsum_model_free);
  TrajPtr trajectory(nullptr, irlsum_trajectory_free);
  if (mode == "mle") {
    irlsum_model* raw = nullptr;
    check(irlsum_train_mle(corpus.get(), cfg.get(), &raw));
    model.reset(raw);
  } else if (mode == "rl") {
    irlsum_model* raw = nullptr;
    check(irlsum_train_rl(pretrained.get(), corpus.get(), cfg.get(), &raw));
    model.reset(raw);
  } else {
    irlsum_model* raw = nullptr;
    irlsum_trajectory* traj_raw = nullptr;
    check(irlsum_train_irl(pretrained.get(), corpus.get(), cfg.get(), &raw, &traj_raw));
    model.reset(raw);
    trajectory.reset(traj_raw);
  }

  const std::string checkpoint_path = opts.out_dir + "/checkpoint_" + mode + ".json";
  check(irlsum_model_save(model.get(), checkpoint_path.c_str()));
  std::vector<std::string> outputs = {checkpoint_path};

  if (trajectory) {
    const std::string traj_path = opts.out_dir + "/trajectory_irl.csv";
    check(irlsum_trajectory_save_csv(trajectory.get(), traj_path.c_str()));
    outputs.push_back(traj_path);
  }

  nlohmann::json inputs;
  inputs["corpus"] = {{"path", corpus_path}, {"hash", hash_of(corpus_path)}};
  if (!pretrained_path.empty()) {
    inputs["pretrained"] = {{"path", pretrained_path}, {"hash", hash_of(pretrained_path)}};
  }
  write_manifest(opts.out_dir, "train-" + mode, cfg.get(), inputs, outputs);
  for (const auto& f : outputs) std::printf("wrote %s\n", f.c_str());
  return 0;
}

int run_evaluate(const CommonOpts& opts, const std::string& corpus_path,
                 const std::vector<std::string>& checkpoints, const std::string& trajectory_path,
                 const std::string& label) {
  ConfigPtr cfg = build_config(opts);
  CorpusPtr corpus = load_corpus_checked(corpus_path);

  irlsum_report* raw_report = nullptr;
  check(irlsum_report_create(corpus.get(), cfg.get(), &raw_report));
  std::unique_ptr<irlsum_report, decltype(&irlsum_report_free)> report(raw_report,
                                                                       irlsum_report_free);
  check(irlsum_report_add_reference(report.get(), "REF"));

  std::vector<ModelPtr> models;
  for (const auto& spec : checkpoints) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) die("--checkpoint expects NAME=PATH, got: " + spec);
    const std::string name = spec.substr(0, eq);
    const std::string path = spec.substr(eq + 1);
    irlsum_model* raw = nullptr;
    check(irlsum_model_load(path.c_str(), &raw));
    models.emplace_back(raw, irlsum_model_free);
    check(irlsum_report_add_model(report.get(), name.c_str(), raw));
  }

  fs::create_directories(opts.out_dir);
  nlohmann::json config_echo = nlohmann::json::parse(config_json(cfg.get()));
  const std::string suffix = label + "_seed" + std::to_string(config_echo["seed"].get<uint64_t>());
  check(irlsum_report_write(report.get(), opts.out_dir.c_str(), suffix.c_str()));
  std::vector<std::string> outputs = {
      opts.out_dir + "/component_table_" + suffix + ".csv",
      opts.out_dir + "/novelty_profile_" + suffix + ".csv",
      opts.out_dir + "/entity_stats_" + suffix + ".csv",
  };

  if (!trajectory_path.empty()) {
    irlsum_trajectory* traj_raw = nullptr;
    check(irlsum_trajectory_load_csv(trajectory_path.c_str(), &traj_raw));
    TrajPtr traj(traj_raw, irlsum_trajectory_free);
    const std::string curve_csv = opts.out_dir + "/weight_curves_" + suffix + ".csv";
    const std::string curve_svg = opts.out_dir + "/weight_curves_" + suffix + ".svg";
    check(irlsum_trajectory_save_csv(traj.get(), curve_csv.c_str()));
    check(irlsum_trajectory_save_svg(traj.get(), curve_svg.c_str()));
    outputs.push_back(curve_csv);
    outputs.push_back(curve_svg);
  }

  nlohmann::json inputs;
  inputs["corpus"] = {{"path", corpus_path}, {"hash", hash_of(corpus_path)}};
  for (const auto& spec : checkpoints) {
    const auto eq = spec.find('=');
    const std::string path = spec.substr(eq + 1);
    inputs["checkpoints"].push_back({{"path", path}, {"hash", hash_of(path)}});
  }
  write_manifest(opts.out_dir, "evaluate", cfg.get(), inputs, outputs);
  for (const auto& f : outputs) std::printf("wrote %s\n", f.c_str());
  return 0;
}

int run_report(const std::string& trajectory_path, const std::string& out_dir,
               const std::string& label) {
  irlsum_trajectory* traj_raw = nullptr;
  check(irlsum_trajectory_load_csv(trajectory_path.c_str(), &traj_raw));
  TrajPtr traj(traj_raw, irlsum_trajectory_free);
  fs::create_directories(out_dir);
  const std::string curve_csv = out_dir + "/weight_curves_" + label + ".csv";
  const std::string curve_svg = out_dir + "/weight_curves_" + label + ".svg";
  check(irlsum_trajectory_save_csv(traj.get(), curve_csv.c_str()));
  check(irlsum_trajectory_save_svg(traj.get(), curve_svg.c_str()));
  std::printf("wrote %s\nwrote %s\n", curve_csv.c_str(), curve_svg.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inverse-RL summarization trainer"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic JSONL corpus");
  std::string gen_out, gen_strategy = "lead-copy";
  int gen_pairs = 200, gen_min_sentences = 3, gen_max_sentences = 6, gen_novelty_order = 2;
  double gen_rate = 0.0;
  uint64_t gen_seed = 0;
  gen->add_option("--out", gen_out, "output JSONL path")->required();
  gen->add_option("--pairs", gen_pairs, "number of pairs");
  gen->add_option("--min-sentences", gen_min_sentences, "min article sentences");
  gen->add_option("--max-sentences", gen_max_sentences, "max article sentences");
  gen->add_option("--strategy", gen_strategy, "lead-copy, paraphrase-k or mixed")
      ->check(CLI::IsMember({"lead-copy", "paraphrase-k", "mixed"}));
  gen->add_option("--paraphrase-rate", gen_rate, "token replacement rate in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--novelty-order", gen_novelty_order, "n-gram order for reported novelty");

  // train-*
  CommonOpts mle_opts, rl_opts, irl_opts;
  std::string mle_corpus, rl_corpus, irl_corpus, rl_pretrained, irl_pretrained;
  auto* train_mle = app.add_subcommand("train-mle", "teacher-forced MLE pretraining");
  train_mle->add_option("--corpus", mle_corpus, "JSONL corpus")->required();
  add_common(train_mle, mle_opts);
  auto* train_rl = app.add_subcommand("train-rl", "self-critical RL with the ROUGE-L reward");
  train_rl->add_option("--corpus", rl_corpus, "JSONL corpus")->required();
  train_rl->add_option("--pretrained", rl_pretrained, "MLE checkpoint to start from");
  add_common(train_rl, rl_opts);
  auto* train_irl = app.add_subcommand("train-irl", "alternating reward/policy IRL training");
  train_irl->add_option("--corpus", irl_corpus, "JSONL corpus")->required();
  train_irl->add_option("--pretrained", irl_pretrained, "MLE checkpoint to start from");
  add_common(train_irl, irl_opts);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "component/novelty/entity tables for checkpoints");
  CommonOpts eval_opts;
  std::string eval_corpus, eval_trajectory, eval_label = "eval";
  std::vector<std::string> eval_checkpoints;
  evaluate->add_option("--corpus", eval_corpus, "JSONL corpus")->required();
  evaluate->add_option("--checkpoint", eval_checkpoints, "NAME=PATH, repeatable");
  evaluate->add_option("--trajectory", eval_trajectory, "IRL trajectory CSV for weight curves");
  evaluate->add_option("--label", eval_label, "label used in output file names");
  add_common(evaluate, eval_opts);

  // report
  auto* report = app.add_subcommand("report", "regenerate weight curves from a trajectory CSV");
  std::string report_trajectory, report_out = default_out_dir(), report_label = "irl";
  report->add_option("--trajectory", report_trajectory, "trajectory CSV")->required();
  report->add_option("--out", report_out, "output directory");
  report->add_option("--label", report_label, "label used in output file names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return run_gen_data(gen_out, gen_pairs, gen_min_sentences, gen_max_sentences, gen_strategy,
                          gen_rate, gen_seed, gen_novelty_order);
    }
    if (train_mle->parsed()) return run_train("mle", mle_opts, mle_corpus, "");
    if (train_rl->parsed()) return run_train("rl", rl_opts, rl_corpus, rl_pretrained);
    if (train_irl->parsed()) return run_train("irl", irl_opts, irl_corpus, irl_pretrained);
    if (evaluate->parsed()) {
      return run_evaluate(eval_opts, eval_corpus, eval_checkpoints, eval_trajectory, eval_label);
    }
    if (report->parsed()) return run_report(report_trajectory, report_out, report_label);
  } catch (const std::exception& e) {
    die(e.what());
  }
  return 1;
}
