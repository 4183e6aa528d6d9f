#pragma once

#include <array>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "irlsum/corpus.hpp"
#include "irlsum/metrics.hpp"
#include "irlsum/trainer.hpp"

namespace irlsum {

// One summary per corpus pair, in corpus order.
using SystemSummaries = std::vector<TokenSeq>;

// Per-system component means as percentages. ROUGE-1/2 and plain unigram
// overlap ride along as evaluation-only statistics; they are not sub-rewards.
struct ComponentRow {
  std::string system;
  double rouge_l = 0.0;
  double novelty = 0.0;
  double coverage = 0.0;
  double compression = 0.0;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double unigram_overlap = 0.0;
};

struct ComponentTable {
  std::vector<ComponentRow> rows;
};

struct EntityStats {
  std::string system;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mean_summary_length = 0.0;
};

// ROUGE-n F1 via clip-counted n-gram overlap.
double rouge_n_f1(Tokens candidate, Tokens reference, int n);

// Fraction of summary tokens that occur anywhere in the article; the plain
// word-overlap reading of coverage, kept alongside the fragment version.
double unigram_overlap(Tokens summary, Tokens article);

// Arithmetic component means x100 per system; every system must supply one
// summary per pair.
ComponentTable component_table(
    const std::vector<std::pair<std::string, SystemSummaries>>& systems,
    const std::vector<ExamplePair>& corpus, int novelty_order);

// Mean novelty x100 against the articles for each order 1..max_order.
std::vector<double> novel_ngram_profile(const SystemSummaries& summaries,
                                        const std::vector<ExamplePair>& corpus, int max_order);

// Rule-based entity proxy over cased text: maximal runs of capitalized
// tokens, dropping a lone capitalized token that directly follows a
// sentence-terminal mark (. ! ?), plus standalone number tokens.
std::set<std::string> proxy_entities(const std::string& text);

// Micro-averaged precision/recall/F1 of entity overlap against the
// references, 0/0 counted as 0.
EntityStats entity_stats(const std::string& system, const std::vector<std::string>& summaries_raw,
                         const std::vector<ExamplePair>& corpus);

// CSV emission (RFC-4180-style, header row).
void write_component_table_csv(const ComponentTable& table, const std::string& path);
void write_novelty_profile_csv(
    const std::vector<std::pair<std::string, std::vector<double>>>& per_system,
    const std::string& path);
void write_entity_stats_csv(const std::vector<EntityStats>& stats, const std::string& path);

// Trajectory CSV plus an SVG line chart, one series per phi component,
// starting at the uniform initialization.
void emit_weight_curves(const WeightTrajectory& traj, const std::string& csv_path,
                        const std::string& svg_path);

std::string weight_curves_svg(const WeightTrajectory& traj);

}  // namespace irlsum
