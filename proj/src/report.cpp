#include "irlsum/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "irlsum/util.hpp"

namespace irlsum {

double rouge_n_f1(Tokens candidate, Tokens reference, int n) {
  if (n < 1) throw std::invalid_argument("rouge_n_f1: order must be >= 1");
  if (candidate.size() < static_cast<size_t>(n) || reference.size() < static_cast<size_t>(n)) {
    return 0.0;
  }
  std::map<std::vector<std::string>, long> ref_counts;
  for (size_t i = 0; i + static_cast<size_t>(n) <= reference.size(); ++i) {
    ++ref_counts[std::vector<std::string>(reference.begin() + static_cast<long>(i),
                                          reference.begin() + static_cast<long>(i) + n)];
  }
  std::map<std::vector<std::string>, long> cand_counts;
  for (size_t i = 0; i + static_cast<size_t>(n) <= candidate.size(); ++i) {
    ++cand_counts[std::vector<std::string>(candidate.begin() + static_cast<long>(i),
                                           candidate.begin() + static_cast<long>(i) + n)];
  }
  long overlap = 0;
  for (const auto& [gram, count] : cand_counts) {
    auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) overlap += std::min(count, it->second);
  }
  if (overlap == 0) return 0.0;
  const double cand_total = static_cast<double>(candidate.size() - static_cast<size_t>(n) + 1);
  const double ref_total = static_cast<double>(reference.size() - static_cast<size_t>(n) + 1);
  const double p = static_cast<double>(overlap) / cand_total;
  const double r = static_cast<double>(overlap) / ref_total;
  return 2.0 * p * r / (p + r);
}

double unigram_overlap(Tokens summary, Tokens article) {
  if (summary.empty()) return 0.0;
  std::set<std::string> article_tokens(article.begin(), article.end());
  size_t present = 0;
  for (const auto& tok : summary) present += article_tokens.count(tok);
  return static_cast<double>(present) / static_cast<double>(summary.size());
}

ComponentTable component_table(
    const std::vector<std::pair<std::string, SystemSummaries>>& systems,
    const std::vector<ExamplePair>& corpus, int novelty_order) {
  if (corpus.empty()) throw std::invalid_argument("component_table: empty corpus");
  ComponentTable table;
  for (const auto& [name, summaries] : systems) {
    if (summaries.size() != corpus.size()) {
      throw std::invalid_argument("component_table: system \"" + name + "\" supplies " +
                                  std::to_string(summaries.size()) + " summaries for " +
                                  std::to_string(corpus.size()) + " pairs");
    }
    ComponentRow row;
    row.system = name;
    for (size_t i = 0; i < corpus.size(); ++i) {
      const auto& pair = corpus[i];
      const ComponentVector c = components(summaries[i].surf(), pair.article.surf(),
                                           pair.reference.surf(), novelty_order);
      row.rouge_l += c.rouge;
      row.novelty += c.novelty;
      row.coverage += c.coverage;
      row.compression += c.compression;
      row.rouge1 += rouge_n_f1(summaries[i].surf(), pair.reference.surf(), 1);
      row.rouge2 += rouge_n_f1(summaries[i].surf(), pair.reference.surf(), 2);
      row.unigram_overlap += unigram_overlap(summaries[i].surf(), pair.article.surf());
    }
    const double scale = 100.0 / static_cast<double>(corpus.size());
    row.rouge_l *= scale;
    row.novelty *= scale;
    row.coverage *= scale;
    row.compression *= scale;
    row.rouge1 *= scale;
    row.rouge2 *= scale;
    row.unigram_overlap *= scale;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<double> novel_ngram_profile(const SystemSummaries& summaries,
                                        const std::vector<ExamplePair>& corpus, int max_order) {
  if (max_order < 1) throw std::invalid_argument("novel_ngram_profile: order must be >= 1");
  if (summaries.size() != corpus.size()) {
    throw std::invalid_argument("novel_ngram_profile: one summary per pair required");
  }
  std::vector<double> out(static_cast<size_t>(max_order), 0.0);
  for (int n = 1; n <= max_order; ++n) {
    double sum = 0.0;
    for (size_t i = 0; i < corpus.size(); ++i) {
      sum += novelty(summaries[i].surf(), corpus[i].article.surf(), n);
    }
    out[static_cast<size_t>(n - 1)] = 100.0 * sum / static_cast<double>(corpus.size());
  }
  return out;
}

namespace {

bool is_capitalized(const std::string& tok) {
  return !tok.empty() && tok[0] >= 'A' && tok[0] <= 'Z';
}

bool is_number(const std::string& tok) {
  if (tok.empty()) return false;
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool is_sentence_end(const std::string& tok) {
  return tok == "." || tok == "!" || tok == "?";
}

// Whitespace + punctuation splitting, case preserved.
std::vector<std::string> tokenize_cased(const std::string& text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalnum(c) || c >= 0x80) {
      std::string tok;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) ||
              static_cast<unsigned char>(text[i]) >= 0x80)) {
        tok.push_back(text[i]);
        ++i;
      }
      out.push_back(std::move(tok));
    } else {
      out.push_back(std::string(1, text[i]));
      ++i;
    }
  }
  return out;
}

}  // namespace

std::set<std::string> proxy_entities(const std::string& text) {
  const std::vector<std::string> toks = tokenize_cased(text);
  std::set<std::string> out;
  size_t i = 0;
  while (i < toks.size()) {
    if (is_capitalized(toks[i])) {
      size_t j = i;
      std::string run = toks[i];
      while (j + 1 < toks.size() && is_capitalized(toks[j + 1])) {
        ++j;
        run += " " + toks[j];
      }
      // A lone capitalized word right after a sentence break is likely an
      // ordinary sentence start, not a name.
      const bool after_break = i > 0 && is_sentence_end(toks[i - 1]);
      if (!(after_break && j == i)) out.insert(run);
      i = j + 1;
      continue;
    }
    if (is_number(toks[i])) out.insert(toks[i]);
    ++i;
  }
  return out;
}

EntityStats entity_stats(const std::string& system, const std::vector<std::string>& summaries_raw,
                         const std::vector<ExamplePair>& corpus) {
  if (summaries_raw.size() != corpus.size()) {
    throw std::invalid_argument("entity_stats: one summary per pair required");
  }
  EntityStats stats;
  stats.system = system;
  size_t matched = 0, in_summary = 0, in_reference = 0, token_total = 0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const auto sum_ents = proxy_entities(summaries_raw[i]);
    const auto ref_ents = proxy_entities(corpus[i].reference_raw);
    for (const auto& e : sum_ents) {
      if (ref_ents.count(e)) ++matched;
    }
    in_summary += sum_ents.size();
    in_reference += ref_ents.size();
    token_total += tokenize_cased(summaries_raw[i]).size();
  }
  stats.precision = in_summary ? static_cast<double>(matched) / static_cast<double>(in_summary)
                               : 0.0;
  stats.recall = in_reference ? static_cast<double>(matched) / static_cast<double>(in_reference)
                              : 0.0;
  stats.f1 = (stats.precision + stats.recall) > 0.0
                 ? 2.0 * stats.precision * stats.recall / (stats.precision + stats.recall)
                 : 0.0;
  stats.mean_summary_length =
      corpus.empty() ? 0.0 : static_cast<double>(token_total) / static_cast<double>(corpus.size());
  return stats;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += "\"\"";
    else quoted.push_back(c);
  }
  quoted += "\"";
  return quoted;
}

std::string pct(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void write_component_table_csv(const ComponentTable& table, const std::string& path) {
  std::string text = "system,rouge_l,nov,cov,comp,rouge_1,rouge_2,uni_cov\n";
  for (const auto& row : table.rows) {
    text += csv_field(row.system) + "," + pct(row.rouge_l) + "," + pct(row.novelty) + "," +
            pct(row.coverage) + "," + pct(row.compression) + "," + pct(row.rouge1) + "," +
            pct(row.rouge2) + "," + pct(row.unigram_overlap) + "\n";
  }
  write_text_file(text, path);
}

void write_novelty_profile_csv(
    const std::vector<std::pair<std::string, std::vector<double>>>& per_system,
    const std::string& path) {
  std::string text = "system";
  size_t orders = 0;
  for (const auto& [name, values] : per_system) orders = std::max(orders, values.size());
  for (size_t n = 1; n <= orders; ++n) text += "," + std::to_string(n) + "_gram";
  text += "\n";
  for (const auto& [name, values] : per_system) {
    text += csv_field(name);
    for (double v : values) text += "," + pct(v);
    text += "\n";
  }
  write_text_file(text, path);
}

void write_entity_stats_csv(const std::vector<EntityStats>& stats, const std::string& path) {
  std::string text = "system,precision,recall,f1,mean_length\n";
  for (const auto& s : stats) {
    text += csv_field(s.system) + "," + pct(100.0 * s.precision) + "," + pct(100.0 * s.recall) +
            "," + pct(100.0 * s.f1) + "," + pct(s.mean_summary_length) + "\n";
  }
  write_text_file(text, path);
}

namespace {

constexpr std::array<const char*, 4> kSeriesColor = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
constexpr std::array<const char*, 4> kSeriesLabel = {"rouge", "novelty", "coverage",
                                                     "compression"};

std::string fmt_coord(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

}  // namespace

std::string weight_curves_svg(const WeightTrajectory& traj) {
  if (traj.snapshots.empty()) throw std::invalid_argument("weight_curves_svg: empty trajectory");
  const double width = 720, height = 480;
  const double left = 64, right = 150, top = 32, bottom = 48;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  // Series k: (0, initial phi_k), (update_i, phi_k after update i).
  const size_t points = traj.snapshots.size() + 1;
  double ymin = 1e300, ymax = -1e300;
  auto value_at = [&](size_t k, size_t i) {
    return i == 0 ? traj.initial.phi[k] : traj.snapshots[i - 1].phi.phi[k];
  };
  for (size_t k = 0; k < 4; ++k) {
    for (size_t i = 0; i < points; ++i) {
      ymin = std::min(ymin, value_at(k, i));
      ymax = std::max(ymax, value_at(k, i));
    }
  }
  if (ymax - ymin < 1e-9) {
    ymax += 0.05;
    ymin -= 0.05;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const double xmax = static_cast<double>(traj.snapshots.back().update);
  auto sx = [&](double u) { return left + (xmax > 0 ? u / xmax : 0.0) * plot_w; };
  auto sy = [&](double v) { return top + (1.0 - (v - ymin) / (ymax - ymin)) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << left << "\" y=\"20\">reward weights by update</text>\n";

  // Axes and horizontal gridlines.
  svg << "  <line x1=\"" << fmt_coord(left) << "\" y1=\"" << fmt_coord(top + plot_h) << "\" x2=\""
      << fmt_coord(left + plot_w) << "\" y2=\"" << fmt_coord(top + plot_h)
      << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << fmt_coord(left) << "\" y1=\"" << fmt_coord(top) << "\" x2=\""
      << fmt_coord(left) << "\" y2=\"" << fmt_coord(top + plot_h) << "\" stroke=\"black\"/>\n";
  for (int g = 0; g <= 4; ++g) {
    const double v = ymin + (ymax - ymin) * g / 4.0;
    const double y = sy(v);
    svg << "  <line x1=\"" << fmt_coord(left) << "\" y1=\"" << fmt_coord(y) << "\" x2=\""
        << fmt_coord(left + plot_w) << "\" y2=\"" << fmt_coord(y)
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "  <text x=\"8\" y=\"" << fmt_coord(y + 4) << "\">" << fmt_coord(v) << "</text>\n";
  }
  // X tick labels at both ends.
  svg << "  <text x=\"" << fmt_coord(left) << "\" y=\"" << fmt_coord(height - 20)
      << "\">0</text>\n";
  svg << "  <text x=\"" << fmt_coord(left + plot_w - 8) << "\" y=\"" << fmt_coord(height - 20)
      << "\">" << traj.snapshots.back().update << "</text>\n";

  for (size_t k = 0; k < 4; ++k) {
    svg << "  <polyline fill=\"none\" stroke=\"" << kSeriesColor[k]
        << "\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < points; ++i) {
      const double u = i == 0 ? 0.0 : static_cast<double>(traj.snapshots[i - 1].update);
      if (i) svg << " ";
      svg << fmt_coord(sx(u)) << "," << fmt_coord(sy(value_at(k, i)));
    }
    svg << "\"/>\n";
    const double ly = top + 16.0 + 18.0 * static_cast<double>(k);
    svg << "  <rect x=\"" << fmt_coord(left + plot_w + 12) << "\" y=\"" << fmt_coord(ly - 9)
        << "\" width=\"10\" height=\"10\" fill=\"" << kSeriesColor[k] << "\"/>\n";
    svg << "  <text x=\"" << fmt_coord(left + plot_w + 28) << "\" y=\"" << fmt_coord(ly)
        << "\">" << kSeriesLabel[k] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_weight_curves(const WeightTrajectory& traj, const std::string& csv_path,
                        const std::string& svg_path) {
  if (traj.snapshots.empty()) throw std::invalid_argument("emit_weight_curves: empty trajectory");
  save_trajectory_csv(traj, csv_path);
  write_text_file(weight_curves_svg(traj), svg_path);
}

}  // namespace irlsum
