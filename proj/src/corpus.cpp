#include "irlsum/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include "irlsum/rng.hpp"
#include "json.hpp"

namespace irlsum {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

char lower_byte(unsigned char c) {
  return static_cast<char>(c < 0x80 ? std::tolower(c) : c);
}

}  // namespace

Vocab::Vocab() {
  id_to_token_ = {"<pad>", "<bos>", "<eos>", "<unk>"};
  for (int i = 0; i < kReserved; ++i) token_to_id_[id_to_token_[static_cast<size_t>(i)]] = i;
}

int Vocab::id_of(const std::string& tok) const {
  auto it = token_to_id_.find(tok);
  return it == token_to_id_.end() ? kUnk : it->second;
}

int Vocab::add(const std::string& tok) {
  auto it = token_to_id_.find(tok);
  if (it != token_to_id_.end()) return it->second;
  int id = size();
  id_to_token_.push_back(tok);
  token_to_id_[tok] = id;
  return id;
}

void Vocab::encode(TokenSeq& seq) const {
  seq.ids.clear();
  seq.ids.reserve(seq.surface.size());
  for (const auto& tok : seq.surface) seq.ids.push_back(id_of(tok));
}

TokenSeq Vocab::encoded(const TokenSeq& seq) const {
  TokenSeq out = seq;
  encode(out);
  return out;
}

TokenSeq Vocab::decode(const std::vector<int>& ids) const {
  TokenSeq out;
  out.ids = ids;
  out.surface.reserve(ids.size());
  for (int id : ids) {
    if (id < 0 || id >= size()) throw std::invalid_argument("decode: token id out of range");
    out.surface.push_back(token(id));
  }
  return out;
}

uint64_t Vocab::content_hash() const {
  uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& tok : id_to_token_) {
    h = fnv1a(tok, h);
    h = fnv1a("\n", h);
  }
  return h;
}

TokenSeq tokenize(const std::string& text) {
  TokenSeq out;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (is_word_byte(c)) {
      std::string tok;
      while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) {
        tok.push_back(lower_byte(static_cast<unsigned char>(text[i])));
        ++i;
      }
      out.surface.push_back(std::move(tok));
    } else {
      out.surface.push_back(std::string(1, text[i]));
      ++i;
    }
  }
  return out;
}

std::vector<ExamplePair> load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::vector<ExamplePair> pairs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw std::runtime_error("corpus line " + std::to_string(line_no) + ": malformed JSON");
    }
    for (const char* field : {"id", "article", "summary"}) {
      if (!obj.contains(field) || !obj[field].is_string()) {
        throw std::runtime_error("corpus line " + std::to_string(line_no) +
                                 ": missing field \"" + field + "\"");
      }
    }
    ExamplePair p;
    p.id = obj["id"].get<std::string>();
    p.article_raw = obj["article"].get<std::string>();
    p.reference_raw = obj["summary"].get<std::string>();
    p.article = tokenize(p.article_raw);
    p.reference = tokenize(p.reference_raw);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void save_corpus(const std::vector<ExamplePair>& pairs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  for (const auto& p : pairs) {
    nlohmann::json obj;
    obj["id"] = p.id;
    obj["article"] = p.article_raw;
    obj["summary"] = p.reference_raw;
    out << obj.dump() << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Vocab build_vocab(const std::vector<ExamplePair>& pairs, int max_size) {
  if (pairs.empty()) throw std::invalid_argument("build_vocab: empty corpus");
  if (max_size < Vocab::kReserved + 1) {
    throw std::invalid_argument("build_vocab: max_size must be at least 5");
  }
  std::unordered_map<std::string, int64_t> counts;
  for (const auto& p : pairs) {
    for (const auto& tok : p.article.surface) ++counts[tok];
    for (const auto& tok : p.reference.surface) ++counts[tok];
  }
  std::vector<std::pair<std::string, int64_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocab v;
  const size_t keep = static_cast<size_t>(max_size - Vocab::kReserved);
  for (size_t i = 0; i < ranked.size() && i < keep; ++i) v.add(ranked[i].first);
  return v;
}

RefStrategy parse_strategy(const std::string& name) {
  if (name == "lead-copy") return RefStrategy::kLeadCopy;
  if (name == "paraphrase-k") return RefStrategy::kParaphrase;
  if (name == "mixed") return RefStrategy::kMixed;
  throw std::invalid_argument("unknown reference strategy: " + name);
}

std::string strategy_name(RefStrategy s) {
  switch (s) {
    case RefStrategy::kLeadCopy: return "lead-copy";
    case RefStrategy::kParaphrase: return "paraphrase-k";
    case RefStrategy::kMixed: return "mixed";
  }
  return "?";
}

void SyntheticSpec::validate() const {
  if (pairs <= 0) throw std::invalid_argument("synthetic spec: pairs must be positive");
  if (min_sentences <= 0 || max_sentences < min_sentences) {
    throw std::invalid_argument("synthetic spec: invalid sentence count range");
  }
  if (paraphrase_rate < 0.0 || paraphrase_rate > 1.0) {
    throw std::invalid_argument("synthetic spec: paraphrase rate must be in [0,1]");
  }
}

namespace {

// Word banks for the template grammar. Lead sentences draw their content
// words from banks that never occur in filler sentences, so the reference
// content is recoverable from the article's bag of words; the synonym bank
// is disjoint from every other bank, so a paraphrased token can never occur
// in an article.
const std::vector<std::string>& lead_names() {
  static const std::vector<std::string> v = {
      "Captain Ortega", "General Vance", "Doctor Imri",  "Sergeant Kael",
      "Agent Moss",     "Colonel Drae",  "Mayor Tolan",  "Envoy Sura"};
  return v;
}
const std::vector<std::string>& lead_verbs() {
  static const std::vector<std::string> v = {
      "secured", "inspected", "abandoned", "reached", "defended",
      "mapped",  "crossed",   "guarded",   "surveyed"};
  return v;
}
const std::vector<std::string>& lead_objects() {
  static const std::vector<std::string> v = {
      "the northern bridge", "the supply depot",  "the river crossing",
      "the radio tower",     "the old granary",   "the coastal road",
      "the signal post",     "the water station", "the border gate"};
  return v;
}
const std::vector<std::string>& filler_subjects() {
  static const std::vector<std::string> v = {
      "the convoy", "the patrol",  "the garrison", "the crew",
      "the escort", "the brigade", "the scouts",   "the militia"};
  return v;
}
const std::vector<std::string>& filler_verbs() {
  static const std::vector<std::string> v = {"rested", "waited", "regrouped", "camped",
                                             "drilled", "marched"};
  return v;
}
const std::vector<std::string>& filler_objects() {
  static const std::vector<std::string> v = {
      "by the muddy field", "behind the low ridge", "along the dusty track",
      "at the dry creek",   "past the foggy marsh", "near the pine grove"};
  return v;
}

// Synonyms, keyed by lead-bank word. Values never appear in any bank above.
const std::unordered_map<std::string, std::string>& synonym_map() {
  static const std::unordered_map<std::string, std::string> m = {
      {"the", "that"},
      {"captain", "skipper"},{"general", "commander"},{"doctor", "medic"},
      {"sergeant", "corporal"}, {"agent", "operative"}, {"colonel", "officer"},
      {"mayor", "chief"},    {"envoy", "emissary"},   {"ortega", "varga"},     {"vance", "holt"},
      {"imri", "senn"},      {"kael", "rhoe"},        {"moss", "fenn"},
      {"drae", "quill"},     {"tolan", "merce"},      {"sura", "liss"},
      {"secured", "captured"}, {"inspected", "examined"}, {"abandoned", "deserted"},
      {"reached", "attained"}, {"defended", "protected"}, {"mapped", "charted"},
      {"crossed", "traversed"}, {"guarded", "watched"},  {"surveyed", "assessed"},
      {"northern", "upper"}, {"bridge", "span"},       {"supply", "provision"},
      {"depot", "warehouse"},{"river", "stream"},      {"crossing", "ford"},
      {"radio", "wireless"}, {"tower", "mast"},        {"old", "ancient"},
      {"granary", "silo"},   {"coastal", "seaside"},   {"road", "route"},
      {"signal", "beacon"},  {"post", "kiosk"},        {"water", "well"},
      {"station", "plant"},  {"border", "frontier"},   {"gate", "checkpoint"},
      {"in", "inside"},      {"sector", "zone"},
      {".", ";"},
      {"2", "two"}, {"3", "three"}, {"4", "four"}, {"5", "five"},
      {"6", "six"}, {"7", "seven"}, {"8", "eight"}, {"9", "nine"}};
  return m;
}

std::string make_sentence(Rng& rng, bool lead) {
  std::string s;
  if (lead) {
    // Leads carry a named entity and a digit so the entity proxy has
    // something to find in references.
    s = lead_names()[rng.next_below(lead_names().size())];
    s += " " + lead_verbs()[rng.next_below(lead_verbs().size())];
    s += " " + lead_objects()[rng.next_below(lead_objects().size())];
    s += " in sector " + std::to_string(2 + rng.next_below(8));
  } else {
    s = filler_subjects()[rng.next_below(filler_subjects().size())];
    s += " " + filler_verbs()[rng.next_below(filler_verbs().size())];
    s += " " + filler_objects()[rng.next_below(filler_objects().size())];
  }
  s += " .";
  return s;
}

std::string paraphrase_sentence(const std::string& sentence, double rate, Rng& rng) {
  TokenSeq toks = tokenize(sentence);
  const auto& syn = synonym_map();
  std::string out;
  for (size_t i = 0; i < toks.surface.size(); ++i) {
    std::string tok = toks.surface[i];
    if (rng.next_double() < rate) {
      auto it = syn.find(tok);
      if (it != syn.end()) tok = it->second;
    }
    if (!out.empty()) out += " ";
    out += tok;
  }
  return out;
}

}  // namespace

std::vector<ExamplePair> gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<ExamplePair> pairs;
  pairs.reserve(static_cast<size_t>(spec.pairs));
  for (int i = 0; i < spec.pairs; ++i) {
    Rng rng(derive_seed(spec.seed, "gen-synthetic", static_cast<uint64_t>(i)));
    int n_sent = spec.min_sentences +
                 static_cast<int>(rng.next_below(
                     static_cast<uint64_t>(spec.max_sentences - spec.min_sentences + 1)));
    std::string article;
    std::string lead;
    for (int s = 0; s < n_sent; ++s) {
      std::string sent = make_sentence(rng, s == 0);
      if (s == 0) lead = sent;
      if (!article.empty()) article += " ";
      article += sent;
    }
    bool paraphrase = spec.strategy == RefStrategy::kParaphrase ||
                      (spec.strategy == RefStrategy::kMixed && i % 2 == 1);
    std::string reference = paraphrase ? paraphrase_sentence(lead, spec.paraphrase_rate, rng)
                                       : lead;
    ExamplePair p;
    p.id = "syn-" + std::to_string(i);
    p.article_raw = article;
    p.reference_raw = reference;
    p.article = tokenize(article);
    p.reference = tokenize(reference);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace irlsum
