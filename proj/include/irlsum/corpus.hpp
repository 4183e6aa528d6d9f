#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace irlsum {

// A tokenized piece of text. `surface` is always present; `ids` is empty
// until the sequence has been encoded against a Vocab (tokenization happens
// before any vocabulary exists).
struct TokenSeq {
  std::vector<int> ids;
  std::vector<std::string> surface;

  size_t size() const { return surface.size(); }
  bool empty() const { return surface.empty(); }
  std::span<const std::string> surf() const { return surface; }
};

struct ExamplePair {
  std::string id;
  TokenSeq article;
  TokenSeq reference;
  // Original (cased) text, kept for the entity proxy and for corpus round-trips.
  std::string article_raw;
  std::string reference_raw;
};

class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kReserved = 4;

  Vocab();

  int size() const { return static_cast<int>(id_to_token_.size()); }
  const std::string& token(int id) const { return id_to_token_.at(static_cast<size_t>(id)); }
  const std::vector<std::string>& tokens() const { return id_to_token_; }

  // Id for a surface token; unknown tokens map to kUnk.
  int id_of(const std::string& tok) const;

  // Appends a non-reserved token; returns its id.
  int add(const std::string& tok);

  // Fills seq.ids from seq.surface (OOV -> kUnk). Surfaces are preserved.
  void encode(TokenSeq& seq) const;
  TokenSeq encoded(const TokenSeq& seq) const;

  // Builds a TokenSeq from ids (surfaces looked up in the vocab).
  TokenSeq decode(const std::vector<int>& ids) const;

  uint64_t content_hash() const;

 private:
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, int> token_to_id_;
};

// Lowercases, splits on whitespace, and separates punctuation into standalone
// tokens. A token is a maximal run of alphanumeric bytes (bytes >= 0x80 count
// as letters so UTF-8 sequences stay intact); any other byte is its own token.
TokenSeq tokenize(const std::string& text);

// JSONL corpus: one {"id", "article", "summary"} object per line.
std::vector<ExamplePair> load_corpus(const std::string& path);
void save_corpus(const std::vector<ExamplePair>& pairs, const std::string& path);

// Most-frequent tokens up to max_size - 4 reserved slots; ties broken
// lexicographically. Counts run over articles and references.
Vocab build_vocab(const std::vector<ExamplePair>& pairs, int max_size);

enum class RefStrategy { kLeadCopy, kParaphrase, kMixed };

struct SyntheticSpec {
  int pairs = 200;
  int min_sentences = 3;
  int max_sentences = 6;
  RefStrategy strategy = RefStrategy::kLeadCopy;
  double paraphrase_rate = 0.0;  // fraction of reference tokens replaced by synonyms
  uint64_t seed = 0;

  void validate() const;
};

RefStrategy parse_strategy(const std::string& name);
std::string strategy_name(RefStrategy s);

// Template-grammar corpus with controlled reference statistics:
//   lead-copy    reference = first article sentence (coverage 1, bigram novelty 0)
//   paraphrase-k reference tokens replaced at the given rate with synonyms that
//                never occur in any article
// Pure function of its SyntheticSpec.
std::vector<ExamplePair> gen_synthetic(const SyntheticSpec& spec);

}  // namespace irlsum
