#ifndef FASTWORDBUG_TEXT_HPP
#define FASTWORDBUG_TEXT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fastwordbug::text {

// Penn Treebank tagset subset plus a catch-all OTHER for punctuation,
// symbols and anything unclassifiable.
enum class PosTag {
  NN, NNS, NNP, NNPS,
  VB, VBD, VBG, VBN, VBP, VBZ,
  JJ, JJR, JJS,
  RB, RBR, RBS,
  DT, IN, CC, PRP, PRPS, CD, MD, TO, WDT, WP, WRB,
  OTHER,
};

std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_tag(std::string_view name);

struct Token {
  std::string text;
  PosTag tag = PosTag::OTHER;
  int sentence_index = 0;
  int word_index = -1;     // dense 0..N-1 over word tokens; -1 for non-words
  bool is_word = false;    // letters, optionally with internal ' or -
  std::size_t offset = 0;  // byte offset into the owning document's text
};

struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Sentence boundaries fall after '.', '!' or '?' followed by whitespace and
// an uppercase letter (or end of text). A short abbreviation list (Mr., Mrs.,
// Dr., St., vs., e.g., i.e., etc.) suppresses splits. Spans exclude the
// whitespace between sentences, so the input reconstructs exactly from the
// spans plus the gaps.
std::vector<SentenceSpan> split_sentence_spans(const std::string& input);
std::vector<std::string> split_sentences(const std::string& input);

// Whitespace split, then leading/trailing punctuation detached into
// single-character tokens. Internal apostrophes and hyphens stay inside the
// word. word_index counts is_word tokens starting at word_offset; offsets
// are relative to the start of `sentence`.
std::vector<Token> tokenize(const std::string& sentence, int sentence_index,
                            int word_offset);

// Deterministic lexicon + suffix-rule tagger.
class Tagger {
 public:
  Tagger();  // embedded default lexicon
  static Tagger from_file(const std::string& path);
  static Tagger from_tsv(std::string_view tsv);

  // Fills Token::tag for every token. Tokens must come from tokenize()
  // (sentence_index and is_word drive the capitalization rule).
  void tag(std::vector<Token>& tokens) const;

  PosTag lookup_word(const Token& token, bool first_word_of_sentence) const;
  bool lexicon_contains(const std::string& word) const;
  std::size_t lexicon_size() const;

 private:
  explicit Tagger(std::unordered_map<std::string, PosTag> lexicon);
  std::unordered_map<std::string, PosTag> lexicon_;
};

const Tagger& default_tagger();

inline void pos_tag(std::vector<Token>& tokens) {
  default_tagger().tag(tokens);
}

struct Document {
  std::string original_text;
  std::vector<std::string> sentences;
  std::vector<SentenceSpan> sentence_spans;
  std::vector<Token> tokens;
  std::optional<std::string> label;

  int word_count() const;
  // Token carrying the given word_index. Throws std::out_of_range.
  const Token& word(int word_index) const;
  // word_index values inside one sentence, in document order.
  std::vector<int> words_in_sentence(int sentence_index) const;
};

Document build_document(std::string input,
                        std::optional<std::string> label = std::nullopt,
                        const Tagger& tagger = default_tagger());

}  // namespace fastwordbug::text

#endif  // FASTWORDBUG_TEXT_HPP
