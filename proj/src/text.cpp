#include "fastwordbug/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fastwordbug/errors.hpp"

namespace fastwordbug::text {
namespace detail {
extern const char* const kEmbeddedLexicon;  // generated from data/lexicon.tsv
}

namespace {

constexpr std::array<std::string_view, 28> kTagNames = {
    "NN", "NNS", "NNP", "NNPS", "VB",  "VBD", "VBG", "VBN", "VBP", "VBZ",
    "JJ", "JJR", "JJS", "RB",   "RBR", "RBS", "DT",  "IN",  "CC",  "PRP",
    "PRP$", "CD", "MD", "TO",   "WDT", "WP",  "WRB", "OTHER"};

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }

// Multi-byte UTF-8 units stay attached to their token and never count as
// detachable punctuation.
bool is_detachable_punct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 0x80 && !is_ascii_alpha(c) && !is_ascii_digit(c) &&
         !is_ascii_space(c);
}

std::string to_lower(std::string_view word) {
  std::string out(word);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

constexpr std::array<std::string_view, 8> kAbbreviations = {
    "mr", "mrs", "dr", "st", "vs", "e.g", "i.e", "etc"};

// Word chunk (letters and internal dots) that ends right before position i.
std::string preceding_chunk(const std::string& s, std::size_t i) {
  std::size_t begin = i;
  while (begin > 0 && (is_ascii_alpha(s[begin - 1]) || s[begin - 1] == '.')) {
    --begin;
  }
  return s.substr(begin, i - begin);
}

bool is_abbreviation(const std::string& s, std::size_t dot_pos) {
  std::string chunk = to_lower(preceding_chunk(s, dot_pos));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), chunk) !=
         kAbbreviations.end();
}

}  // namespace

std::string_view to_string(PosTag tag) {
  return kTagNames[static_cast<int>(tag)];
}

std::optional<PosTag> parse_tag(std::string_view name) {
  for (std::size_t i = 0; i < kTagNames.size(); ++i) {
    if (kTagNames[i] == name) return static_cast<PosTag>(i);
  }
  return std::nullopt;
}

std::vector<SentenceSpan> split_sentence_spans(const std::string& input) {
  std::vector<SentenceSpan> spans;
  const std::size_t n = input.size();
  std::size_t cursor = 0;  // start of the unconsumed region

  auto emit = [&](std::size_t end) {
    std::size_t begin = cursor;
    while (begin < end && is_ascii_space(input[begin])) ++begin;
    std::size_t last = end;
    while (last > begin && is_ascii_space(input[last - 1])) --last;
    if (last > begin) spans.push_back({begin, last});
    cursor = end;
  };

  for (std::size_t i = 0; i < n; ++i) {
    char c = input[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (c == '.' && is_abbreviation(input, i)) continue;
    std::size_t j = i + 1;
    while (j < n && is_ascii_space(input[j])) ++j;
    if (j == n) {
      emit(n);
      break;
    }
    if (j > i + 1 && is_ascii_upper(input[j])) emit(j);
  }
  if (cursor < n) emit(n);
  return spans;
}

std::vector<std::string> split_sentences(const std::string& input) {
  std::vector<std::string> out;
  for (const SentenceSpan& span : split_sentence_spans(input)) {
    out.push_back(input.substr(span.begin, span.end - span.begin));
  }
  return out;
}

namespace {

bool word_shaped(std::string_view core) {
  if (core.empty()) return false;
  if (!is_ascii_alpha(core.front()) || !is_ascii_alpha(core.back())) {
    return false;
  }
  for (char c : core) {
    if (!is_ascii_alpha(c) && c != '\'' && c != '-') return false;
  }
  return true;
}

}  // namespace

std::vector<Token> tokenize(const std::string& sentence, int sentence_index,
                            int word_offset) {
  std::vector<Token> tokens;
  int next_word_index = word_offset;
  std::size_t i = 0;
  const std::size_t n = sentence.size();

  auto push = [&](std::size_t begin, std::size_t end) {
    Token tok;
    tok.text = sentence.substr(begin, end - begin);
    tok.sentence_index = sentence_index;
    tok.offset = begin;
    tok.is_word = word_shaped(tok.text);
    if (tok.is_word) tok.word_index = next_word_index++;
    tokens.push_back(std::move(tok));
  };

  while (i < n) {
    while (i < n && is_ascii_space(sentence[i])) ++i;
    if (i >= n) break;
    std::size_t end = i;
    while (end < n && !is_ascii_space(sentence[end])) ++end;

    std::size_t core_begin = i;
    std::size_t core_end = end;
    while (core_begin < core_end && is_detachable_punct(sentence[core_begin])) {
      ++core_begin;
    }
    while (core_end > core_begin &&
           is_detachable_punct(sentence[core_end - 1])) {
      --core_end;
    }
    for (std::size_t p = i; p < core_begin; ++p) push(p, p + 1);
    if (core_end > core_begin) push(core_begin, core_end);
    for (std::size_t p = core_end; p < end; ++p) push(p, p + 1);
    i = end;
  }
  return tokens;
}

Tagger::Tagger(std::unordered_map<std::string, PosTag> lexicon)
    : lexicon_(std::move(lexicon)) {}

Tagger::Tagger() : Tagger(from_tsv(detail::kEmbeddedLexicon)) {}

Tagger Tagger::from_tsv(std::string_view tsv) {
  std::unordered_map<std::string, PosTag> lexicon;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= tsv.size()) {
    std::size_t eol = tsv.find('\n', pos);
    std::string_view line = tsv.substr(
        pos, eol == std::string_view::npos ? tsv.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? tsv.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw IoError("lexicon line " + std::to_string(line_no) +
                    ": expected word<TAB>TAG");
    }
    std::string word(line.substr(0, tab));
    std::optional<PosTag> tag = parse_tag(line.substr(tab + 1));
    if (!tag) {
      throw IoError("lexicon line " + std::to_string(line_no) +
                    ": unknown tag '" + std::string(line.substr(tab + 1)) +
                    "'");
    }
    lexicon.emplace(std::move(word), *tag);
  }
  return Tagger(std::move(lexicon));
}

Tagger Tagger::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_tsv(buf.str());
}

bool Tagger::lexicon_contains(const std::string& word) const {
  return lexicon_.count(word) > 0 || lexicon_.count(to_lower(word)) > 0;
}

std::size_t Tagger::lexicon_size() const { return lexicon_.size(); }

namespace {

bool looks_numeric(std::string_view word) {
  bool digit = false;
  for (char c : word) {
    if (is_ascii_digit(c)) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-' && c != '/' && c != ':' &&
               c != '%') {
      return false;
    }
  }
  return digit;
}

bool ends_with(std::string_view word, std::string_view suffix) {
  // rule fires only when a stem of >= 2 characters remains
  return word.size() >= suffix.size() + 2 &&
         word.compare(word.size() - suffix.size(), suffix.size(), suffix) ==
             0;
}

bool all_alpha_word(std::string_view word) {
  for (char c : word) {
    if (!is_ascii_alpha(c) && c != '\'' && c != '-') return false;
  }
  return !word.empty();
}

}  // namespace

PosTag Tagger::lookup_word(const Token& token,
                           bool first_word_of_sentence) const {
  auto hit = lexicon_.find(token.text);
  if (hit == lexicon_.end()) hit = lexicon_.find(to_lower(token.text));
  if (hit != lexicon_.end()) return hit->second;

  const std::string& w = token.text;
  if (looks_numeric(w)) return PosTag::CD;
  if (!first_word_of_sentence && is_ascii_upper(w.front()) &&
      all_alpha_word(w)) {
    return PosTag::NNP;
  }
  std::string lower = to_lower(w);
  if (ends_with(lower, "ly")) return PosTag::RB;
  if (ends_with(lower, "ing")) return PosTag::VBG;
  if (ends_with(lower, "ed")) return PosTag::VBD;
  if (ends_with(lower, "est")) return PosTag::JJS;
  if (ends_with(lower, "er")) return PosTag::JJR;
  if (ends_with(lower, "s")) return PosTag::NNS;
  if (all_alpha_word(lower)) return PosTag::NN;
  return PosTag::OTHER;
}

void Tagger::tag(std::vector<Token>& tokens) const {
  int last_sentence = -1;
  bool seen_word_in_sentence = false;
  for (Token& tok : tokens) {
    if (tok.sentence_index != last_sentence) {
      last_sentence = tok.sentence_index;
      seen_word_in_sentence = false;
    }
    if (!tok.is_word && !looks_numeric(tok.text)) {
      // punctuation and symbols; numerics still reach the CD rule
      tok.tag = lexicon_.count(to_lower(tok.text)) > 0
                    ? lexicon_.at(to_lower(tok.text))
                    : PosTag::OTHER;
      continue;
    }
    tok.tag = lookup_word(tok, !seen_word_in_sentence);
    if (tok.is_word) seen_word_in_sentence = true;
  }
}

const Tagger& default_tagger() {
  static const Tagger tagger;
  return tagger;
}

int Document::word_count() const {
  int count = 0;
  for (const Token& tok : tokens) {
    if (tok.is_word) ++count;
  }
  return count;
}

const Token& Document::word(int word_index) const {
  for (const Token& tok : tokens) {
    if (tok.word_index == word_index && tok.is_word) return tok;
  }
  throw std::out_of_range("word index " + std::to_string(word_index) +
                          " out of range");
}

std::vector<int> Document::words_in_sentence(int sentence_index) const {
  std::vector<int> out;
  for (const Token& tok : tokens) {
    if (tok.is_word && tok.sentence_index == sentence_index) {
      out.push_back(tok.word_index);
    }
  }
  return out;
}

Document build_document(std::string input, std::optional<std::string> label,
                        const Tagger& tagger) {
  Document doc;
  doc.original_text = std::move(input);
  doc.label = std::move(label);
  doc.sentence_spans = split_sentence_spans(doc.original_text);

  int word_offset = 0;
  for (std::size_t si = 0; si < doc.sentence_spans.size(); ++si) {
    const SentenceSpan& span = doc.sentence_spans[si];
    std::string sentence =
        doc.original_text.substr(span.begin, span.end - span.begin);
    std::vector<Token> toks =
        tokenize(sentence, static_cast<int>(si), word_offset);
    for (Token& tok : toks) {
      tok.offset += span.begin;
      if (tok.is_word) ++word_offset;
    }
    doc.sentences.push_back(std::move(sentence));
    doc.tokens.insert(doc.tokens.end(),
                      std::make_move_iterator(toks.begin()),
                      std::make_move_iterator(toks.end()));
  }
  tagger.tag(doc.tokens);
  return doc;
}

}  // namespace fastwordbug::text
