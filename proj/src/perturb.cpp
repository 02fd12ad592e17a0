#include "fastwordbug/perturb.hpp"

#include <algorithm>
#include <stdexcept>

namespace fastwordbug::perturb {

namespace {

// splitmix64, used only to expand the seed into the xoshiro state
std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
char to_lower_char(char c) {
  return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c;
}
bool is_joiner(char c) { return c == '\'' || c == '-'; }

}  // namespace

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t x = seed;
  for (std::uint64_t& s : state_) s = splitmix64(x);
}

// xoshiro256**
std::uint64_t SeededRng::next() {
  std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

std::uint64_t SeededRng::uniform(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform(0)");
  std::uint64_t limit = ~0ULL - ~0ULL % n;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

std::string_view to_string(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::Swap: return "swap";
    case PerturbKind::Substitute: return "substitute";
    case PerturbKind::Delete: return "delete";
    case PerturbKind::Insert: return "insert";
  }
  return "unknown";
}

std::vector<std::size_t> swap_candidates(const std::string& word) {
  std::vector<std::size_t> out;
  if (word.size() < 2) return out;
  for (std::size_t i = 0; i + 1 < word.size(); ++i) {
    if (word[i] == word[i + 1]) continue;
    if (is_joiner(word[i]) || is_joiner(word[i + 1])) continue;
    out.push_back(i);
  }
  return out;
}

bool swap_applicable(const std::string& word) {
  return !swap_candidates(word).empty();
}

bool delete_applicable(const std::string& word) { return word.size() >= 2; }

Perturbation swap_letters(const std::string& word, SeededRng& rng) {
  if (word.size() < 2) {
    throw std::invalid_argument("swap needs at least 2 characters");
  }
  std::vector<std::size_t> candidates = swap_candidates(word);
  if (candidates.empty()) {
    throw std::invalid_argument("no swappable adjacent pair in '" + word +
                                "'");
  }
  std::size_t pos = candidates[rng.uniform(candidates.size())];
  Perturbation p;
  p.kind = PerturbKind::Swap;
  p.position = pos;
  p.original_word = word;
  p.modified_word = word;
  std::swap(p.modified_word[pos], p.modified_word[pos + 1]);
  return p;
}

Perturbation substitute_letter(const std::string& word, SeededRng& rng) {
  if (word.empty()) {
    throw std::invalid_argument("substitute needs a non-empty word");
  }
  std::size_t pos = rng.uniform(word.size());
  char original = word[pos];
  char original_lower = to_lower_char(original);

  // draw from a-z minus the original letter (when it is one)
  std::uint64_t span = is_lower(original_lower) ? 25 : 26;
  std::uint64_t draw = rng.uniform(span);
  char replacement = static_cast<char>('a' + draw);
  if (is_lower(original_lower) && replacement >= original_lower) {
    replacement = static_cast<char>(replacement + 1);
  }
  if (is_upper(original)) {
    replacement = static_cast<char>(replacement - 'a' + 'A');
  }

  Perturbation p;
  p.kind = PerturbKind::Substitute;
  p.position = pos;
  p.replacement_char = replacement;
  p.original_word = word;
  p.modified_word = word;
  p.modified_word[pos] = replacement;
  return p;
}

Perturbation delete_letter(const std::string& word, SeededRng& rng) {
  if (word.size() < 2) {
    throw std::invalid_argument(
        "delete needs at least 2 characters (the token must survive)");
  }
  std::size_t pos = rng.uniform(word.size());
  Perturbation p;
  p.kind = PerturbKind::Delete;
  p.position = pos;
  p.original_word = word;
  p.modified_word = word.substr(0, pos) + word.substr(pos + 1);
  return p;
}

Perturbation insert_letter(const std::string& word, SeededRng& rng) {
  if (word.empty()) {
    throw std::invalid_argument("insert needs a non-empty word");
  }
  std::size_t gap = rng.uniform(word.size() + 1);
  char letter = static_cast<char>('a' + rng.uniform(26));
  Perturbation p;
  p.kind = PerturbKind::Insert;
  p.position = gap;
  p.replacement_char = letter;
  p.original_word = word;
  p.modified_word = word.substr(0, gap) + letter + word.substr(gap);
  return p;
}

const std::string& WorkingDoc::current_word(int word_index) const {
  auto it = replacements_.find(word_index);
  if (it != replacements_.end()) return it->second;
  return doc_->word(word_index).text;
}

std::string WorkingDoc::render() const {
  return render_with(-1, std::string());
}

std::string WorkingDoc::render_with(int word_index,
                                    const std::string& word) const {
  const std::string& body = doc_->original_text;
  std::string out;
  out.reserve(body.size() + 8);
  std::size_t cursor = 0;
  for (const text::Token& tok : doc_->tokens) {
    out.append(body, cursor, tok.offset - cursor);
    if (tok.is_word && tok.word_index == word_index) {
      out.append(word);
    } else if (tok.is_word && replacements_.count(tok.word_index)) {
      out.append(replacements_.at(tok.word_index));
    } else {
      out.append(tok.text);
    }
    cursor = tok.offset + tok.text.size();
  }
  out.append(body, cursor, body.size() - cursor);
  return out;
}

void WorkingDoc::apply(int word_index, std::string word) {
  doc_->word(word_index);  // bounds check
  replacements_[word_index] = std::move(word);
}

std::optional<BestModification> best_modification(
    WorkingDoc& state, int word_index, const model::Classifier& classifier,
    int y, double current_confidence, SeededRng& rng,
    model::QueryCounter& counter) {
  const std::string& word = state.current_word(word_index);
  if (word.empty()) {
    throw std::invalid_argument("cannot modify an empty word");
  }

  std::optional<BestModification> best;
  double best_drop = 0.0;

  auto consider = [&](Perturbation candidate) {
    std::string text = state.render_with(word_index, candidate.modified_word);
    model::Prediction p = model::predict(classifier, text, counter,
                                         model::QueryPhase::Modification);
    double drop = current_confidence - p.confidences.at(y);
    // strict >: earlier operators win ties (swap, substitute, delete, insert)
    if (drop > 0.0 && (!best || drop > best_drop)) {
      best = BestModification{std::move(candidate), std::move(p)};
      best_drop = drop;
    }
  };

  if (swap_applicable(word)) consider(swap_letters(word, rng));
  consider(substitute_letter(word, rng));
  if (delete_applicable(word)) consider(delete_letter(word, rng));
  consider(insert_letter(word, rng));

  if (best) state.apply(word_index, best->perturbation.modified_word);
  return best;
}

}  // namespace fastwordbug::perturb
