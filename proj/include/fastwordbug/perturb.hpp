#ifndef FASTWORDBUG_PERTURB_HPP
#define FASTWORDBUG_PERTURB_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fastwordbug/model.hpp"
#include "fastwordbug/text.hpp"

namespace fastwordbug::perturb {

// Deterministic random stream: identical seed and call sequence give
// identical outputs. uniform(n) draws from [0, n) by rejection sampling.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);
  std::uint64_t next();
  std::uint64_t uniform(std::uint64_t n);
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_[4];
};

enum class PerturbKind { Swap, Substitute, Delete, Insert };

std::string_view to_string(PerturbKind kind);

struct Perturbation {
  PerturbKind kind = PerturbKind::Swap;
  std::size_t position = 0;  // character index (insertion gap for Insert)
  std::optional<char> replacement_char;
  std::string original_word;
  std::string modified_word;
};

// Adjacent positions i where word[i] != word[i+1] and neither side is an
// apostrophe or hyphen. Empty means swap is not applicable.
std::vector<std::size_t> swap_candidates(const std::string& word);

// Swap two adjacent letters (uniform over swap_candidates). One draw.
// Throws std::invalid_argument for words shorter than 2 or without an
// eligible pair.
Perturbation swap_letters(const std::string& word, SeededRng& rng);

// Replace one character with a random a-z letter different from it,
// matching the original character's case. Draws: position, then letter.
Perturbation substitute_letter(const std::string& word, SeededRng& rng);

// Remove one character (uniform position; single draw). Requires length >= 2.
Perturbation delete_letter(const std::string& word, SeededRng& rng);

// Insert a random a-z letter at a uniform gap 0..len. Draws: gap, letter.
Perturbation insert_letter(const std::string& word, SeededRng& rng);

bool swap_applicable(const std::string& word);
bool delete_applicable(const std::string& word);

// A document under attack: the original tokens plus the retained word
// replacements, rendering the current adversarial text on demand.
class WorkingDoc {
 public:
  explicit WorkingDoc(const text::Document& doc) : doc_(&doc) {}

  const text::Document& document() const { return *doc_; }
  const std::string& current_word(int word_index) const;
  std::string render() const;
  std::string render_with(int word_index, const std::string& word) const;
  void apply(int word_index, std::string word);
  bool modified(int word_index) const {
    return replacements_.count(word_index) > 0;
  }

 private:
  const text::Document* doc_;
  std::unordered_map<int, std::string> replacements_;
};

struct BestModification {
  Perturbation perturbation;
  model::Prediction prediction;  // of the retained adversarial text
};

// Tries every applicable operator on the word (skipped operators spend no
// query), queries each candidate text, and retains the candidate with the
// largest strictly-positive confidence drop for class y. Ties follow the
// operator order swap, substitute, delete, insert. Returns nullopt (state
// untouched) when nothing lowers the confidence.
std::optional<BestModification> best_modification(
    WorkingDoc& state, int word_index, const model::Classifier& classifier,
    int y, double current_confidence, SeededRng& rng,
    model::QueryCounter& counter);

}  // namespace fastwordbug::perturb

#endif  // FASTWORDBUG_PERTURB_HPP
