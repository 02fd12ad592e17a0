#ifndef FASTWORDBUG_SCORING_HPP
#define FASTWORDBUG_SCORING_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fastwordbug/model.hpp"
#include "fastwordbug/text.hpp"

namespace fastwordbug::scoring {

enum class Normalization { FrequencySoftmax, RawSoftmax };

std::string_view to_string(Normalization normalization);
std::optional<Normalization> parse_normalization(std::string_view name);

struct CalibrationMeta {
  std::string dataset_id;
  std::string classifier_id;
  int sample_count = 0;
};

// Calibrated importance of each part-of-speech tag: counts holds how often a
// tag's word was the maximum-drop word, weights the softmax-normalized view.
struct PosWeights {
  std::map<text::PosTag, double> weights;
  std::map<text::PosTag, long long> counts;
  Normalization normalization = Normalization::FrequencySoftmax;
  CalibrationMeta meta;

  // 0.0 for tags never observed during calibration.
  double weight(text::PosTag tag) const;
  int tag_count() const { return static_cast<int>(counts.size()); }

  std::string to_json() const;
  void save(const std::string& path) const;
  static PosWeights from_json(const std::string& json_text);
  static PosWeights load(const std::string& path);
};

struct WordScore {
  int word_index = 0;
  double contribution = 0.0;  // may be negative
  int queries_spent = 0;      // at most 1 given the cached full-text value
};

// Text with one word removed: the token disappears together with one
// adjacent space (the following one when present, else the preceding one).
std::string text_without_word(const text::Document& doc, int word_index);

// Confidence drop on class y when word j is removed; spends exactly one
// query. full_text_confidence must be F_y of the unmodified document.
WordScore word_contribution(const text::Document& doc, int word_index,
                            const model::Classifier& classifier, int y,
                            double full_text_confidence,
                            model::QueryCounter& counter,
                            model::QueryPhase phase);

// Sentence indices ordered by standalone confidence for class y, highest
// first (ties keep document order); one query per sentence. When
// max_queries is set, sentences left unscored once counter.calls() reaches
// it are appended in document order. ascending flips the sort direction.
std::vector<int> sentence_scores(
    const text::Document& doc, const model::Classifier& classifier, int y,
    model::QueryCounter& counter, bool ascending = false,
    std::optional<long long> max_queries = std::nullopt);

// Max-shifted softmax; output sums to 1. Throws on an empty input.
std::map<text::PosTag, double> softmax(
    const std::map<text::PosTag, double>& scores);

struct CalibrationOptions {
  Normalization normalization = Normalization::FrequencySoftmax;
  CalibrationMeta meta;
  const text::Tagger* tagger = nullptr;  // default_tagger() when null
};

// For every correctly-classified document, finds the word whose removal
// drops the predicted-label confidence the most (ties: lowest word index)
// and counts its tag; weights are the softmax over relative tag frequencies
// (or raw counts under RawSoftmax). Spends N+1 queries per document of N
// words. Throws if the dataset is empty or every document is misclassified.
PosWeights calibrate_pos_weights(
    const std::vector<std::pair<std::string, std::string>>& dataset,
    const model::Classifier& classifier, model::QueryCounter& counter,
    const CalibrationOptions& options = {});

}  // namespace fastwordbug::scoring

#endif  // FASTWORDBUG_SCORING_HPP
