#ifndef FASTWORDBUG_MODEL_HPP
#define FASTWORDBUG_MODEL_HPP

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fastwordbug::model {

// Probability distribution over class labels. label is the argmax index,
// ties broken by lowest index.
struct Prediction {
  std::vector<double> confidences;
  int label = 0;

  static Prediction from_confidences(std::vector<double> confidences);
  // Throws std::invalid_argument unless confidences lie in [0,1], sum to 1
  // within 1e-9 and label is the argmax.
  void validate() const;
};

enum class QueryPhase {
  Initial,          // the first classification of a document under attack
  Calibration,      // tag-weight calibration
  SentenceScoring,  // per-sentence confidence queries
  WordScoring,      // per-word leave-one-out queries
  Modification,     // candidate perturbation queries
};
inline constexpr int kQueryPhaseCount = 5;

std::string_view to_string(QueryPhase phase);

// Per-run query ledger. One counter belongs to one attack run; totals are
// always the sum of the per-phase marks and only grow until reset().
class QueryCounter {
 public:
  void record(QueryPhase phase) { ++marks_[static_cast<int>(phase)]; }
  void reset() { marks_.fill(0); }

  long long calls() const;
  long long phase_calls(QueryPhase phase) const {
    return marks_[static_cast<int>(phase)];
  }
  std::map<std::string, long long> phase_marks() const;

 private:
  std::array<long long, kQueryPhaseCount> marks_{};
};

// Anything that can score a text. Implementations must be deterministic
// for identical inputs (the remote client is as deterministic as its
// endpoint).
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual Prediction predict_raw(const std::string& input) const = 0;
  virtual const std::vector<std::string>& class_names() const = 0;

  // Index of a label name. Throws std::invalid_argument for unknown labels.
  int class_index(const std::string& name) const;
};

// Counted entry point used by every attack and scoring loop: increments the
// counter first (the query is spent even if the classifier throws), then
// forwards to the classifier.
Prediction predict(const Classifier& classifier, const std::string& input,
                   QueryCounter& counter, QueryPhase phase);

enum class BowVariant { NaiveBayes, LogisticRegression };

struct TrainOptions {
  BowVariant variant = BowVariant::NaiveBayes;
  double learning_rate = 0.5;   // logreg only
  int iterations = 150;         // logreg only
  double l2 = 3e-3;             // logreg only
  std::uint64_t seed = 0;       // recorded; training itself is closed-form
};

// Bag-of-words classifier over lowercased alphanumeric tokens. Words
// outside the vocabulary contribute nothing to the features, so a single
// character edit removes a word's evidence entirely.
class BowClassifier : public Classifier {
 public:
  Prediction predict_raw(const std::string& input) const override;
  const std::vector<std::string>& class_names() const override {
    return class_names_;
  }

  BowVariant variant() const { return variant_; }
  const std::unordered_map<std::string, int>& vocabulary() const {
    return vocabulary_;
  }
  bool in_vocabulary(const std::string& word) const {
    return vocabulary_.count(word) > 0;
  }

  std::string to_json() const;
  void save(const std::string& path) const;
  static BowClassifier from_json(const std::string& json_text);
  static BowClassifier load(const std::string& path);

  friend BowClassifier train_bow(
      const std::vector<std::pair<std::string, std::string>>& corpus,
      const TrainOptions& options);

 private:
  BowVariant variant_ = BowVariant::NaiveBayes;
  std::vector<std::string> class_names_;
  std::unordered_map<std::string, int> vocabulary_;
  // NaiveBayes: log_priors_[c] + log_likelihoods_[c][w] (add-one smoothed).
  // LogisticRegression: biases_[c] + weights_[c][w] over presence features.
  std::vector<double> log_priors_;
  std::vector<std::vector<double>> log_likelihoods_;
  std::vector<double> biases_;
  std::vector<std::vector<double>> weights_;
};

// corpus entries are (label, text). Requires at least two distinct labels,
// each with at least one example; class order follows first appearance.
BowClassifier train_bow(
    const std::vector<std::pair<std::string, std::string>>& corpus,
    const TrainOptions& options = {});

// Lowercased runs of [a-z0-9]; everything else separates tokens.
std::vector<std::string> bow_tokenize(const std::string& input);

// Fixed-output classifier for tests and baselines.
class ConstantClassifier : public Classifier {
 public:
  ConstantClassifier(std::vector<double> confidences,
                     std::vector<std::string> class_names);
  Prediction predict_raw(const std::string&) const override {
    return prediction_;
  }
  const std::vector<std::string>& class_names() const override {
    return class_names_;
  }

 private:
  Prediction prediction_;
  std::vector<std::string> class_names_;
};

}  // namespace fastwordbug::model

#endif  // FASTWORDBUG_MODEL_HPP
