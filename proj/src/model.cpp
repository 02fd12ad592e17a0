#include "fastwordbug/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fastwordbug/errors.hpp"
#include "json.hpp"

namespace fastwordbug::model {

namespace {

int argmax(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("empty confidence vector");
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace

Prediction Prediction::from_confidences(std::vector<double> confidences) {
  Prediction p;
  p.confidences = std::move(confidences);
  p.label = argmax(p.confidences);
  return p;
}

void Prediction::validate() const {
  if (confidences.empty()) {
    throw std::invalid_argument("prediction has no confidences");
  }
  double sum = 0.0;
  for (double c : confidences) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw std::invalid_argument("confidence outside [0,1]");
    }
    sum += c;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("confidences sum to " + std::to_string(sum));
  }
  if (label != argmax(confidences)) {
    throw std::invalid_argument("label is not the argmax confidence");
  }
}

std::string_view to_string(QueryPhase phase) {
  switch (phase) {
    case QueryPhase::Initial: return "initial";
    case QueryPhase::Calibration: return "calibration";
    case QueryPhase::SentenceScoring: return "sentence_scoring";
    case QueryPhase::WordScoring: return "word_scoring";
    case QueryPhase::Modification: return "modification";
  }
  return "unknown";
}

long long QueryCounter::calls() const {
  return std::accumulate(marks_.begin(), marks_.end(), 0LL);
}

std::map<std::string, long long> QueryCounter::phase_marks() const {
  std::map<std::string, long long> out;
  for (int i = 0; i < kQueryPhaseCount; ++i) {
    out[std::string(to_string(static_cast<QueryPhase>(i)))] = marks_[i];
  }
  return out;
}

int Classifier::class_index(const std::string& name) const {
  const std::vector<std::string>& names = class_names();
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw std::invalid_argument("unknown label: " + name);
  }
  return static_cast<int>(it - names.begin());
}

Prediction predict(const Classifier& classifier, const std::string& input,
                   QueryCounter& counter, QueryPhase phase) {
  counter.record(phase);  // the query is spent even if the call fails
  return classifier.predict_raw(input);
}

std::vector<std::string> bow_tokenize(const std::string& input) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : input) {
    char lower = c;
    if (lower >= 'A' && lower <= 'Z') lower = static_cast<char>(c - 'A' + 'a');
    if ((lower >= 'a' && lower <= 'z') || (lower >= '0' && lower <= '9')) {
      current.push_back(lower);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

Prediction normalized_from_scores(std::vector<double> log_scores) {
  double peak = *std::max_element(log_scores.begin(), log_scores.end());
  double sum = 0.0;
  std::vector<double> probs(log_scores.size());
  for (std::size_t i = 0; i < log_scores.size(); ++i) {
    probs[i] = std::exp(log_scores[i] - peak);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return Prediction::from_confidences(std::move(probs));
}

}  // namespace

Prediction BowClassifier::predict_raw(const std::string& input) const {
  const int k = static_cast<int>(class_names_.size());
  std::vector<double> scores(k);

  if (variant_ == BowVariant::NaiveBayes) {
    scores = log_priors_;
    for (const std::string& word : bow_tokenize(input)) {
      auto it = vocabulary_.find(word);
      if (it == vocabulary_.end()) continue;  // OOV words carry no mass
      for (int c = 0; c < k; ++c) scores[c] += log_likelihoods_[c][it->second];
    }
    return normalized_from_scores(std::move(scores));
  }

  // logistic regression over presence features
  std::vector<char> seen(vocabulary_.size(), 0);
  std::vector<double> margins = biases_;
  for (const std::string& word : bow_tokenize(input)) {
    auto it = vocabulary_.find(word);
    if (it == vocabulary_.end() || seen[it->second]) continue;
    seen[it->second] = 1;
    for (int c = 0; c < k; ++c) margins[c] += weights_[c][it->second];
  }
  double sum = 0.0;
  std::vector<double> probs(k);
  for (int c = 0; c < k; ++c) {
    probs[c] = 1.0 / (1.0 + std::exp(-margins[c]));
    sum += probs[c];
  }
  for (double& p : probs) p /= sum;
  return Prediction::from_confidences(std::move(probs));
}

BowClassifier train_bow(
    const std::vector<std::pair<std::string, std::string>>& corpus,
    const TrainOptions& options) {
  if (corpus.empty()) throw std::invalid_argument("empty training corpus");

  BowClassifier clf;
  clf.variant_ = options.variant;
  for (const auto& [label, _] : corpus) {
    if (std::find(clf.class_names_.begin(), clf.class_names_.end(), label) ==
        clf.class_names_.end()) {
      clf.class_names_.push_back(label);
    }
  }
  const int k = static_cast<int>(clf.class_names_.size());
  if (k < 2) {
    throw std::invalid_argument("training corpus needs at least 2 classes");
  }

  std::vector<std::vector<std::string>> docs;
  std::vector<int> labels;
  docs.reserve(corpus.size());
  for (const auto& [label, body] : corpus) {
    docs.push_back(bow_tokenize(body));
    labels.push_back(clf.class_index(label));
    for (const std::string& word : docs.back()) {
      clf.vocabulary_.emplace(word,
                              static_cast<int>(clf.vocabulary_.size()));
    }
  }
  const int vocab = static_cast<int>(clf.vocabulary_.size());

  if (options.variant == BowVariant::NaiveBayes) {
    std::vector<long long> doc_counts(k, 0);
    std::vector<long long> token_totals(k, 0);
    std::vector<std::vector<long long>> word_counts(
        k, std::vector<long long>(vocab, 0));
    for (std::size_t d = 0; d < docs.size(); ++d) {
      ++doc_counts[labels[d]];
      for (const std::string& word : docs[d]) {
        ++word_counts[labels[d]][clf.vocabulary_.at(word)];
        ++token_totals[labels[d]];
      }
    }
    clf.log_priors_.resize(k);
    clf.log_likelihoods_.assign(k, std::vector<double>(vocab));
    for (int c = 0; c < k; ++c) {
      clf.log_priors_[c] = std::log(static_cast<double>(doc_counts[c]) /
                                    static_cast<double>(docs.size()));
      double denom = static_cast<double>(token_totals[c] + vocab);
      for (int w = 0; w < vocab; ++w) {
        clf.log_likelihoods_[c][w] =
            std::log((word_counts[c][w] + 1.0) / denom);  // add-one
      }
    }
    return clf;
  }

  // One-vs-rest logistic regression, full-batch gradient descent from a
  // zero start; fixed iteration count keeps it deterministic.
  std::vector<std::vector<int>> features(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<char> seen(vocab, 0);
    for (const std::string& word : docs[d]) {
      int idx = clf.vocabulary_.at(word);
      if (!seen[idx]) {
        seen[idx] = 1;
        features[d].push_back(idx);
      }
    }
  }
  clf.weights_.assign(k, std::vector<double>(vocab, 0.0));
  clf.biases_.assign(k, 0.0);
  const double n = static_cast<double>(docs.size());
  for (int c = 0; c < k; ++c) {
    std::vector<double>& w = clf.weights_[c];
    double& b = clf.biases_[c];
    std::vector<double> grad(vocab);
    for (int iter = 0; iter < options.iterations; ++iter) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double grad_b = 0.0;
      for (std::size_t d = 0; d < docs.size(); ++d) {
        double margin = b;
        for (int idx : features[d]) margin += w[idx];
        double p = 1.0 / (1.0 + std::exp(-margin));
        double err = p - (labels[d] == c ? 1.0 : 0.0);
        for (int idx : features[d]) grad[idx] += err;
        grad_b += err;
      }
      for (int j = 0; j < vocab; ++j) {
        w[j] -= options.learning_rate * (grad[j] / n + options.l2 * w[j]);
      }
      b -= options.learning_rate * grad_b / n;
    }
  }
  return clf;
}

std::string BowClassifier::to_json() const {
  nlohmann::json j;
  j["variant"] =
      variant_ == BowVariant::NaiveBayes ? "nb" : "logreg";
  j["class_names"] = class_names_;
  nlohmann::json vocab = nlohmann::json::object();
  for (const auto& [word, idx] : vocabulary_) vocab[word] = idx;
  j["vocabulary"] = std::move(vocab);
  if (variant_ == BowVariant::NaiveBayes) {
    j["parameters"] = {{"log_priors", log_priors_},
                       {"log_likelihoods", log_likelihoods_}};
  } else {
    j["parameters"] = {{"weights", weights_}, {"biases", biases_}};
  }
  return j.dump(2);
}

void BowClassifier::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write classifier file: " + path);
  out << to_json() << '\n';
  if (!out) throw IoError("failed writing classifier file: " + path);
}

BowClassifier BowClassifier::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad classifier JSON: ") + e.what());
  }
  BowClassifier clf;
  try {
    std::string variant = j.at("variant").get<std::string>();
    if (variant == "nb") {
      clf.variant_ = BowVariant::NaiveBayes;
    } else if (variant == "logreg") {
      clf.variant_ = BowVariant::LogisticRegression;
    } else {
      throw IoError("unknown classifier variant: " + variant);
    }
    clf.class_names_ = j.at("class_names").get<std::vector<std::string>>();
    for (const auto& [word, idx] : j.at("vocabulary").items()) {
      clf.vocabulary_[word] = idx.get<int>();
    }
    const nlohmann::json& params = j.at("parameters");
    if (clf.variant_ == BowVariant::NaiveBayes) {
      clf.log_priors_ = params.at("log_priors").get<std::vector<double>>();
      clf.log_likelihoods_ =
          params.at("log_likelihoods")
              .get<std::vector<std::vector<double>>>();
    } else {
      clf.weights_ =
          params.at("weights").get<std::vector<std::vector<double>>>();
      clf.biases_ = params.at("biases").get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad classifier JSON: ") + e.what());
  }
  return clf;
}

BowClassifier BowClassifier::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open classifier file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

ConstantClassifier::ConstantClassifier(std::vector<double> confidences,
                                       std::vector<std::string> class_names)
    : prediction_(Prediction::from_confidences(std::move(confidences))),
      class_names_(std::move(class_names)) {}

}  // namespace fastwordbug::model
