#include "fastwordbug/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fastwordbug/errors.hpp"
#include "json.hpp"

namespace fastwordbug::scoring {

std::string_view to_string(Normalization normalization) {
  return normalization == Normalization::FrequencySoftmax
             ? "frequency_softmax"
             : "raw_softmax";
}

std::optional<Normalization> parse_normalization(std::string_view name) {
  if (name == "frequency_softmax" || name == "frequency") {
    return Normalization::FrequencySoftmax;
  }
  if (name == "raw_softmax" || name == "raw") {
    return Normalization::RawSoftmax;
  }
  return std::nullopt;
}

double PosWeights::weight(text::PosTag tag) const {
  auto it = weights.find(tag);
  return it == weights.end() ? 0.0 : it->second;
}

std::string PosWeights::to_json() const {
  nlohmann::json j;
  j["normalization"] = std::string(to_string(normalization));
  nlohmann::json counts_json = nlohmann::json::object();
  for (const auto& [tag, count] : counts) {
    counts_json[std::string(text::to_string(tag))] = count;
  }
  j["counts"] = std::move(counts_json);
  nlohmann::json weights_json = nlohmann::json::object();
  for (const auto& [tag, w] : weights) {
    weights_json[std::string(text::to_string(tag))] = w;
  }
  j["weights"] = std::move(weights_json);
  j["meta"] = {{"dataset", meta.dataset_id},
               {"classifier", meta.classifier_id},
               {"samples", meta.sample_count}};
  return j.dump(2);
}

void PosWeights::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write weights file: " + path);
  out << to_json() << '\n';
  if (!out) throw IoError("failed writing weights file: " + path);
}

PosWeights PosWeights::from_json(const std::string& json_text) {
  PosWeights pw;
  try {
    nlohmann::json j = nlohmann::json::parse(json_text);
    auto normalization =
        parse_normalization(j.at("normalization").get<std::string>());
    if (!normalization) {
      throw IoError("unknown normalization in weights file");
    }
    pw.normalization = *normalization;
    for (const auto& [name, value] : j.at("counts").items()) {
      auto tag = text::parse_tag(name);
      if (!tag) throw IoError("unknown tag in weights file: " + name);
      pw.counts[*tag] = value.get<long long>();
    }
    for (const auto& [name, value] : j.at("weights").items()) {
      auto tag = text::parse_tag(name);
      if (!tag) throw IoError("unknown tag in weights file: " + name);
      pw.weights[*tag] = value.get<double>();
    }
    if (j.contains("meta")) {
      const nlohmann::json& meta = j.at("meta");
      pw.meta.dataset_id = meta.value("dataset", "");
      pw.meta.classifier_id = meta.value("classifier", "");
      pw.meta.sample_count = meta.value("samples", 0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad weights JSON: ") + e.what());
  }
  return pw;
}

PosWeights PosWeights::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weights file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string text_without_word(const text::Document& doc, int word_index) {
  const text::Token& tok = doc.word(word_index);
  std::size_t begin = tok.offset;
  std::size_t end = tok.offset + tok.text.size();
  const std::string& body = doc.original_text;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  };
  if (end < body.size() && is_space(body[end])) {
    ++end;
  } else if (begin > 0 && is_space(body[begin - 1])) {
    --begin;
  }
  return body.substr(0, begin) + body.substr(end);
}

WordScore word_contribution(const text::Document& doc, int word_index,
                            const model::Classifier& classifier, int y,
                            double full_text_confidence,
                            model::QueryCounter& counter,
                            model::QueryPhase phase) {
  if (word_index < 0 || word_index >= doc.word_count()) {
    throw std::invalid_argument("word index out of range");
  }
  std::string reduced = text_without_word(doc, word_index);
  model::Prediction p = model::predict(classifier, reduced, counter, phase);
  WordScore score;
  score.word_index = word_index;
  score.contribution = full_text_confidence - p.confidences.at(y);
  score.queries_spent = 1;
  return score;
}

std::vector<int> sentence_scores(const text::Document& doc,
                                 const model::Classifier& classifier, int y,
                                 model::QueryCounter& counter, bool ascending,
                                 std::optional<long long> max_queries) {
  const int n = static_cast<int>(doc.sentences.size());
  if (n == 0) throw std::invalid_argument("document has no sentences");

  std::vector<double> confidence(n, 0.0);
  std::vector<char> scored(n, 0);
  for (int i = 0; i < n; ++i) {
    if (max_queries && counter.calls() >= *max_queries) break;
    model::Prediction p = model::predict(
        classifier, doc.sentences[i], counter,
        model::QueryPhase::SentenceScoring);
    confidence[i] = p.confidences.at(y);
    scored[i] = 1;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (scored[a] != scored[b]) return scored[a] > scored[b];
    if (!scored[a]) return false;  // unscored tail keeps document order
    return ascending ? confidence[a] < confidence[b]
                     : confidence[a] > confidence[b];
  });
  return order;
}

std::map<text::PosTag, double> softmax(
    const std::map<text::PosTag, double>& scores) {
  if (scores.empty()) throw std::invalid_argument("softmax of empty mapping");
  double peak = scores.begin()->second;
  for (const auto& [_, s] : scores) peak = std::max(peak, s);
  double sum = 0.0;
  std::map<text::PosTag, double> out;
  for (const auto& [tag, s] : scores) {
    double e = std::exp(s - peak);
    out[tag] = e;
    sum += e;
  }
  for (auto& [_, w] : out) w /= sum;
  return out;
}

PosWeights calibrate_pos_weights(
    const std::vector<std::pair<std::string, std::string>>& dataset,
    const model::Classifier& classifier, model::QueryCounter& counter,
    const CalibrationOptions& options) {
  if (dataset.empty()) {
    throw std::invalid_argument("calibration dataset is empty");
  }
  const text::Tagger& tagger =
      options.tagger ? *options.tagger : text::default_tagger();

  PosWeights pw;
  pw.normalization = options.normalization;
  pw.meta = options.meta;
  pw.meta.sample_count = static_cast<int>(dataset.size());

  for (const auto& [label, body] : dataset) {
    text::Document doc = text::build_document(body, label, tagger);
    model::Prediction full = model::predict(
        classifier, doc.original_text, counter,
        model::QueryPhase::Calibration);
    int y = classifier.class_index(label);
    if (full.label != y) continue;  // only correctly-classified documents
    const int words = doc.word_count();
    if (words == 0) continue;

    int best_word = -1;
    double best_drop = 0.0;
    for (int j = 0; j < words; ++j) {
      WordScore score =
          word_contribution(doc, j, classifier, y, full.confidences[y],
                            counter, model::QueryPhase::Calibration);
      if (best_word < 0 || score.contribution > best_drop) {
        best_word = j;
        best_drop = score.contribution;
      }
    }
    ++pw.counts[doc.word(best_word).tag];
  }

  if (pw.counts.empty()) {
    throw std::invalid_argument(
        "calibration found no correctly-classified documents with words");
  }

  std::map<text::PosTag, double> scores;
  double total = 0.0;
  for (const auto& [_, count] : pw.counts) total += count;
  for (const auto& [tag, count] : pw.counts) {
    scores[tag] = pw.normalization == Normalization::FrequencySoftmax
                      ? static_cast<double>(count) / total
                      : static_cast<double>(count);
  }
  pw.weights = softmax(scores);
  return pw;
}

}  // namespace fastwordbug::scoring
