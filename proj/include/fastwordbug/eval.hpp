#ifndef FASTWORDBUG_EVAL_HPP
#define FASTWORDBUG_EVAL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fastwordbug/attack.hpp"
#include "fastwordbug/model.hpp"
#include "fastwordbug/scoring.hpp"

namespace fastwordbug::eval {

struct Dataset {
  std::string name;
  std::vector<std::pair<std::string, std::string>> examples;  // (label, text)
  std::vector<std::string> label_names;  // first-appearance order
};

// RFC 4180 CSV with a `label,text` header. Throws IoError on a missing or
// wrong header, an empty file, a bad row, or an empty text field.
Dataset load_dataset(const std::string& path);
Dataset parse_dataset_csv(const std::string& csv_text, std::string name);

struct NamedClassifier {
  std::string id;
  const model::Classifier* classifier = nullptr;
};

struct DocRecord {
  int repetition = 0;
  int doc_index = 0;  // index into the dataset
  std::string label;
  std::string adversarial_text;
  bool skipped = false;
  bool success = false;
  int original_label = 0;
  int final_label = 0;
  int n_perturbations = 0;
  double perturbed_fraction = 0.0;
  long long queries_total = 0;
  std::map<std::string, long long> queries_phases;
};

// One strategy x classifier aggregate; per-document records stay attached
// so every mean is recomputable.
struct ReportCell {
  std::string strategy;
  std::string classifier_id;
  double accuracy_before = 0.0;
  double accuracy_after = 0.0;
  double mean_queries_total = 0.0;  // over attacked (non-skipped) documents
  std::map<std::string, double> mean_queries_phases;
  double mean_perturbed_fraction = 0.0;  // over successful attacks
  int n_documents = 0;
  int n_attacked = 0;
  int n_skipped = 0;
  int n_success = 0;
  int n_repetitions = 0;
  std::vector<DocRecord> documents;
};

struct CalibrationInfo {
  std::string classifier_id;
  long long queries = 0;
  double queries_per_attacked_document = 0.0;  // amortized line item
  scoring::PosWeights weights;
};

struct BenchmarkReport {
  std::string dataset_name;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  int n_samples = 0;
  int n_repetitions = 0;
  std::vector<int> calibration_indices;
  std::vector<std::vector<int>> sample_indices;  // per repetition
  std::vector<CalibrationInfo> calibration;
  std::vector<ReportCell> cells;

  std::string to_json() const;
  static BenchmarkReport from_json(const std::string& json_text);
  std::string to_markdown() const;
};

struct BenchmarkOptions {
  attack::AttackConfig attack;
  int n_samples = 0;
  int n_repetitions = 1;
  // Documents reserved for tag-weight calibration, disjoint from every
  // repetition's attack sample. 0 means "as many as n_samples".
  int n_calibration = 0;
  scoring::Normalization normalization =
      scoring::Normalization::FrequencySoftmax;
};

// Runs every strategy x classifier over n_repetitions seeded samples.
// Tag weights are calibrated once per classifier on the reserved split and
// shared across repetitions. Deterministic for a fixed seed.
BenchmarkReport run_benchmark(const Dataset& dataset,
                              const std::vector<NamedClassifier>& classifiers,
                              const std::vector<attack::Strategy>& strategies,
                              const BenchmarkOptions& options);

void emit_report(const BenchmarkReport& report, const std::string& path,
                 const std::string& format);  // "json" | "markdown"

struct TransferDoc {
  std::string label;
  std::string adversarial_text;
};

struct SourceResults {
  std::string source_id;
  std::vector<std::string> label_names;
  std::vector<TransferDoc> docs;
};

struct TransferMatrix {
  std::vector<std::string> sources;
  std::vector<std::string> targets;
  std::vector<std::vector<double>> accuracy;  // [source][target]

  std::string to_json() const;
};

// accuracy[s][t] = Top-1 accuracy of target t on the adversarial texts
// crafted against source s; the diagonal therefore reproduces each source's
// own post-attack accuracy. Throws on a label-set mismatch.
TransferMatrix transferability(const std::vector<SourceResults>& results,
                               const std::vector<NamedClassifier>& targets);

// Serialization for the attack CLI output, reused by `transfer`.
std::string attack_results_to_json(
    const std::string& source_id, const Dataset& dataset,
    const attack::AttackConfig& config,
    const std::vector<std::string>& label_names,
    const std::vector<attack::AttackResult>& results);
SourceResults load_attack_results(const std::string& path);

}  // namespace fastwordbug::eval

#endif  // FASTWORDBUG_EVAL_HPP
