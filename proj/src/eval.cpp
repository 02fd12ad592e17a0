#include "fastwordbug/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "fastwordbug/errors.hpp"
#include "fastwordbug/perturb.hpp"
#include "json.hpp"

namespace fastwordbug::eval {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << body;
  if (!out) throw IoError("failed writing file: " + path);
}

// RFC 4180: quoted fields may hold commas, newlines and doubled quotes.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw IoError("CSV ends inside a quoted field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

}  // namespace

Dataset parse_dataset_csv(const std::string& csv_text, std::string name) {
  std::string body = csv_text;
  if (body.rfind("\xEF\xBB\xBF", 0) == 0) body.erase(0, 3);  // UTF-8 BOM
  std::vector<std::vector<std::string>> rows = parse_csv(body);
  if (rows.empty()) throw IoError("dataset is empty: " + name);
  if (rows[0].size() != 2 || rows[0][0] != "label" || rows[0][1] != "text") {
    throw IoError("dataset must start with a `label,text` header: " + name);
  }
  Dataset ds;
  ds.name = std::move(name);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2) {
      throw IoError("row " + std::to_string(r + 1) + " of " + ds.name +
                    " does not have exactly 2 fields");
    }
    const std::string& label = rows[r][0];
    const std::string& text = rows[r][1];
    if (text.empty()) {
      throw IoError("row " + std::to_string(r + 1) + " of " + ds.name +
                    " has empty text");
    }
    if (label.empty()) {
      throw IoError("row " + std::to_string(r + 1) + " of " + ds.name +
                    " has empty label");
    }
    if (std::find(ds.label_names.begin(), ds.label_names.end(), label) ==
        ds.label_names.end()) {
      ds.label_names.push_back(label);
    }
    ds.examples.emplace_back(label, text);
  }
  return ds;
}

Dataset load_dataset(const std::string& path) {
  std::string name = path;
  std::size_t slash = name.find_last_of("/\\");
  if (slash != std::string::npos) name = name.substr(slash + 1);
  std::size_t dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_dataset_csv(read_file(path), name);
}

namespace {

nlohmann::json doc_record_json(const DocRecord& rec) {
  return nlohmann::json{{"repetition", rec.repetition},
                        {"doc_index", rec.doc_index},
                        {"label", rec.label},
                        {"adversarial_text", rec.adversarial_text},
                        {"skipped", rec.skipped},
                        {"success", rec.success},
                        {"original_label", rec.original_label},
                        {"final_label", rec.final_label},
                        {"n_perturbations", rec.n_perturbations},
                        {"perturbed_fraction", rec.perturbed_fraction},
                        {"queries_total", rec.queries_total},
                        {"queries_phases", rec.queries_phases}};
}

DocRecord doc_record_from_json(const nlohmann::json& j) {
  DocRecord rec;
  rec.repetition = j.at("repetition").get<int>();
  rec.doc_index = j.at("doc_index").get<int>();
  rec.label = j.at("label").get<std::string>();
  rec.adversarial_text = j.at("adversarial_text").get<std::string>();
  rec.skipped = j.at("skipped").get<bool>();
  rec.success = j.at("success").get<bool>();
  rec.original_label = j.at("original_label").get<int>();
  rec.final_label = j.at("final_label").get<int>();
  rec.n_perturbations = j.at("n_perturbations").get<int>();
  rec.perturbed_fraction = j.at("perturbed_fraction").get<double>();
  rec.queries_total = j.at("queries_total").get<long long>();
  rec.queries_phases =
      j.at("queries_phases").get<std::map<std::string, long long>>();
  return rec;
}

DocRecord make_doc_record(int repetition, int doc_index,
                          const std::string& label,
                          const attack::AttackResult& result) {
  DocRecord rec;
  rec.repetition = repetition;
  rec.doc_index = doc_index;
  rec.label = label;
  rec.adversarial_text = result.adversarial_text;
  rec.skipped = result.skipped;
  rec.success = result.success;
  rec.original_label = result.original_prediction.label;
  rec.final_label = result.final_prediction.label;
  rec.n_perturbations = static_cast<int>(result.perturbations.size());
  rec.perturbed_fraction = result.perturbed_fraction;
  rec.queries_phases = result.queries.phase_marks();
  rec.queries_total = result.queries.calls();
  return rec;
}

// Aggregates a cell from its per-document records; used both when building
// reports and by tests recomputing the means.
void aggregate_cell(ReportCell& cell, const std::vector<std::string>& labels) {
  cell.n_documents = static_cast<int>(cell.documents.size());
  cell.n_attacked = 0;
  cell.n_skipped = 0;
  cell.n_success = 0;
  long long correct_before = 0;
  long long correct_after = 0;
  double queries = 0.0;
  std::map<std::string, double> phase_sums;
  double fraction_sum = 0.0;
  for (const DocRecord& rec : cell.documents) {
    int label_index = static_cast<int>(
        std::find(labels.begin(), labels.end(), rec.label) - labels.begin());
    if (rec.original_label == label_index) ++correct_before;
    if (rec.final_label == label_index) ++correct_after;
    if (rec.skipped) {
      ++cell.n_skipped;
      continue;
    }
    ++cell.n_attacked;
    queries += static_cast<double>(rec.queries_total);
    for (const auto& [phase, count] : rec.queries_phases) {
      phase_sums[phase] += static_cast<double>(count);
    }
    if (rec.success) {
      ++cell.n_success;
      fraction_sum += rec.perturbed_fraction;
    }
  }
  cell.accuracy_before =
      cell.n_documents == 0
          ? 0.0
          : static_cast<double>(correct_before) / cell.n_documents;
  cell.accuracy_after =
      cell.n_documents == 0
          ? 0.0
          : static_cast<double>(correct_after) / cell.n_documents;
  cell.mean_queries_total =
      cell.n_attacked == 0 ? 0.0 : queries / cell.n_attacked;
  cell.mean_queries_phases.clear();
  for (const auto& [phase, total] : phase_sums) {
    cell.mean_queries_phases[phase] = total / cell.n_attacked;
  }
  cell.mean_perturbed_fraction =
      cell.n_success == 0 ? 0.0 : fraction_sum / cell.n_success;
}

}  // namespace

BenchmarkReport run_benchmark(const Dataset& dataset,
                              const std::vector<NamedClassifier>& classifiers,
                              const std::vector<attack::Strategy>& strategies,
                              const BenchmarkOptions& options) {
  options.attack.validate();
  const int n = static_cast<int>(dataset.examples.size());
  if (options.n_samples <= 0) {
    throw std::invalid_argument("n_samples must be positive");
  }
  if (options.n_samples > n) {
    throw std::invalid_argument("n_samples exceeds the dataset size");
  }
  if (options.n_repetitions <= 0) {
    throw std::invalid_argument("n_repetitions must be positive");
  }
  if (classifiers.empty()) {
    throw std::invalid_argument("no classifiers given");
  }

  bool needs_weights = false;
  for (attack::Strategy s : strategies) {
    if (s == attack::Strategy::FastWordBug ||
        s == attack::Strategy::FastWordBugRescored) {
      needs_weights = true;
    }
  }

  BenchmarkReport report;
  report.dataset_name = dataset.name;
  report.seed = options.attack.seed;
  report.epsilon = options.attack.epsilon;
  report.n_samples = options.n_samples;
  report.n_repetitions = options.n_repetitions;

  // Master shuffle: the calibration split comes off the top, attack samples
  // are drawn from the remainder, so the two stay disjoint in every
  // repetition.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  perturb::SeededRng master(options.attack.seed);
  for (int i = n - 1; i > 0; --i) {
    std::swap(perm[i],
              perm[master.uniform(static_cast<std::uint64_t>(i) + 1)]);
  }
  int n_calibration =
      options.n_calibration > 0 ? options.n_calibration : options.n_samples;
  n_calibration = std::min(n_calibration, n - options.n_samples);
  if (needs_weights && n_calibration <= 0) {
    throw std::invalid_argument(
        "dataset too small to hold a calibration split next to n_samples");
  }
  report.calibration_indices.assign(perm.begin(),
                                    perm.begin() + n_calibration);
  std::vector<int> pool(perm.begin() + n_calibration, perm.end());
  if (options.n_samples > static_cast<int>(pool.size())) {
    throw std::invalid_argument(
        "n_samples exceeds the dataset size minus the calibration split");
  }

  std::unordered_map<std::string, scoring::PosWeights> weights_by_classifier;
  for (const NamedClassifier& named : classifiers) {
    CalibrationInfo info;
    info.classifier_id = named.id;
    if (needs_weights) {
      std::vector<std::pair<std::string, std::string>> calib;
      for (int idx : report.calibration_indices) {
        calib.push_back(dataset.examples[idx]);
      }
      model::QueryCounter counter;
      scoring::CalibrationOptions copts;
      copts.normalization = options.normalization;
      copts.meta.dataset_id = dataset.name;
      copts.meta.classifier_id = named.id;
      info.weights = scoring::calibrate_pos_weights(calib, *named.classifier,
                                                    counter, copts);
      info.queries = counter.calls();
      info.queries_per_attacked_document =
          static_cast<double>(info.queries) /
          (static_cast<double>(options.n_samples) * options.n_repetitions);
      weights_by_classifier.emplace(named.id, info.weights);
    }
    report.calibration.push_back(std::move(info));
  }

  // Per-repetition attack samples (without replacement).
  for (int rep = 0; rep < options.n_repetitions; ++rep) {
    perturb::SeededRng rng(options.attack.seed +
                           0x9e3779b97f4a7c15ULL *
                               (static_cast<std::uint64_t>(rep) + 1));
    std::vector<int> draw = pool;
    for (int i = static_cast<int>(draw.size()) - 1; i > 0; --i) {
      std::swap(draw[i],
                draw[rng.uniform(static_cast<std::uint64_t>(i) + 1)]);
    }
    draw.resize(options.n_samples);
    report.sample_indices.push_back(std::move(draw));
  }

  std::unordered_map<int, text::Document> documents;
  auto document_for = [&](int idx) -> const text::Document& {
    auto it = documents.find(idx);
    if (it == documents.end()) {
      const auto& [label, body] = dataset.examples[idx];
      it = documents.emplace(idx, text::build_document(body, label)).first;
    }
    return it->second;
  };

  for (attack::Strategy strategy : strategies) {
    for (const NamedClassifier& named : classifiers) {
      ReportCell cell;
      cell.strategy = std::string(attack::to_string(strategy));
      cell.classifier_id = named.id;
      cell.n_repetitions = options.n_repetitions;
      const scoring::PosWeights* weights = nullptr;
      auto wit = weights_by_classifier.find(named.id);
      if (wit != weights_by_classifier.end()) weights = &wit->second;

      for (int rep = 0; rep < options.n_repetitions; ++rep) {
        for (int idx : report.sample_indices[rep]) {
          attack::AttackConfig config = options.attack;
          config.strategy = strategy;
          config.seed =
              options.attack.seed ^ static_cast<std::uint64_t>(idx);
          attack::AttackResult result =
              attack::run_attack(document_for(idx), *named.classifier,
                                 weights, config);
          cell.documents.push_back(make_doc_record(
              rep, idx, dataset.examples[idx].first, result));
        }
      }
      aggregate_cell(cell, dataset.label_names);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

std::string BenchmarkReport::to_json() const {
  nlohmann::json j;
  j["dataset"] = dataset_name;
  j["seed"] = seed;
  j["epsilon"] = epsilon;
  j["n_samples"] = n_samples;
  j["n_repetitions"] = n_repetitions;
  j["calibration_indices"] = calibration_indices;
  j["sample_indices"] = sample_indices;
  nlohmann::json calib = nlohmann::json::array();
  for (const CalibrationInfo& info : calibration) {
    calib.push_back(
        {{"classifier", info.classifier_id},
         {"queries", info.queries},
         {"queries_per_attacked_document",
          info.queries_per_attacked_document},
         {"weights", nlohmann::json::parse(info.weights.to_json())}});
  }
  j["calibration"] = std::move(calib);
  nlohmann::json cells_json = nlohmann::json::array();
  for (const ReportCell& cell : cells) {
    nlohmann::json docs = nlohmann::json::array();
    for (const DocRecord& rec : cell.documents) {
      docs.push_back(doc_record_json(rec));
    }
    cells_json.push_back({{"strategy", cell.strategy},
                     {"classifier", cell.classifier_id},
                     {"accuracy_before", cell.accuracy_before},
                     {"accuracy_after", cell.accuracy_after},
                     {"mean_queries_total", cell.mean_queries_total},
                     {"mean_queries_phases", cell.mean_queries_phases},
                     {"mean_perturbed_fraction",
                      cell.mean_perturbed_fraction},
                     {"n_documents", cell.n_documents},
                     {"n_attacked", cell.n_attacked},
                     {"n_skipped", cell.n_skipped},
                     {"n_success", cell.n_success},
                     {"n_repetitions", cell.n_repetitions},
                     {"documents", std::move(docs)}});
  }
  j["cells"] = std::move(cells_json);
  return j.dump(2);
}

BenchmarkReport BenchmarkReport::from_json(const std::string& json_text) {
  BenchmarkReport report;
  try {
    nlohmann::json j = nlohmann::json::parse(json_text);
    report.dataset_name = j.at("dataset").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.epsilon = j.at("epsilon").get<double>();
    report.n_samples = j.at("n_samples").get<int>();
    report.n_repetitions = j.at("n_repetitions").get<int>();
    report.calibration_indices =
        j.at("calibration_indices").get<std::vector<int>>();
    report.sample_indices =
        j.at("sample_indices").get<std::vector<std::vector<int>>>();
    for (const nlohmann::json& c : j.at("calibration")) {
      CalibrationInfo info;
      info.classifier_id = c.at("classifier").get<std::string>();
      info.queries = c.at("queries").get<long long>();
      info.queries_per_attacked_document =
          c.at("queries_per_attacked_document").get<double>();
      info.weights = scoring::PosWeights::from_json(c.at("weights").dump());
      report.calibration.push_back(std::move(info));
    }
    for (const nlohmann::json& c : j.at("cells")) {
      ReportCell cell;
      cell.strategy = c.at("strategy").get<std::string>();
      cell.classifier_id = c.at("classifier").get<std::string>();
      cell.accuracy_before = c.at("accuracy_before").get<double>();
      cell.accuracy_after = c.at("accuracy_after").get<double>();
      cell.mean_queries_total = c.at("mean_queries_total").get<double>();
      cell.mean_queries_phases =
          c.at("mean_queries_phases").get<std::map<std::string, double>>();
      cell.mean_perturbed_fraction =
          c.at("mean_perturbed_fraction").get<double>();
      cell.n_documents = c.at("n_documents").get<int>();
      cell.n_attacked = c.at("n_attacked").get<int>();
      cell.n_skipped = c.at("n_skipped").get<int>();
      cell.n_success = c.at("n_success").get<int>();
      cell.n_repetitions = c.at("n_repetitions").get<int>();
      for (const nlohmann::json& d : c.at("documents")) {
        cell.documents.push_back(doc_record_from_json(d));
      }
      report.cells.push_back(std::move(cell));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad report JSON: ") + e.what());
  }
  return report;
}

namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", fraction * 100.0);
  return buf;
}

std::string fixed2(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

}  // namespace

std::string BenchmarkReport::to_markdown() const {
  // column layout mirrors the usual attack-benchmark tables:
  // Accuracy / #Model Called / Perturbed Word, one column per classifier
  std::vector<std::string> classifier_ids;
  std::vector<std::string> strategy_names;
  for (const ReportCell& cell : cells) {
    if (std::find(classifier_ids.begin(), classifier_ids.end(),
                  cell.classifier_id) == classifier_ids.end()) {
      classifier_ids.push_back(cell.classifier_id);
    }
    if (std::find(strategy_names.begin(), strategy_names.end(),
                  cell.strategy) == strategy_names.end()) {
      strategy_names.push_back(cell.strategy);
    }
  }
  auto cell_for = [&](const std::string& strategy,
                      const std::string& classifier) -> const ReportCell* {
    for (const ReportCell& cell : cells) {
      if (cell.strategy == strategy && cell.classifier_id == classifier) {
        return &cell;
      }
    }
    return nullptr;
  };

  std::ostringstream out;
  out << "# Benchmark: " << dataset_name << "\n\n";
  out << "samples=" << n_samples << " repetitions=" << n_repetitions
      << " epsilon=" << epsilon << " seed=" << seed << "\n\n";
  out << "| Strategy |";
  for (const auto& group : {"Accuracy", "#Model Called", "Perturbed Word"}) {
    for (const std::string& id : classifier_ids) {
      out << ' ' << group << " (" << id << ") |";
    }
  }
  out << "\n|---|";
  for (std::size_t i = 0; i < classifier_ids.size() * 3; ++i) out << "---|";
  out << "\n";
  for (const std::string& strategy : strategy_names) {
    out << "| " << strategy << " |";
    for (const std::string& id : classifier_ids) {
      const ReportCell* cell = cell_for(strategy, id);
      out << ' ' << (cell ? percent(cell->accuracy_after) : "-") << " |";
    }
    for (const std::string& id : classifier_ids) {
      const ReportCell* cell = cell_for(strategy, id);
      out << ' ' << (cell ? fixed2(cell->mean_queries_total) : "-") << " |";
    }
    for (const std::string& id : classifier_ids) {
      const ReportCell* cell = cell_for(strategy, id);
      out << ' ' << (cell ? percent(cell->mean_perturbed_fraction) : "-")
          << " |";
    }
    out << "\n";
  }
  return out.str();
}

void emit_report(const BenchmarkReport& report, const std::string& path,
                 const std::string& format) {
  if (format == "json") {
    write_file(path, report.to_json() + "\n");
  } else if (format == "markdown") {
    write_file(path, report.to_markdown());
  } else {
    throw std::invalid_argument("unknown report format: " + format);
  }
}

std::string TransferMatrix::to_json() const {
  nlohmann::json j;
  j["sources"] = sources;
  j["targets"] = targets;
  j["accuracy"] = accuracy;
  return j.dump(2);
}

TransferMatrix transferability(const std::vector<SourceResults>& results,
                               const std::vector<NamedClassifier>& targets) {
  TransferMatrix matrix;
  for (const SourceResults& source : results) {
    matrix.sources.push_back(source.source_id);
  }
  for (const NamedClassifier& target : targets) {
    matrix.targets.push_back(target.id);
  }
  for (const SourceResults& source : results) {
    std::vector<std::string> source_labels = source.label_names;
    std::sort(source_labels.begin(), source_labels.end());
    std::vector<double> row;
    for (const NamedClassifier& target : targets) {
      std::vector<std::string> target_labels =
          target.classifier->class_names();
      std::sort(target_labels.begin(), target_labels.end());
      if (source_labels != target_labels) {
        throw std::invalid_argument(
            "label sets of source " + source.source_id + " and target " +
            target.id + " do not match");
      }
      long long correct = 0;
      for (const TransferDoc& doc : source.docs) {
        model::Prediction p =
            target.classifier->predict_raw(doc.adversarial_text);
        if (target.classifier->class_names()[p.label] == doc.label) {
          ++correct;
        }
      }
      row.push_back(source.docs.empty()
                        ? 0.0
                        : static_cast<double>(correct) / source.docs.size());
    }
    matrix.accuracy.push_back(std::move(row));
  }
  return matrix;
}

std::string attack_results_to_json(
    const std::string& source_id, const Dataset& dataset,
    const attack::AttackConfig& config,
    const std::vector<std::string>& label_names,
    const std::vector<attack::AttackResult>& results) {
  nlohmann::json j;
  j["source"] = source_id;
  j["dataset"] = dataset.name;
  j["strategy"] = std::string(attack::to_string(config.strategy));
  j["epsilon"] = config.epsilon;
  if (config.tag_threshold) {
    j["tag_threshold"] = *config.tag_threshold;
  } else {
    j["tag_threshold"] = "auto";
  }
  j["seed"] = config.seed;
  j["label_names"] = label_names;

  ReportCell summary;
  nlohmann::json docs = nlohmann::json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const attack::AttackResult& result = results[i];
    nlohmann::json perturbations = nlohmann::json::array();
    for (const attack::AppliedPerturbation& applied : result.perturbations) {
      nlohmann::json p = {
          {"word_index", applied.word_index},
          {"kind",
           std::string(perturb::to_string(applied.perturbation.kind))},
          {"position", applied.perturbation.position},
          {"original_word", applied.perturbation.original_word},
          {"modified_word", applied.perturbation.modified_word}};
      if (applied.perturbation.replacement_char) {
        p["replacement_char"] =
            std::string(1, *applied.perturbation.replacement_char);
      }
      perturbations.push_back(std::move(p));
    }
    docs.push_back(
        {{"doc_index", static_cast<int>(i)},
         {"label", dataset.examples[i].first},
         {"adversarial_text", result.adversarial_text},
         {"skipped", result.skipped},
         {"success", result.success},
         {"original_prediction",
          {{"label", result.original_prediction.label},
           {"confidences", result.original_prediction.confidences}}},
         {"final_prediction",
          {{"label", result.final_prediction.label},
           {"confidences", result.final_prediction.confidences}}},
         {"perturbations", std::move(perturbations)},
         {"perturbed_fraction", result.perturbed_fraction},
         {"queries",
          {{"total", result.queries.calls()},
           {"phases", result.queries.phase_marks()}}}});
    summary.documents.push_back(make_doc_record(
        0, static_cast<int>(i), dataset.examples[i].first, result));
  }
  j["results"] = std::move(docs);
  aggregate_cell(summary, dataset.label_names);
  j["summary"] = {{"accuracy_before", summary.accuracy_before},
                  {"accuracy_after", summary.accuracy_after},
                  {"mean_queries_total", summary.mean_queries_total},
                  {"mean_queries_phases", summary.mean_queries_phases},
                  {"mean_perturbed_fraction",
                   summary.mean_perturbed_fraction},
                  {"n_documents", summary.n_documents},
                  {"n_attacked", summary.n_attacked},
                  {"n_skipped", summary.n_skipped},
                  {"n_success", summary.n_success}};
  return j.dump(2);
}

SourceResults load_attack_results(const std::string& path) {
  SourceResults out;
  try {
    nlohmann::json j = nlohmann::json::parse(read_file(path));
    out.source_id = j.value("source", path);
    out.label_names = j.at("label_names").get<std::vector<std::string>>();
    for (const nlohmann::json& d : j.at("results")) {
      TransferDoc doc;
      doc.label = d.at("label").get<std::string>();
      doc.adversarial_text = d.at("adversarial_text").get<std::string>();
      out.docs.push_back(std::move(doc));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad attack results JSON: ") + e.what());
  }
  return out;
}

}  // namespace fastwordbug::eval
