#include <chrono>
#include <cstdio>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fastwordbug/attack.hpp"
#include "fastwordbug/errors.hpp"
#include "fastwordbug/eval.hpp"
#include "fastwordbug/model.hpp"
#include "fastwordbug/remote.hpp"
#include "fastwordbug/scoring.hpp"

using namespace fastwordbug;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// model spec grammar: file:<path> or http:<url>
struct LoadedModel {
  std::string id;
  std::unique_ptr<model::Classifier> classifier;
};

std::string stem_of(const std::string& path) {
  std::string name = path;
  std::size_t slash = name.find_last_of("/\\");
  if (slash != std::string::npos) name = name.substr(slash + 1);
  std::size_t dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return name;
}

LoadedModel load_model(const std::string& spec,
                       const std::vector<std::string>& label_names) {
  if (spec.rfind("file:", 0) == 0) {
    std::string path = spec.substr(5);
    LoadedModel out;
    out.id = stem_of(path);
    out.classifier = std::make_unique<model::BowClassifier>(
        model::BowClassifier::load(path));
    return out;
  }
  if (spec.rfind("http:", 0) == 0) {
    std::string url = spec;
    if (spec.rfind("http://", 0) != 0) url = "http://" + spec.substr(5);
    if (label_names.empty()) {
      throw UsageError(
          "remote models need a dataset to supply the label names");
    }
    LoadedModel out;
    out.id = url.substr(7);
    out.classifier = remote::remote_classifier(url, label_names);
    return out;
  }
  throw UsageError("model spec must be file:<path> or http:<url>, got: " +
                   spec);
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(csv.substr(start));
      break;
    }
    out.push_back(csv.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_threshold(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw UsageError("--tag-threshold must be 'auto' or a number");
  }
}

attack::Strategy parse_strategy_or_throw(const std::string& name) {
  auto strategy = attack::parse_strategy(name);
  if (!strategy) throw UsageError("unknown strategy: " + name);
  return *strategy;
}

void write_text(const std::string& path, const std::string& body) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot write file: " + path);
  bool ok = std::fwrite(body.data(), 1, body.size(), f) == body.size();
  ok = std::fclose(f) == 0 && ok;
  if (!ok) throw IoError("failed writing file: " + path);
}

int run_train(const std::string& data, const std::string& variant,
              const std::string& out, std::uint64_t seed) {
  eval::Dataset dataset = eval::load_dataset(data);
  model::TrainOptions options;
  options.seed = seed;
  if (variant == "nb") {
    options.variant = model::BowVariant::NaiveBayes;
  } else if (variant == "logreg") {
    options.variant = model::BowVariant::LogisticRegression;
  } else {
    throw UsageError("--variant must be nb or logreg");
  }
  model::BowClassifier clf = model::train_bow(dataset.examples, options);
  clf.save(out);
  std::printf("trained %s on %zu docs (%zu classes, %zu words) -> %s\n",
              variant.c_str(), dataset.examples.size(),
              clf.class_names().size(), clf.vocabulary().size(),
              out.c_str());
  return 0;
}

int run_calibrate(const std::string& data, const std::string& model_spec,
                  const std::string& normalization, const std::string& out,
                  std::uint64_t seed) {
  eval::Dataset dataset = eval::load_dataset(data);
  LoadedModel loaded = load_model(model_spec, dataset.label_names);
  auto parsed = scoring::parse_normalization(normalization);
  if (!parsed) {
    throw UsageError("--normalization must be frequency or raw");
  }
  scoring::CalibrationOptions options;
  options.normalization = *parsed;
  options.meta.dataset_id = dataset.name;
  options.meta.classifier_id = loaded.id;
  (void)seed;  // calibration is deterministic; recorded for provenance only
  model::QueryCounter counter;
  scoring::PosWeights weights = scoring::calibrate_pos_weights(
      dataset.examples, *loaded.classifier, counter, options);
  weights.save(out);
  std::printf("calibrated on %zu docs, %lld queries, %d tags -> %s\n",
              dataset.examples.size(), counter.calls(), weights.tag_count(),
              out.c_str());
  return 0;
}

int run_attack_cmd(const std::string& data, const std::string& model_spec,
                   const std::string& weights_path,
                   const std::string& strategy_name, double epsilon,
                   const std::string& threshold, std::uint64_t seed,
                   std::optional<long long> max_queries,
                   const std::string& out) {
  eval::Dataset dataset = eval::load_dataset(data);
  LoadedModel loaded = load_model(model_spec, dataset.label_names);
  attack::AttackConfig config;
  config.strategy = parse_strategy_or_throw(strategy_name);
  config.epsilon = epsilon;
  config.tag_threshold = parse_threshold(threshold);
  config.max_queries = max_queries;

  scoring::PosWeights weights;
  const scoring::PosWeights* weights_ptr = nullptr;
  bool needs_weights = config.strategy == attack::Strategy::FastWordBug ||
                       config.strategy ==
                           attack::Strategy::FastWordBugRescored;
  if (!weights_path.empty()) {
    weights = scoring::PosWeights::load(weights_path);
    weights_ptr = &weights;
  } else if (needs_weights) {
    throw UsageError("--weights is required for strategy " + strategy_name);
  }

  std::vector<attack::AttackResult> results;
  for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
    const auto& [label, body] = dataset.examples[i];
    text::Document doc = text::build_document(body, label);
    attack::AttackConfig doc_config = config;
    doc_config.seed = seed ^ static_cast<std::uint64_t>(i);
    results.push_back(
        attack::run_attack(doc, *loaded.classifier, weights_ptr,
                           doc_config));
  }
  attack::AttackConfig meta = config;
  meta.seed = seed;
  write_text(out, eval::attack_results_to_json(loaded.id, dataset, meta,
                                               dataset.label_names,
                                               results) +
                      "\n");
  long long flipped = 0;
  for (const auto& r : results) flipped += r.success ? 1 : 0;
  std::printf("attacked %zu docs with %s: %lld flipped -> %s\n",
              results.size(), strategy_name.c_str(), flipped, out.c_str());
  return 0;
}

int run_benchmark_cmd(const std::string& data, const std::string& models,
                      const std::string& strategies, int samples, int reps,
                      int calibration, double epsilon,
                      const std::string& threshold,
                      const std::string& normalization, std::uint64_t seed,
                      const std::string& out, const std::string& markdown) {
  eval::Dataset dataset = eval::load_dataset(data);
  std::vector<LoadedModel> loaded;
  std::vector<eval::NamedClassifier> classifiers;
  for (const std::string& spec : split_list(models)) {
    loaded.push_back(load_model(spec, dataset.label_names));
  }
  for (const LoadedModel& m : loaded) {
    classifiers.push_back({m.id, m.classifier.get()});
  }
  std::vector<attack::Strategy> strategy_list;
  for (const std::string& name : split_list(strategies)) {
    strategy_list.push_back(parse_strategy_or_throw(name));
  }
  auto parsed_norm = scoring::parse_normalization(normalization);
  if (!parsed_norm) {
    throw UsageError("--normalization must be frequency or raw");
  }
  eval::BenchmarkOptions options;
  options.attack.epsilon = epsilon;
  options.attack.tag_threshold = parse_threshold(threshold);
  options.attack.seed = seed;
  options.n_samples = samples;
  options.n_repetitions = reps;
  options.n_calibration = calibration;
  options.normalization = *parsed_norm;
  eval::BenchmarkReport report =
      eval::run_benchmark(dataset, classifiers, strategy_list, options);
  eval::emit_report(report, out, "json");
  if (!markdown.empty()) eval::emit_report(report, markdown, "markdown");
  std::printf("benchmark: %zu cells -> %s\n", report.cells.size(),
              out.c_str());
  return 0;
}

int run_transfer(const std::string& results_list, const std::string& models,
                 const std::string& out) {
  std::vector<eval::SourceResults> sources;
  for (const std::string& path : split_list(results_list)) {
    sources.push_back(eval::load_attack_results(path));
  }
  if (sources.empty()) throw UsageError("no results files given");
  std::vector<LoadedModel> loaded;
  std::vector<eval::NamedClassifier> targets;
  for (const std::string& spec : split_list(models)) {
    loaded.push_back(load_model(spec, sources.front().label_names));
  }
  for (const LoadedModel& m : loaded) {
    targets.push_back({m.id, m.classifier.get()});
  }
  eval::TransferMatrix matrix = eval::transferability(sources, targets);
  write_text(out, matrix.to_json() + "\n");
  std::printf("transfer matrix %zux%zu -> %s\n", matrix.sources.size(),
              matrix.targets.size(), out.c_str());
  return 0;
}

int run_serve_mock(const std::string& model_path, int port) {
  remote::MockServer server(model::BowClassifier::load(model_path));
  int bound = server.start(port);
  server.wait_until_ready();
  std::printf("mock classifier listening on http://127.0.0.1:%d/predict\n",
              bound);
  std::fflush(stdout);
  while (true) {
    std::this_thread::sleep_for(std::chrono::seconds(3600));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"query-efficient black-box attacks on text classifiers"};
  app.require_subcommand(1);

  std::string data, model_spec, models, weights_path, strategy, strategies;
  std::string out, markdown, variant = "nb", normalization = "frequency";
  std::string threshold = "auto", results_list;
  double epsilon = 0.1;
  int samples = 100, reps = 1, calibration = 0, port = 8080;
  std::uint64_t seed = 0;
  long long max_queries = -1;

  CLI::App* train = app.add_subcommand("train", "train a bundled classifier");
  train->add_option("--data", data, "training CSV (label,text)")->required();
  train->add_option("--variant", variant, "nb | logreg");
  train->add_option("--out", out, "output model JSON")->required();
  train->add_option("--seed", seed, "training seed");

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "calibrate tag weights");
  calibrate->add_option("--data", data, "calibration CSV")->required();
  calibrate->add_option("--model", model_spec, "file:<path> | http:<url>")
      ->required();
  calibrate->add_option("--normalization", normalization,
                        "frequency | raw");
  calibrate->add_option("--out", out, "output weights JSON")->required();
  calibrate->add_option("--seed", seed, "recorded seed");

  CLI::App* attack_cmd =
      app.add_subcommand("attack", "attack every document of a CSV");
  attack_cmd->add_option("--data", data, "CSV of documents")->required();
  attack_cmd->add_option("--model", model_spec, "file:<path> | http:<url>")
      ->required();
  attack_cmd->add_option("--weights", weights_path, "tag weights JSON");
  attack_cmd
      ->add_option("--strategy", strategy,
                   "fastwordbug | fastwordbug-rescored | deepwordbug | "
                   "textbugger-bb | none")
      ->required();
  attack_cmd->add_option("--epsilon", epsilon,
                         "max perturbed-word fraction");
  attack_cmd->add_option("--tag-threshold", threshold, "auto | number");
  attack_cmd->add_option("--seed", seed, "attack seed");
  attack_cmd->add_option("--max-queries", max_queries,
                         "query cap per document (-1 = none)");
  attack_cmd->add_option("--out", out, "output results JSON")->required();

  CLI::App* benchmark =
      app.add_subcommand("benchmark", "strategy x classifier sweep");
  benchmark->add_option("--data", data, "CSV dataset")->required();
  benchmark->add_option("--models", models, "comma-separated model specs")
      ->required();
  benchmark
      ->add_option("--strategies", strategies,
                   "comma-separated strategy names")
      ->required();
  benchmark->add_option("--samples", samples, "documents per repetition")
      ->required();
  benchmark->add_option("--reps", reps, "repetitions")->required();
  benchmark->add_option("--calibration", calibration,
                        "calibration split size (0 = same as samples)");
  benchmark->add_option("--epsilon", epsilon, "max perturbed-word fraction");
  benchmark->add_option("--tag-threshold", threshold, "auto | number");
  benchmark->add_option("--normalization", normalization,
                        "frequency | raw");
  benchmark->add_option("--seed", seed, "master seed");
  benchmark->add_option("--out", out, "output report JSON")->required();
  benchmark->add_option("--markdown", markdown, "optional markdown report");

  CLI::App* transfer =
      app.add_subcommand("transfer", "cross-model accuracy matrix");
  transfer
      ->add_option("--results", results_list,
                   "comma-separated attack results JSON files")
      ->required();
  transfer->add_option("--models", models, "comma-separated model specs")
      ->required();
  transfer->add_option("--out", out, "output matrix JSON")->required();

  CLI::App* serve =
      app.add_subcommand("serve-mock", "serve a bundled model over HTTP");
  serve->add_option("--model", model_spec, "model JSON path")->required();
  serve->add_option("--port", port, "listen port (0 = pick a free one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train) return run_train(data, variant, out, seed);
    if (*calibrate) {
      return run_calibrate(data, model_spec, normalization, out, seed);
    }
    if (*attack_cmd) {
      std::optional<long long> cap;
      if (max_queries >= 0) cap = max_queries;
      return run_attack_cmd(data, model_spec, weights_path, strategy,
                            epsilon, threshold, seed, cap, out);
    }
    if (*benchmark) {
      return run_benchmark_cmd(data, models, strategies, samples, reps,
                               calibration, epsilon, threshold,
                               normalization, seed, out, markdown);
    }
    if (*transfer) return run_transfer(results_list, models, out);
    if (*serve) return run_serve_mock(model_spec, port);
    std::fprintf(stderr, "no subcommand given\n");
    return 1;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const RemoteError& e) {
    std::fprintf(stderr, "remote classifier error: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
}
