#include "fastwordbug/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fastwordbug::attack {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::None: return "none";
    case Strategy::FastWordBug: return "fastwordbug";
    case Strategy::FastWordBugRescored: return "fastwordbug-rescored";
    case Strategy::DeepWordBug: return "deepwordbug";
    case Strategy::TextBuggerBB: return "textbugger-bb";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "none") return Strategy::None;
  if (name == "fastwordbug") return Strategy::FastWordBug;
  if (name == "fastwordbug-rescored" || name == "fastwordbug_rescored") {
    return Strategy::FastWordBugRescored;
  }
  if (name == "deepwordbug") return Strategy::DeepWordBug;
  if (name == "textbugger-bb" || name == "textbugger_bb") {
    return Strategy::TextBuggerBB;
  }
  return std::nullopt;
}

void AttackConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0,1]");
  }
  if (tag_threshold && !(*tag_threshold >= 0.0 && *tag_threshold <= 1.0)) {
    throw std::invalid_argument("tag threshold must lie in [0,1]");
  }
  if (max_queries && *max_queries < 0) {
    throw std::invalid_argument("max_queries must be non-negative");
  }
}

namespace {

using model::Prediction;
using model::QueryCounter;
using model::QueryPhase;

// Shared state for Step 3, the modification walk every strategy ends with.
struct Run {
  const text::Document& doc;
  const model::Classifier& classifier;
  const AttackConfig& config;
  perturb::WorkingDoc working;
  perturb::SeededRng rng;
  QueryCounter counter;
  Prediction original;
  Prediction final;
  int y = 0;
  double current_confidence = 0.0;
  std::vector<AppliedPerturbation> perturbations;
  long long budget = 0;
  bool flipped = false;

  Run(const text::Document& d, const model::Classifier& c,
      const AttackConfig& cfg)
      : doc(d), classifier(c), config(cfg), working(d), rng(cfg.seed) {}

  bool query_budget_left() const {
    return !config.max_queries || counter.calls() < *config.max_queries;
  }

  bool exhausted() const {
    return flipped ||
           static_cast<long long>(perturbations.size()) >= budget ||
           !query_budget_left();
  }

  // Attempts one word; retains the best strictly-improving candidate.
  void try_word(int word_index) {
    auto mod = perturb::best_modification(working, word_index, classifier, y,
                                          current_confidence, rng, counter);
    if (!mod) return;
    perturbations.push_back({word_index, mod->perturbation});
    current_confidence = mod->prediction.confidences[y];
    final = mod->prediction;
    if (mod->prediction.label != y) flipped = true;
  }

  void walk(const std::vector<int>& word_order) {
    for (int j : word_order) {
      if (exhausted()) break;
      try_word(j);
    }
  }

  AttackResult finish(Strategy strategy, bool skipped) const {
    AttackResult result;
    result.strategy = strategy;
    result.skipped = skipped;
    result.success = flipped;
    result.adversarial_text = working.render();
    result.original_prediction = original;
    result.final_prediction = final;
    result.perturbations = perturbations;
    const int words = doc.word_count();
    result.perturbed_fraction =
        words == 0 ? 0.0
                   : static_cast<double>(perturbations.size()) / words;
    result.queries = counter;
    return result;
  }
};

// Returns false when the document is skipped (classifier already wrong).
bool open_run(Run& run, const scoring::PosWeights* weights) {
  run.config.validate();
  if (run.doc.sentences.empty()) {
    throw std::invalid_argument("cannot attack an empty document");
  }
  if ((run.config.strategy == Strategy::FastWordBug ||
       run.config.strategy == Strategy::FastWordBugRescored) &&
      weights == nullptr) {
    throw std::invalid_argument("strategy requires calibrated tag weights");
  }

  run.original = model::predict(run.classifier, run.doc.original_text,
                                run.counter, QueryPhase::Initial);
  run.final = run.original;
  run.y = run.original.label;
  run.current_confidence = run.original.confidences[run.y];
  run.budget = static_cast<long long>(
      std::floor(run.config.epsilon * run.doc.word_count() + 1e-9));

  if (run.doc.label &&
      run.classifier.class_index(*run.doc.label) != run.original.label) {
    return false;
  }
  return true;
}

// Step 2 of the tag-weighted pipeline: walk words in ordered-sentence,
// then left-to-right order and keep those whose tag weight clears the
// threshold. No classifier queries here.
std::vector<int> filter_by_tag_weight(const text::Document& doc,
                                      const std::vector<int>& sentence_order,
                                      const scoring::PosWeights& weights,
                                      double threshold) {
  std::vector<int> kept;
  for (int si : sentence_order) {
    for (int j : doc.words_in_sentence(si)) {
      if (weights.weight(doc.word(j).tag) > threshold) kept.push_back(j);
    }
  }
  return kept;
}

// Leave-one-out scores for the given words; words left unscored once the
// query cap is reached keep their relative order at the tail.
std::vector<int> order_by_contribution(Run& run,
                                       const std::vector<int>& words) {
  std::vector<double> contribution(words.size(), 0.0);
  std::vector<char> scored(words.size(), 0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!run.query_budget_left()) break;
    contribution[i] =
        scoring::word_contribution(run.doc, words[i], run.classifier, run.y,
                                   run.original.confidences[run.y],
                                   run.counter, QueryPhase::WordScoring)
            .contribution;
    scored[i] = 1;
  }
  std::vector<std::size_t> idx(words.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scored[a] != scored[b]) return scored[a] > scored[b];
    if (!scored[a]) return false;
    return contribution[a] > contribution[b];
  });
  std::vector<int> out(words.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = words[idx[i]];
  return out;
}

std::vector<int> all_words_in_document_order(const text::Document& doc) {
  std::vector<int> words(doc.word_count());
  std::iota(words.begin(), words.end(), 0);
  return words;
}

}  // namespace

AttackResult attack_fastwordbug(const text::Document& doc,
                                const model::Classifier& classifier,
                                const scoring::PosWeights& weights,
                                const AttackConfig& config) {
  Run run(doc, classifier, config);
  if (!open_run(run, &weights)) {
    return run.finish(Strategy::FastWordBug, true);
  }
  std::vector<int> sentence_order = scoring::sentence_scores(
      doc, classifier, run.y, run.counter, config.ascending_sentences,
      config.max_queries);
  double threshold =
      config.tag_threshold.value_or(1.0 / weights.tag_count());
  std::vector<int> kept =
      filter_by_tag_weight(doc, sentence_order, weights, threshold);
  if (kept.empty() && config.unfiltered_fallback) {
    kept = filter_by_tag_weight(doc, sentence_order, weights, 0.0);
  }
  run.walk(kept);
  return run.finish(Strategy::FastWordBug, false);
}

AttackResult attack_fastwordbug_rescored(const text::Document& doc,
                                         const model::Classifier& classifier,
                                         const scoring::PosWeights& weights,
                                         const AttackConfig& config) {
  Run run(doc, classifier, config);
  if (!open_run(run, &weights)) {
    return run.finish(Strategy::FastWordBugRescored, true);
  }
  std::vector<int> sentence_order = scoring::sentence_scores(
      doc, classifier, run.y, run.counter, config.ascending_sentences,
      config.max_queries);
  double threshold =
      config.tag_threshold.value_or(1.0 / weights.tag_count());
  std::vector<int> kept =
      filter_by_tag_weight(doc, sentence_order, weights, threshold);
  if (kept.empty() && config.unfiltered_fallback) {
    kept = filter_by_tag_weight(doc, sentence_order, weights, 0.0);
  }
  run.walk(order_by_contribution(run, kept));
  return run.finish(Strategy::FastWordBugRescored, false);
}

AttackResult attack_deepwordbug(const text::Document& doc,
                                const model::Classifier& classifier,
                                const AttackConfig& config) {
  Run run(doc, classifier, config);
  if (!open_run(run, nullptr)) {
    return run.finish(Strategy::DeepWordBug, true);
  }
  run.walk(order_by_contribution(run, all_words_in_document_order(doc)));
  return run.finish(Strategy::DeepWordBug, false);
}

AttackResult attack_textbugger_bb(const text::Document& doc,
                                  const model::Classifier& classifier,
                                  const AttackConfig& config) {
  Run run(doc, classifier, config);
  if (!open_run(run, nullptr)) {
    return run.finish(Strategy::TextBuggerBB, true);
  }
  std::vector<int> sentence_order = scoring::sentence_scores(
      doc, classifier, run.y, run.counter, config.ascending_sentences,
      config.max_queries);
  // Words are scored sentence by sentence and modified before the next
  // sentence is scored, so a flip in an early sentence saves the whole
  // remaining scoring bill.
  for (int si : sentence_order) {
    if (run.exhausted()) break;
    run.walk(order_by_contribution(run, doc.words_in_sentence(si)));
  }
  return run.finish(Strategy::TextBuggerBB, false);
}

AttackResult run_attack(const text::Document& doc,
                        const model::Classifier& classifier,
                        const scoring::PosWeights* weights,
                        const AttackConfig& config) {
  switch (config.strategy) {
    case Strategy::None: {
      Run run(doc, classifier, config);
      bool attacked = open_run(run, nullptr);
      return run.finish(Strategy::None, !attacked);
    }
    case Strategy::FastWordBug:
      if (!weights) {
        throw std::invalid_argument("fastwordbug requires tag weights");
      }
      return attack_fastwordbug(doc, classifier, *weights, config);
    case Strategy::FastWordBugRescored:
      if (!weights) {
        throw std::invalid_argument(
            "fastwordbug-rescored requires tag weights");
      }
      return attack_fastwordbug_rescored(doc, classifier, *weights, config);
    case Strategy::DeepWordBug:
      return attack_deepwordbug(doc, classifier, config);
    case Strategy::TextBuggerBB:
      return attack_textbugger_bb(doc, classifier, config);
  }
  throw std::invalid_argument("unknown strategy");
}

}  // namespace fastwordbug::attack
