#ifndef FASTWORDBUG_ATTACK_HPP
#define FASTWORDBUG_ATTACK_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fastwordbug/model.hpp"
#include "fastwordbug/perturb.hpp"
#include "fastwordbug/scoring.hpp"
#include "fastwordbug/text.hpp"

namespace fastwordbug::attack {

enum class Strategy {
  None,                 // no attack; classify only (baseline row)
  FastWordBug,          // sentence ordering + tag-weight filter
  FastWordBugRescored,  // FastWordBug + leave-one-out rescoring of survivors
  DeepWordBug,          // leave-one-out score of every word, global order
  TextBuggerBB,         // per-sentence scoring interleaved with modification
};

std::string_view to_string(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view name);

struct AttackConfig {
  double epsilon = 0.1;                  // max perturbed-word fraction, (0,1]
  std::optional<double> tag_threshold;   // nullopt = AUTO (1/observed tags)
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::FastWordBug;
  std::optional<long long> max_queries;
  // Off by default: when the tag filter removes every word, retry the walk
  // with threshold 0 instead of giving up.
  bool unfiltered_fallback = false;
  bool ascending_sentences = false;

  void validate() const;  // throws std::invalid_argument
};

struct AppliedPerturbation {
  int word_index = 0;
  perturb::Perturbation perturbation;
};

struct AttackResult {
  Strategy strategy = Strategy::FastWordBug;
  bool skipped = false;  // classifier already wrong on the original text
  bool success = false;
  std::string adversarial_text;
  model::Prediction original_prediction;
  model::Prediction final_prediction;
  std::vector<AppliedPerturbation> perturbations;
  double perturbed_fraction = 0.0;
  model::QueryCounter queries;
};

// Dispatches on config.strategy. The document label, when present, is only
// used to skip documents the classifier already misclassifies; the attacked
// class is always the classifier's original prediction.
AttackResult run_attack(const text::Document& doc,
                        const model::Classifier& classifier,
                        const scoring::PosWeights* weights,
                        const AttackConfig& config);

AttackResult attack_fastwordbug(const text::Document& doc,
                                const model::Classifier& classifier,
                                const scoring::PosWeights& weights,
                                const AttackConfig& config);
AttackResult attack_fastwordbug_rescored(const text::Document& doc,
                                         const model::Classifier& classifier,
                                         const scoring::PosWeights& weights,
                                         const AttackConfig& config);
AttackResult attack_deepwordbug(const text::Document& doc,
                                const model::Classifier& classifier,
                                const AttackConfig& config);
AttackResult attack_textbugger_bb(const text::Document& doc,
                                  const model::Classifier& classifier,
                                  const AttackConfig& config);

}  // namespace fastwordbug::attack

#endif  // FASTWORDBUG_ATTACK_HPP
