#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "fastwordbug/model.hpp"
#include "fastwordbug/scoring.hpp"
#include "fastwordbug/text.hpp"
#include "toy_classifiers.hpp"

using namespace fastwordbug;
using model::QueryCounter;
using model::QueryPhase;
using scoring::Normalization;
using scoring::PosWeights;
using text::PosTag;

namespace {

using Corpus = std::vector<std::pair<std::string, std::string>>;

}  // namespace

TEST_CASE("removing a word takes one adjacent space with it") {
  text::Document doc = text::build_document("good movie");
  CHECK(scoring::text_without_word(doc, 0) == "movie");
  CHECK(scoring::text_without_word(doc, 1) == "good");
  text::Document punct = text::build_document("a.");
  CHECK(scoring::text_without_word(punct, 0) == ".");
  text::Document solo = text::build_document("alone");
  CHECK(scoring::text_without_word(solo, 0) == "");
}

TEST_CASE("single-word documents still spend their query") {
  model::BowClassifier clf =
      model::train_bow({{"pos", "good"}, {"neg", "bad"}});
  text::Document doc = text::build_document("good");
  QueryCounter counter;
  double cache = clf.predict_raw("good").confidences[0];
  auto score = scoring::word_contribution(doc, 0, clf, 0, cache, counter,
                                          QueryPhase::WordScoring);
  CHECK(counter.calls() == 1);  // the empty remainder is still classified
  double prior_pos = clf.predict_raw("").confidences[0];
  CHECK(score.contribution == doctest::Approx(cache - prior_pos));
}

TEST_CASE("a constant classifier gives zero contribution everywhere") {
  model::ConstantClassifier clf({0.7, 0.3}, {"pos", "neg"});
  text::Document doc = text::build_document("some words sit here");
  QueryCounter counter;
  for (int j = 0; j < doc.word_count(); ++j) {
    auto score = scoring::word_contribution(doc, j, clf, 0, 0.7, counter,
                                            QueryPhase::WordScoring);
    CHECK(score.contribution == doctest::Approx(0.0));
    CHECK(score.queries_spent == 1);
  }
  CHECK(counter.calls() == doc.word_count());
}

TEST_CASE("keyword classifiers expose the keyword's contribution") {
  testsupport::KeywordClassifier clf({"good"});
  text::Document doc = text::build_document("good movie");
  QueryCounter counter;
  double cache = clf.predict_raw(doc.original_text).confidences[0];
  auto c_good = scoring::word_contribution(doc, 0, clf, 0, cache, counter,
                                           QueryPhase::WordScoring);
  auto c_movie = scoring::word_contribution(doc, 1, clf, 0, cache, counter,
                                            QueryPhase::WordScoring);
  CHECK(c_good.contribution == doctest::Approx(0.6));
  CHECK(c_movie.contribution == doctest::Approx(0.0));
}

TEST_CASE("word contribution rejects out-of-range indices") {
  model::ConstantClassifier clf({0.7, 0.3}, {"pos", "neg"});
  text::Document doc = text::build_document("two words");
  QueryCounter counter;
  CHECK_THROWS_AS(scoring::word_contribution(doc, 2, clf, 0, 0.7, counter,
                                             QueryPhase::WordScoring),
                  std::invalid_argument);
  CHECK_THROWS_AS(scoring::word_contribution(doc, -1, clf, 0, 0.7, counter,
                                             QueryPhase::WordScoring),
                  std::invalid_argument);
}

TEST_CASE("contributions match a fresh double-query recomputation exactly") {
  Corpus corpus = {{"pos", "good great fine movie film lovely"},
                   {"neg", "bad awful dull poor boring movie"},
                   {"pos", "nice warm story"},
                   {"neg", "cold dead plot"}};
  model::BowClassifier clf = model::train_bow(corpus);
  std::mt19937 rng(11);
  const std::vector<std::string> words = {
      "good", "bad",  "movie", "film", "plot",  "story", "dull",
      "warm", "cold", "nice",  "the",  "a",     "fine",  "poor",
      "zzz",  "qqq",  "great", "awful", "lovely", "boring"};
  for (int round = 0; round < 60; ++round) {
    std::string body;
    int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      if (i) body += ' ';
      body += words[rng() % words.size()];
    }
    text::Document doc = text::build_document(body);
    int y = static_cast<int>(rng() % 2);
    double cache = clf.predict_raw(doc.original_text).confidences[y];
    QueryCounter counter;
    for (int j = 0; j < doc.word_count(); ++j) {
      auto score = scoring::word_contribution(doc, j, clf, y, cache, counter,
                                              QueryPhase::WordScoring);
      // independent oracle: two fresh queries, no cache
      double oracle =
          clf.predict_raw(doc.original_text).confidences[y] -
          clf.predict_raw(scoring::text_without_word(doc, j)).confidences[y];
      CHECK(score.contribution == oracle);  // exact, not approximate
    }
    CHECK(counter.calls() == doc.word_count());
  }
}

TEST_CASE("single sentences order trivially") {
  model::ConstantClassifier clf({0.7, 0.3}, {"pos", "neg"});
  text::Document doc = text::build_document("Just one sentence here.");
  QueryCounter counter;
  CHECK(scoring::sentence_scores(doc, clf, 0, counter) ==
        std::vector<int>{0});
  CHECK(counter.calls() == 1);
}

TEST_CASE("sentences sort by standalone confidence, descending") {
  testsupport::SentenceTableClassifier clf(
      {{"Weak start.", 0.6}, {"Strong end!", 0.9}});
  text::Document doc = text::build_document("Weak start. Strong end!");
  QueryCounter counter;
  CHECK(scoring::sentence_scores(doc, clf, 0, counter) ==
        std::vector<int>{1, 0});
  CHECK(counter.calls() == 2);
  QueryCounter counter2;
  CHECK(scoring::sentence_scores(doc, clf, 0, counter2, true) ==
        std::vector<int>{0, 1});
}

TEST_CASE("equal confidences keep document order") {
  model::ConstantClassifier clf({0.5, 0.5}, {"pos", "neg"});
  text::Document doc = text::build_document("One two. Three four. Five.");
  QueryCounter counter;
  CHECK(scoring::sentence_scores(doc, clf, 0, counter) ==
        std::vector<int>{0, 1, 2});
  CHECK(counter.calls() == 3);
}

TEST_CASE("sentence scoring rejects empty documents") {
  model::ConstantClassifier clf({0.5, 0.5}, {"pos", "neg"});
  text::Document doc = text::build_document("");
  QueryCounter counter;
  CHECK_THROWS_AS(scoring::sentence_scores(doc, clf, 0, counter),
                  std::invalid_argument);
}

TEST_CASE("softmax of equal scores is uniform") {
  auto out = scoring::softmax({{PosTag::NN, 3.7}, {PosTag::JJ, 3.7}});
  CHECK(out[PosTag::NN] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out[PosTag::JJ] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("softmax matches independent arithmetic") {
  // e^2 / (e^2 + 1) computed separately: 0.8807970779...
  auto out = scoring::softmax({{PosTag::NN, 2.0}, {PosTag::JJ, 0.0}});
  CHECK(out[PosTag::NN] == doctest::Approx(0.88079708).epsilon(1e-6));
  CHECK(out[PosTag::JJ] == doctest::Approx(0.11920292).epsilon(1e-6));
}

TEST_CASE("softmax of a single score is 1") {
  auto out = scoring::softmax({{PosTag::RB, -41.5}});
  CHECK(out[PosTag::RB] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(scoring::softmax({}), std::invalid_argument);
}

TEST_CASE("softmax keeps ordering and ignores shifts") {
  std::mt19937 rng(5);
  for (int round = 0; round < 50; ++round) {
    std::map<PosTag, double> scores;
    for (int t = 0; t < 6; ++t) {
      scores[static_cast<PosTag>(t * 3)] =
          (static_cast<double>(rng() % 2000) - 1000.0) / 100.0;
    }
    auto soft = scoring::softmax(scores);
    double sum = 0.0;
    for (auto& [tag, w] : soft) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    for (auto& [a, sa] : scores) {
      for (auto& [b, sb] : scores) {
        if (sa < sb) CHECK(soft[a] < soft[b]);
      }
    }
    std::map<PosTag, double> shifted;
    for (auto& [tag, s] : scores) shifted[tag] = s + 123.456;
    auto soft2 = scoring::softmax(shifted);
    for (auto& [tag, w] : soft) {
      CHECK(w == doctest::Approx(soft2[tag]).epsilon(1e-9));
    }
  }
}

TEST_CASE("two calibration documents split the weight evenly") {
  // max-drop words: "zorgle" (NN by default rule) and "wonderful" (JJ)
  testsupport::KeywordClassifier clf({"zorgle", "wonderful"});
  Corpus dataset = {{"pos", "The zorgle sits quietly."},
                    {"pos", "A wonderful day."}};
  QueryCounter counter;
  PosWeights pw = scoring::calibrate_pos_weights(dataset, clf, counter);
  CHECK(pw.counts.at(PosTag::NN) == 1);
  CHECK(pw.counts.at(PosTag::JJ) == 1);
  CHECK(pw.weights.at(PosTag::NN) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pw.weights.at(PosTag::JJ) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("a single observed tag takes all the weight") {
  testsupport::KeywordClassifier clf({"quickly"});
  Corpus dataset = {{"pos", "They ran quickly."}};
  QueryCounter counter;
  PosWeights pw = scoring::calibrate_pos_weights(dataset, clf, counter);
  CHECK(pw.counts.size() == 1);
  CHECK(pw.counts.at(PosTag::RB) == 1);
  CHECK(pw.weights.at(PosTag::RB) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pw.weight(PosTag::NN) == 0.0);
}

TEST_CASE("calibration spends N+1 queries per document") {
  testsupport::KeywordClassifier clf({"wonderful"});
  Corpus dataset = {{"pos", "A wonderful film with five words extra."},
                    {"pos", "Short wonderful one."}};
  int words = text::build_document(dataset[0].second).word_count() +
              text::build_document(dataset[1].second).word_count();
  QueryCounter counter;
  scoring::calibrate_pos_weights(dataset, clf, counter);
  CHECK(counter.calls() == words + 2);
  CHECK(counter.phase_calls(QueryPhase::Calibration) == counter.calls());
}

TEST_CASE("misclassified documents are skipped") {
  testsupport::KeywordClassifier clf({"wonderful"});
  // second document: classifier says neg (no keyword), label pos -> skipped
  Corpus dataset = {{"pos", "A wonderful day."}, {"pos", "A plain day."}};
  QueryCounter counter;
  PosWeights pw = scoring::calibrate_pos_weights(dataset, clf, counter);
  long long total = 0;
  for (auto& [tag, c] : pw.counts) total += c;
  CHECK(total == 1);
  // only the skipped document's initial query is spent on it
  CHECK(counter.calls() ==
        1 + text::build_document(dataset[0].second).word_count() + 1);
}

TEST_CASE("calibration fails without usable documents") {
  testsupport::KeywordClassifier clf({"wonderful"});
  QueryCounter counter;
  CHECK_THROWS_AS(scoring::calibrate_pos_weights({}, clf, counter),
                  std::invalid_argument);
  Corpus all_wrong = {{"pos", "A plain day."}};
  CHECK_THROWS_AS(
      scoring::calibrate_pos_weights(all_wrong, clf, counter),
      std::invalid_argument);
}

TEST_CASE("calibration is order-independent") {
  testsupport::KeywordClassifier clf(
      {"zorgle", "wonderful", "quickly", "smith"});
  Corpus dataset = {{"pos", "The zorgle sits."},
                    {"pos", "A wonderful day."},
                    {"pos", "They ran quickly."},
                    {"pos", "We met smith today."}};
  Corpus reversed(dataset.rbegin(), dataset.rend());
  QueryCounter c1, c2;
  PosWeights a = scoring::calibrate_pos_weights(dataset, clf, c1);
  PosWeights b = scoring::calibrate_pos_weights(reversed, clf, c2);
  CHECK(a.counts == b.counts);
  for (auto& [tag, w] : a.weights) {
    CHECK(w == doctest::Approx(b.weights.at(tag)).epsilon(1e-12));
  }
}

TEST_CASE("weights sum to one and argmax follows the counts") {
  testsupport::KeywordClassifier clf({"zorgle", "wonderful", "splendid"});
  Corpus dataset = {{"pos", "The zorgle sits."},
                    {"pos", "A wonderful day."},
                    {"pos", "A splendid day."}};
  for (Normalization normalization :
       {Normalization::FrequencySoftmax, Normalization::RawSoftmax}) {
    scoring::CalibrationOptions options;
    options.normalization = normalization;
    QueryCounter counter;
    PosWeights pw =
        scoring::calibrate_pos_weights(dataset, clf, counter, options);
    double sum = 0.0;
    for (auto& [tag, w] : pw.weights) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    auto best_count =
        std::max_element(pw.counts.begin(), pw.counts.end(),
                         [](auto& a, auto& b) { return a.second < b.second; });
    auto best_weight =
        std::max_element(pw.weights.begin(), pw.weights.end(),
                         [](auto& a, auto& b) { return a.second < b.second; });
    CHECK(best_count->first == best_weight->first);
    CHECK(pw.counts.at(PosTag::JJ) == 2);
  }
}

TEST_CASE("pos weights JSON round-trips") {
  testsupport::KeywordClassifier clf({"wonderful"});
  Corpus dataset = {{"pos", "A wonderful day."}};
  QueryCounter counter;
  scoring::CalibrationOptions options;
  options.meta.dataset_id = "toy";
  options.meta.classifier_id = "keyword";
  PosWeights pw =
      scoring::calibrate_pos_weights(dataset, clf, counter, options);
  PosWeights back = PosWeights::from_json(pw.to_json());
  CHECK(back.counts == pw.counts);
  CHECK(back.normalization == pw.normalization);
  CHECK(back.meta.dataset_id == "toy");
  CHECK(back.meta.classifier_id == "keyword");
  CHECK(back.meta.sample_count == 1);
  for (auto& [tag, w] : pw.weights) {
    CHECK(back.weights.at(tag) == w);
  }
}
