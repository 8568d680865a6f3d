#include <doctest.h>

#include <sstream>

#include "emopair/corpus.hpp"
#include "emopair/error.hpp"
#include "emopair/simulate.hpp"
#include "support.hpp"

using namespace emopair;
using emopair::testing::ScratchDir;
using emopair::testing::write_file;
using E = Emotion;

TEST_CASE("FixtureRng follows the standard MT19937-64 stream") {
  // The 10000th output of a default-seeded std::mt19937_64 is fixed by the C++ standard.
  FixtureRng rng(5489);
  for (int i = 0; i < 9999; ++i) rng.next();
  CHECK(rng.next() == 9981545732273789042ULL);

  FixtureRng a(11), b(11);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(b.below(7) < 7);
  }
  FixtureRng c(5489);
  CHECK(c.uniform() == static_cast<double>(14514284786278117030ULL >> 11) * 0x1.0p-53);
}

TEST_CASE("zero coefficients give a balanced outcome") {
  PlantedModel m;
  m.seed = 3;
  m.pairs = {{E::anger, E::sadness}};
  m.coefficients = {0.0};
  m.inclusion[index_of(E::anger)] = 0.5;
  m.inclusion[index_of(E::sadness)] = 0.5;
  m.inclusion[index_of(E::joy)] = 0.5;
  const auto posts = generate_corpus(m, 10000);
  REQUIRE(posts.size() == 10000);
  double mean = 0.0;
  for (const auto& p : posts) mean += p.outcome;
  mean /= 10000.0;
  CHECK(mean >= 0.48);
  CHECK(mean <= 0.52);
  CHECK(posts.front().post_id == "sim-000001");
  CHECK(posts.back().post_id == "sim-010000");
}

TEST_CASE("same seed, same corpus; different seed, different corpus") {
  const auto a = generate_corpus(PlantedModel::reference(5), 500);
  const auto b = generate_corpus(PlantedModel::reference(5), 500);
  const auto c = generate_corpus(PlantedModel::reference(6), 500);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("certain inclusion gives exactly the planted pair") {
  PlantedModel m;
  m.pairs = {{E::grief, E::amusement}};
  m.coefficients = {1.0};
  m.inclusion[index_of(E::grief)] = 1.0;
  m.inclusion[index_of(E::amusement)] = 1.0;
  for (const auto& p : generate_corpus(m, 200)) {
    const auto set = distinct_emotions(p, {});
    CHECK(set.size() == 2);
    CHECK(set.contains(E::grief));
    CHECK(set.contains(E::amusement));
    CHECK(p.outcome == (p.depression.severity == Severity::severe ? 1 : 0));
  }
}

TEST_CASE("generated sets respect the distinct range (property)") {
  FixtureRng rng(71);
  for (int round = 0; round < 20; ++round) {
    PlantedModel m;
    m.seed = rng.next();
    for (std::size_t k = 0; k < 10; ++k) m.inclusion[k] = 0.1 + 0.8 * rng.uniform();
    m.min_distinct = 1 + rng.below(3);
    m.max_distinct = m.min_distinct + rng.below(4);
    for (const auto& p : generate_corpus(m, 300)) {
      const auto k = distinct_emotions(p, {}).size();
      CHECK(k >= m.min_distinct);
      CHECK(k <= m.max_distinct);
      CHECK(p.sentences.size() == k);
    }
  }
}

TEST_CASE("rendered text relabels to the same corpus") {
  const auto posts = generate_corpus(PlantedModel::reference(9), 300);
  const auto raw = render_raw_posts(posts);
  const auto sentences = segment_corpus(raw, false);
  LexiconAnnotator annotator(identity_lexicon(), {{"severe", Severity::severe}});
  AnnotateOptions opts;
  opts.policy = BinarizationPolicy::severe_only;
  const auto labeled = annotate_corpus(raw, sentences, annotator, opts);
  CHECK(labeled == posts);
}

TEST_CASE("identity lexicon puts no name before a longer one containing it") {
  const auto rules = identity_lexicon();
  CHECK(rules.size() == kEmotionCount);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      CHECK(rules[j].keyword.find(rules[i].keyword) == std::string::npos);
    }
  }
  CHECK(lexicon_annotate("disapproval.", rules) == E::disapproval);
  CHECK(lexicon_annotate("approval.", rules) == E::approval);
}

TEST_CASE("ground truth round-trips and validates") {
  ScratchDir dir;
  const auto model = PlantedModel::reference(13);
  save_ground_truth(dir / "truth.json", model);
  const auto back = load_planted_model(dir / "truth.json");
  CHECK(back.seed == 13);
  CHECK(back.pairs == model.pairs);
  CHECK(back.coefficients == model.coefficients);
  CHECK(back.inclusion == model.inclusion);
  CHECK(back.intercept == model.intercept);
  CHECK(back.min_distinct == model.min_distinct);
  CHECK(back.max_distinct == model.max_distinct);

  write_file(dir / "bad_pair.json",
             R"({"coefficients":[{"pair":"joy-glee","beta":1}],"inclusion":{"joy":0.5}})");
  CHECK_THROWS_AS(load_planted_model(dir / "bad_pair.json"), SchemaViolation);
  write_file(dir / "missing.json", R"({"coefficients":[]})");
  CHECK_THROWS_AS(load_planted_model(dir / "missing.json"), SchemaViolation);
  write_file(dir / "unreachable.json",
             R"({"coefficients":[{"pair":"anger-joy","beta":1}],"inclusion":{"joy":0.5}})");
  CHECK_THROWS_AS(load_planted_model(dir / "unreachable.json"), InvalidArgument);

  PlantedModel bad = model;
  bad.coefficients.pop_back();
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = model;
  bad.inclusion[0] = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = model;
  bad.min_distinct = 5;
  bad.max_distinct = 4;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}
