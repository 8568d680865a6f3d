#include <doctest.h>

#include <set>

#include "emopair/emotion.hpp"
#include "emopair/error.hpp"
#include "support.hpp"

using namespace emopair;
using emopair::testing::ScratchDir;
using emopair::testing::write_file;

TEST_CASE("canonical order has 28 labels with neutral last") {
  const auto& all = all_emotions();
  CHECK(all.size() == 28);
  CHECK(all.front() == Emotion::admiration);
  CHECK(all.back() == Emotion::neutral);
  CHECK(index_of(Emotion::neutral) == 27);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(index_of(all[i]) == i);
}

TEST_CASE("emotion names round-trip and unknown names are rejected") {
  std::set<std::string_view> names;
  for (auto e : all_emotions()) {
    const auto name = to_string(e);
    names.insert(name);
    REQUIRE(parse_emotion(name).has_value());
    CHECK(*parse_emotion(name) == e);
  }
  CHECK(names.size() == 28);
  CHECK_FALSE(parse_emotion("happiness").has_value());
  CHECK_FALSE(parse_emotion("").has_value());
  CHECK_FALSE(parse_emotion("Joy").has_value());
}

TEST_CASE("default sentiment map sizes and a few members") {
  const auto map = SentimentMap::defaults();
  std::size_t pos = 0, neg = 0, neu = 0;
  for (auto e : all_emotions()) {
    switch (map[e]) {
      case SentimentGroup::positive: ++pos; break;
      case SentimentGroup::negative: ++neg; break;
      case SentimentGroup::neutral: ++neu; break;
    }
  }
  CHECK(pos == 12);
  CHECK(neg == 11);
  CHECK(neu == 5);
  CHECK(map[Emotion::grief] == SentimentGroup::negative);
  CHECK(map[Emotion::amusement] == SentimentGroup::positive);
  CHECK(map[Emotion::surprise] == SentimentGroup::neutral);
}

TEST_CASE("shipped sentiment CSV matches the built-in defaults") {
  const auto loaded = SentimentMap::load(std::filesystem::path(EMOPAIR_DATA_DIR) / "sentiment_groups.csv");
  const auto defaults = SentimentMap::defaults();
  for (auto e : all_emotions()) CHECK(loaded[e] == defaults[e]);
}

TEST_CASE("grouped order lists negative, positive, then neutral blocks") {
  const auto map = SentimentMap::defaults();
  const auto order = map.grouped_order();
  REQUIRE(order.size() == 28);
  CHECK(order.front() == Emotion::anger);
  CHECK(order.back() == Emotion::neutral);
  int block = 0;
  for (auto e : order) {
    const int b = map[e] == SentimentGroup::negative ? 0 : map[e] == SentimentGroup::positive ? 1 : 2;
    CHECK(b >= block);
    block = b;
  }
}

TEST_CASE("sentiment map loading rejects incomplete or duplicated tables") {
  ScratchDir dir;
  std::string full = "emotion,group\n";
  for (auto e : all_emotions()) full += std::string(to_string(e)) + ",neutral\n";

  write_file(dir / "ok.csv", full);
  CHECK(SentimentMap::load(dir / "ok.csv")[Emotion::joy] == SentimentGroup::neutral);

  write_file(dir / "dup.csv", full + "joy,positive\n");
  CHECK_THROWS_AS(SentimentMap::load(dir / "dup.csv"), SchemaViolation);

  write_file(dir / "short.csv", "emotion,group\njoy,positive\n");
  CHECK_THROWS_AS(SentimentMap::load(dir / "short.csv"), SchemaViolation);

  write_file(dir / "badgroup.csv", "joy,cheerful\n");
  CHECK_THROWS_AS(SentimentMap::load(dir / "badgroup.csv"), SchemaViolation);

  CHECK_THROWS_AS(SentimentMap::load(dir / "missing.csv"), IoError);
}

TEST_CASE("EmotionSet behaves like a set of distinct labels") {
  EmotionSet s;
  CHECK(s.empty());
  s.insert(Emotion::grief);
  s.insert(Emotion::amusement);
  s.insert(Emotion::grief);
  CHECK(s.size() == 2);
  CHECK(s.contains(Emotion::grief));
  CHECK_FALSE(s.contains(Emotion::joy));
  CHECK(s.members() == std::vector<Emotion>{Emotion::amusement, Emotion::grief});
  s.erase(Emotion::grief);
  CHECK(s.size() == 1);
  s.insert(Emotion::neutral);
  CHECK(s.members().back() == Emotion::neutral);
}
