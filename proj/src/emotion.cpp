#include "emopair/emotion.hpp"

#include <string>

#include "emopair/error.hpp"
#include "text_util.hpp"

namespace emopair {
namespace {

constexpr std::array<std::string_view, kEmotionCount> kNames = {
    "admiration",  "amusement",   "anger",      "annoyance",      "approval",
    "caring",      "confusion",   "curiosity",  "desire",         "disappointment",
    "disapproval", "disgust",     "embarrassment", "excitement",  "fear",
    "gratitude",   "grief",       "joy",        "love",           "nervousness",
    "optimism",    "pride",       "realization", "relief",        "remorse",
    "sadness",     "surprise",    "neutral",
};

constexpr std::array<Emotion, kEmotionCount> make_all() {
  std::array<Emotion, kEmotionCount> out{};
  for (std::size_t i = 0; i < kEmotionCount; ++i) out[i] = emotion_at(i);
  return out;
}

constexpr std::array<Emotion, kEmotionCount> kAll = make_all();

}  // namespace

std::string_view to_string(Emotion e) noexcept { return kNames[index_of(e)]; }

std::optional<Emotion> parse_emotion(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    if (kNames[i] == name) return emotion_at(i);
  }
  return std::nullopt;
}

const std::array<Emotion, kEmotionCount>& all_emotions() noexcept { return kAll; }

std::string_view to_string(SentimentGroup g) noexcept {
  switch (g) {
    case SentimentGroup::positive: return "positive";
    case SentimentGroup::negative: return "negative";
    case SentimentGroup::neutral: return "neutral";
  }
  return "neutral";
}

std::optional<SentimentGroup> parse_sentiment(std::string_view name) noexcept {
  if (name == "positive") return SentimentGroup::positive;
  if (name == "negative") return SentimentGroup::negative;
  if (name == "neutral") return SentimentGroup::neutral;
  return std::nullopt;
}

SentimentMap SentimentMap::defaults() {
  using E = Emotion;
  SentimentMap m;
  m.groups_.fill(SentimentGroup::positive);
  for (E e : {E::anger, E::annoyance, E::disappointment, E::disapproval, E::disgust,
              E::embarrassment, E::fear, E::grief, E::nervousness, E::remorse, E::sadness}) {
    m.groups_[index_of(e)] = SentimentGroup::negative;
  }
  for (E e : {E::confusion, E::curiosity, E::realization, E::surprise, E::neutral}) {
    m.groups_[index_of(e)] = SentimentGroup::neutral;
  }
  return m;
}

SentimentMap SentimentMap::load(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  SentimentMap m;
  std::array<bool, kEmotionCount> seen{};
  std::string line;
  std::string name, group;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = detail::trim(line);
    if (row.empty() || row.front() == '#') continue;
    if (!detail::split_last_comma(row, name, group)) {
      throw SchemaViolation(path.string() + ":" + std::to_string(line_no) + ": expected 'emotion,group'");
    }
    if (line_no == 1 && name == "emotion" && group == "group") continue;
    const auto e = parse_emotion(name);
    if (!e) {
      throw SchemaViolation(path.string() + ":" + std::to_string(line_no) + ": unknown emotion '" + name + "'");
    }
    const auto g = parse_sentiment(group);
    if (!g) {
      throw SchemaViolation(path.string() + ":" + std::to_string(line_no) + ": unknown group '" + group + "'");
    }
    if (seen[index_of(*e)]) {
      throw SchemaViolation(path.string() + ":" + std::to_string(line_no) + ": duplicate emotion '" + name + "'");
    }
    seen[index_of(*e)] = true;
    m.groups_[index_of(*e)] = *g;
  }
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    if (!seen[i]) {
      throw SchemaViolation(path.string() + ": no group for emotion '" + std::string(kNames[i]) + "'");
    }
  }
  return m;
}

std::vector<Emotion> SentimentMap::grouped_order() const {
  std::vector<Emotion> out;
  out.reserve(kEmotionCount);
  for (SentimentGroup g : {SentimentGroup::negative, SentimentGroup::positive, SentimentGroup::neutral}) {
    for (Emotion e : kAll) {
      if ((*this)[e] == g) out.push_back(e);
    }
  }
  return out;
}

std::vector<Emotion> EmotionSet::members() const {
  std::vector<Emotion> out;
  out.reserve(size());
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(emotion_at(static_cast<std::size_t>(std::countr_zero(b))));
  }
  return out;
}

}  // namespace emopair
