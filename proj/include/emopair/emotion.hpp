#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emopair {

/// The 28 GoEmotions categories in canonical order. The numeric value is the
/// canonical index used by every matrix and vocabulary in the library.
enum class Emotion : std::uint8_t {
  admiration,
  amusement,
  anger,
  annoyance,
  approval,
  caring,
  confusion,
  curiosity,
  desire,
  disappointment,
  disapproval,
  disgust,
  embarrassment,
  excitement,
  fear,
  gratitude,
  grief,
  joy,
  love,
  nervousness,
  optimism,
  pride,
  realization,
  relief,
  remorse,
  sadness,
  surprise,
  neutral,
};

inline constexpr std::size_t kEmotionCount = 28;

constexpr std::size_t index_of(Emotion e) noexcept { return static_cast<std::size_t>(e); }
constexpr Emotion emotion_at(std::size_t i) noexcept { return static_cast<Emotion>(i); }

std::string_view to_string(Emotion e) noexcept;
std::optional<Emotion> parse_emotion(std::string_view name) noexcept;

/// All emotions in canonical order.
const std::array<Emotion, kEmotionCount>& all_emotions() noexcept;

enum class SentimentGroup : std::uint8_t { positive, negative, neutral };

std::string_view to_string(SentimentGroup g) noexcept;
std::optional<SentimentGroup> parse_sentiment(std::string_view name) noexcept;

/// Total mapping Emotion -> SentimentGroup.
class SentimentMap {
 public:
  /// The shipped default grouping (mirrors data/sentiment_groups.csv).
  static SentimentMap defaults();

  /// Reads `emotion,group` rows; every emotion must appear exactly once.
  /// Throws SchemaViolation otherwise, IoError if unreadable.
  static SentimentMap load(const std::filesystem::path& path);

  SentimentGroup operator[](Emotion e) const noexcept { return groups_[index_of(e)]; }

  /// Emotions ordered negative block, positive block, neutral block; canonical
  /// order inside each block.
  std::vector<Emotion> grouped_order() const;

 private:
  std::array<SentimentGroup, kEmotionCount> groups_{};
};

/// A set of distinct emotions packed in a 32-bit mask.
class EmotionSet {
 public:
  constexpr EmotionSet() = default;
  constexpr explicit EmotionSet(std::uint32_t bits) : bits_(bits) {}

  constexpr void insert(Emotion e) noexcept { bits_ |= bit(e); }
  constexpr void erase(Emotion e) noexcept { bits_ &= ~bit(e); }
  constexpr bool contains(Emotion e) const noexcept { return (bits_ & bit(e)) != 0; }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::uint32_t bits() const noexcept { return bits_; }

  /// Members in canonical order.
  std::vector<Emotion> members() const;

  friend constexpr bool operator==(EmotionSet, EmotionSet) = default;

 private:
  static constexpr std::uint32_t bit(Emotion e) noexcept { return std::uint32_t{1} << index_of(e); }
  std::uint32_t bits_ = 0;
};

}  // namespace emopair
