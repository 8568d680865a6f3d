#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "emopair/annotation.hpp"

namespace emopair {

enum class FrequencyUnit : std::uint8_t {
  /// Every labeled sentence counts once.
  sentence,
  /// Each emotion counts once per post that contains it.
  post_presence,
};

std::optional<FrequencyUnit> parse_frequency_unit(std::string_view name) noexcept;

struct RankedEmotion {
  Emotion emotion = Emotion::neutral;
  std::uint64_t count = 0;
  double share = 0.0;
};

/// Emotion frequencies ranked by count (descending, ties in canonical order).
/// Only emotions with a nonzero count are ranked.
struct DistributionSummary {
  std::vector<RankedEmotion> ranked;
  std::vector<double> cdf;
  /// ccdf[k] = 1 - cdf[k].
  std::vector<double> ccdf;
  std::uint64_t total = 0;
};

/// Throws EmptyDistribution when no sentence survives the filter.
DistributionSummary emotion_frequency(std::span<const AnnotatedPost> posts, FrequencyUnit unit,
                                      const EmotionFilter& filter = {});

/// Ranks raw counts indexed by canonical emotion order.
DistributionSummary summarize_counts(const std::array<std::uint64_t, kEmotionCount>& counts);

/// Share of the k most frequent emotions, i.e. cdf[k-1]. Throws BoundsError
/// unless 1 <= k <= ranked.size().
double top_k_share(const DistributionSummary& summary, std::size_t k);

struct PairCountHistogram {
  /// C(k, 2) -> number of posts.
  std::map<std::uint64_t, std::uint64_t> by_pairs;
  /// k = distinct emotions in the post -> number of posts.
  std::map<std::uint64_t, std::uint64_t> by_distinct;
};

PairCountHistogram pair_count_histogram(std::span<const AnnotatedPost> posts, const EmotionFilter& filter = {});

/// Columns: rank, emotion, count, share, cdf, ccdf.
void write_frequency_tsv(std::ostream& out, const DistributionSummary& summary);
void export_frequency_tsv(const DistributionSummary& summary, const std::filesystem::path& destination);

/// Columns: pairs, posts.
void write_histogram_tsv(std::ostream& out, const PairCountHistogram& histogram);
void export_histogram_tsv(const PairCountHistogram& histogram, const std::filesystem::path& destination);

}  // namespace emopair
