#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "emopair/annotation.hpp"
#include "emopair/kernels.hpp"

namespace emopair {

enum class CountMode : std::uint8_t {
  /// A post adds 1 to each pair of its distinct emotions.
  distinct,
  /// A post adds min(occurrences of a, occurrences of b) to pair {a, b}.
  multiset,
};

std::optional<CountMode> parse_count_mode(std::string_view name) noexcept;

/// Symmetric 28x28 post-level co-occurrence counts in canonical order.
/// The diagonal is always 0.
class CooccurrenceMatrix {
 public:
  CooccurrenceMatrix() = default;
  CooccurrenceMatrix(const kernels::PairCounts& counts, std::size_t post_count)
      : counts_(counts), post_count_(post_count) {}

  std::uint64_t operator()(Emotion a, Emotion b) const noexcept {
    return counts_[index_of(a) * kEmotionCount + index_of(b)];
  }
  std::size_t post_count() const noexcept { return post_count_; }
  const kernels::PairCounts& raw() const noexcept { return counts_; }

  /// Sum over a < b.
  std::uint64_t upper_triangle_sum() const noexcept;

  friend bool operator==(const CooccurrenceMatrix&, const CooccurrenceMatrix&) = default;

 private:
  kernels::PairCounts counts_{};
  std::size_t post_count_ = 0;
};

CooccurrenceMatrix build_cooccurrence(std::span<const AnnotatedPost> posts, const EmotionFilter& filter = {},
                                      CountMode mode = CountMode::distinct);

struct NodeStats {
  /// Sentences carrying the emotion, corpus-wide.
  std::array<std::uint64_t, kEmotionCount> occurrence_count{};
  /// Posts whose distinct set contains the emotion.
  std::array<std::uint64_t, kEmotionCount> post_presence{};
};

NodeStats compute_node_stats(std::span<const AnnotatedPost> posts, const EmotionFilter& filter = {});

struct NetworkNode {
  Emotion emotion = Emotion::neutral;
  std::uint64_t occurrence_count = 0;
  std::uint64_t post_presence = 0;
  /// Sum of incident edge weights.
  std::uint64_t weighted_degree = 0;
};

struct NetworkEdge {
  Emotion source = Emotion::neutral;  // source < target canonically
  Emotion target = Emotion::neutral;
  std::uint64_t weight = 0;
};

struct EmotionNetwork {
  std::vector<NetworkNode> nodes;  // canonical order
  std::vector<NetworkEdge> edges;  // canonical (source, target) order

  const NetworkNode* find(Emotion e) const noexcept;
};

/// Edges are the nonzero upper-triangle entries; nodes are the emotions that
/// occur at least once or touch an edge.
EmotionNetwork matrix_to_network(const CooccurrenceMatrix& matrix, const NodeStats& stats);

enum class NetworkFormat : std::uint8_t { graphml, dot, edge_csv };

std::optional<NetworkFormat> parse_network_format(std::string_view name) noexcept;

void write_network(std::ostream& out, const EmotionNetwork& network, NetworkFormat format,
                   const SentimentMap& sentiment = SentimentMap::defaults());
void export_network(const EmotionNetwork& network, NetworkFormat format, const std::filesystem::path& destination,
                    const SentimentMap& sentiment = SentimentMap::defaults());

enum class MatrixOrder : std::uint8_t { canonical, sentiment };

std::optional<MatrixOrder> parse_matrix_order(std::string_view name) noexcept;

/// Square CSV with emotion names as header row and first column. Neutral is
/// listed only when `include_neutral` is set.
void write_matrix_csv(std::ostream& out, const CooccurrenceMatrix& matrix, MatrixOrder order, bool include_neutral,
                      const SentimentMap& sentiment = SentimentMap::defaults());
void export_matrix_csv(const CooccurrenceMatrix& matrix, const std::filesystem::path& destination, MatrixOrder order,
                       bool include_neutral, const SentimentMap& sentiment = SentimentMap::defaults());

}  // namespace emopair
