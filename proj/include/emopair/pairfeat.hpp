#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emopair/annotation.hpp"
#include "emopair/kernels.hpp"

namespace emopair {

/// An emotion pair feature. Unordered pairs keep first < second canonically;
/// ordered pairs keep the direction (first occurs before second).
struct EmotionPair {
  Emotion first = Emotion::neutral;
  Emotion second = Emotion::neutral;

  /// Canonical unordered pair.
  static EmotionPair unordered(Emotion a, Emotion b) noexcept {
    return index_of(a) < index_of(b) ? EmotionPair{a, b} : EmotionPair{b, a};
  }

  /// "first-second", e.g. "amusement-grief".
  std::string name() const;

  friend auto operator<=>(const EmotionPair&, const EmotionPair&) = default;
};

/// Parses "a-b" into an unordered pair. nullopt for unknown names or a == b.
std::optional<EmotionPair> parse_pair(std::string_view text) noexcept;

struct PairOptions {
  EmotionFilter filter;
  /// Directed pairs (a before b) instead of unordered ones.
  bool ordered = false;
};

/// All 2-subsets of the post's distinct emotions, canonical order.
std::vector<EmotionPair> extract_pairs(const AnnotatedPost& post, const EmotionFilter& filter = {});

/// (a, b) with a != b such that some sentence labeled a comes before some
/// sentence labeled b. Sorted canonically.
std::vector<EmotionPair> extract_ordered_pairs(const AnnotatedPost& post, const EmotionFilter& filter = {});

std::vector<EmotionPair> extract_features(const AnnotatedPost& post, const PairOptions& options);

struct PairVocabulary {
  std::vector<EmotionPair> pairs;
  /// Posts containing each pair.
  std::vector<std::uint64_t> support;
  std::size_t min_support = 0;
  bool ordered = false;

  std::size_t size() const noexcept { return pairs.size(); }
  std::optional<std::size_t> column_of(EmotionPair pair) const noexcept;
};

/// max(25, ceil(0.1% of posts)).
std::size_t default_min_support(std::size_t n_posts) noexcept;

/// Pairs seen in at least `min_support` posts, ordered by support descending
/// then canonical pair order. Throws EmptyVocabulary when none qualify and
/// InvalidArgument when min_support is 0.
PairVocabulary build_vocabulary(std::span<const AnnotatedPost> posts, std::size_t min_support,
                                const PairOptions& options = {});

/// A vocabulary with a caller-chosen column order (e.g. a planted model).
/// Support is measured on `posts`; min_support is 0.
PairVocabulary fixed_vocabulary(std::span<const AnnotatedPost> posts, std::vector<EmotionPair> pairs,
                                const PairOptions& options = {});

/// Posts x pair-features binary matrix plus the outcome vector. Column 0 of the
/// model is an implicit intercept that is not stored.
struct DesignMatrix {
  kernels::SparseBinaryRows x;
  std::vector<std::uint8_t> y;
  /// One name per stored column.
  std::vector<std::string> feature_names;

  std::size_t rows() const noexcept { return x.rows(); }
  std::size_t features() const noexcept { return x.n_cols; }
};

DesignMatrix build_design_matrix(std::span<const AnnotatedPost> posts, const PairVocabulary& vocabulary,
                                 const PairOptions& options = {});

/// Builds a design matrix straight from rows of column indices. Rows are
/// sorted and deduplicated.
DesignMatrix make_design_matrix(std::vector<std::vector<std::uint32_t>> rows, std::vector<std::uint8_t> y,
                                std::size_t n_cols, std::vector<std::string> feature_names = {});

/// Writes `<prefix>triplets.csv` (row,col,value), `<prefix>vocabulary.csv`
/// (col,emotion_a,emotion_b,support) and `<prefix>outcome.csv` (row,y) into
/// `directory`.
void export_design(const DesignMatrix& matrix, const PairVocabulary& vocabulary,
                   const std::filesystem::path& directory, const std::string& prefix = "");

}  // namespace emopair
