#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emopair/corpus.hpp"
#include "emopair/emotion.hpp"

namespace emopair {

enum class Severity : std::uint8_t { not_depressed, moderate, severe };

std::string_view to_string(Severity s) noexcept;
std::optional<Severity> parse_severity(std::string_view name) noexcept;

struct DepressionLabel {
  Severity severity = Severity::not_depressed;
  double confidence = 1.0;

  friend bool operator==(const DepressionLabel&, const DepressionLabel&) = default;
};

enum class BinarizationPolicy : std::uint8_t { moderate_or_severe, severe_only };

std::optional<BinarizationPolicy> parse_binarization(std::string_view name) noexcept;

/// moderate_or_severe: moderate and severe -> 1. severe_only: severe -> 1.
constexpr int binarize_depression(DepressionLabel label, BinarizationPolicy policy) noexcept {
  if (policy == BinarizationPolicy::severe_only) return label.severity == Severity::severe ? 1 : 0;
  return label.severity == Severity::not_depressed ? 0 : 1;
}

struct SentenceEmotion {
  std::size_t index = 0;
  Emotion emotion = Emotion::neutral;
  double score = 1.0;

  friend bool operator==(const SentenceEmotion&, const SentenceEmotion&) = default;
};

/// One analysed post: a top-1 emotion per sentence plus the post-level label.
struct AnnotatedPost {
  std::string post_id;
  std::vector<SentenceEmotion> sentences;
  DepressionLabel depression;
  int outcome = 0;

  friend bool operator==(const AnnotatedPost&, const AnnotatedPost&) = default;
};

/// Which sentence labels take part in downstream counting.
struct EmotionFilter {
  bool include_neutral = false;
  /// Sentences scored below this are ignored. 0 keeps everything.
  double min_score = 0.0;

  bool admits(const SentenceEmotion& s) const noexcept {
    return (include_neutral || s.emotion != Emotion::neutral) && s.score >= min_score;
  }
};

EmotionSet distinct_emotions(const AnnotatedPost& post, const EmotionFilter& filter);

/// distinct_emotions for every post, computed in parallel.
std::vector<EmotionSet> distinct_emotion_sets(std::span<const AnnotatedPost> posts, const EmotionFilter& filter);

/// Recomputes `outcome` of every post from its depression label.
void apply_binarization(std::span<AnnotatedPost> posts, BinarizationPolicy policy);

// ---------------------------------------------------------------------------
// Backends

struct EmotionScore {
  Emotion emotion = Emotion::neutral;
  double score = 1.0;
};

struct PostLabels {
  std::vector<EmotionScore> emotions;  // one per sentence, same order
  DepressionLabel depression;
};

/// Annotator backends. `annotate` is called concurrently from several threads
/// and must be safe for that.
class Annotator {
 public:
  virtual ~Annotator() = default;
  virtual PostLabels annotate(const RawPost& post, std::span<const Sentence> sentences) = 0;
};

struct LexiconRule {
  std::string keyword;  // stored lower-cased
  Emotion emotion = Emotion::neutral;
};

struct DepressionRule {
  std::string keyword;  // stored lower-cased
  Severity severity = Severity::not_depressed;
};

/// First rule whose keyword occurs in `text` (ASCII case-insensitive) wins;
/// neutral when nothing matches.
Emotion lexicon_annotate(std::string_view text, std::span<const LexiconRule> rules);

/// Ordered `keyword,emotion` CSV. An optional `keyword,emotion` header line is
/// skipped; blank lines and lines starting with '#' are ignored.
std::vector<LexiconRule> load_lexicon_rules(const std::filesystem::path& path);

/// Ordered `keyword,severity` CSV, same conventions as the lexicon rules.
std::vector<DepressionRule> load_depression_rules(const std::filesystem::path& path);

/// Deterministic keyword backend. Emotion scores are fixed at 1.0. The
/// depression label comes from the first matching depression rule over the
/// full post text, not_depressed otherwise.
class LexiconAnnotator final : public Annotator {
 public:
  explicit LexiconAnnotator(std::vector<LexiconRule> rules, std::vector<DepressionRule> depression_rules = {});
  PostLabels annotate(const RawPost& post, std::span<const Sentence> sentences) override;

 private:
  std::vector<LexiconRule> rules_;
  std::vector<DepressionRule> depression_rules_;
};

/// Serves labels from an existing labeled-corpus file, keyed by post id.
class PrelabeledAnnotator final : public Annotator {
 public:
  explicit PrelabeledAnnotator(std::vector<AnnotatedPost> labeled);
  PostLabels annotate(const RawPost& post, std::span<const Sentence> sentences) override;

 private:
  std::unordered_map<std::string, AnnotatedPost> by_id_;
};

struct AnnotateOptions {
  BinarizationPolicy policy = BinarizationPolicy::moderate_or_severe;
  /// Maximum number of posts in flight at once.
  std::size_t concurrency = 4;
  /// Attempts per post before giving up.
  std::size_t attempts = 3;
  /// Backoff before the second attempt; doubles after each failure.
  std::chrono::milliseconds backoff{200};
};

/// Labels every post. Output order equals input order. On a post that still
/// fails after all attempts, throws AnnotationBackendError naming its id and
/// returns nothing.
std::vector<AnnotatedPost> annotate_corpus(std::span<const RawPost> posts,
                                           std::span<const std::vector<Sentence>> sentences,
                                           Annotator& annotator, const AnnotateOptions& options = {});

// ---------------------------------------------------------------------------
// Labeled-corpus JSON-lines format

void write_annotations(std::ostream& out, std::span<const AnnotatedPost> posts);
void save_annotations(const std::filesystem::path& path, std::span<const AnnotatedPost> posts);

/// Throws SchemaViolation with the 1-based line number on any bad record.
std::vector<AnnotatedPost> read_annotations(std::istream& in, std::string_view source_name = "<stream>");
std::vector<AnnotatedPost> load_annotations(const std::filesystem::path& path);

}  // namespace emopair
