#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace emopair {

/// One post from a Reddit-style dump.
struct RawPost {
  std::string id;
  std::int64_t created_utc = 0;
  std::string title;
  std::string body;
  std::string source;

  friend bool operator==(const RawPost&, const RawPost&) = default;
};

struct Sentence {
  std::string post_id;
  std::size_t index = 0;
  std::string text;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

/// Inclusive range of epoch seconds.
struct TimeRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  bool contains(std::int64_t t) const noexcept { return t >= begin && t <= end; }

  /// 2012-01-01T00:00:00Z .. 2022-12-31T23:59:59Z.
  static TimeRange default_decade();
};

struct CorpusManifest {
  std::size_t post_count = 0;
  std::size_t sentence_count = 0;
  std::int64_t time_min = 0;
  std::int64_t time_max = 0;
  /// Malformed lines, posts with neither title nor body, and repeated ids.
  std::size_t skipped_records = 0;
  /// Well-formed posts dropped by the time filter.
  std::size_t filtered_records = 0;
  /// Non-blank input lines; always post_count + skipped + filtered.
  std::size_t total_records = 0;
};

struct LoadOptions {
  std::optional<TimeRange> time_range;
  /// When set, a nonempty title becomes sentence 0 of its post.
  bool include_titles = true;
};

/// Posts ordered by (created_utc, id), with their sentences in the same order.
struct Corpus {
  std::vector<RawPost> posts;
  std::vector<std::vector<Sentence>> sentences;
  CorpusManifest manifest;
};

/// Reads a JSON-lines dump. Required keys: `id` (string) and `created_utc`
/// (integer; integral floats and digit strings are accepted too). Optional:
/// `title`, `selftext` or `body`, `subreddit`. Lines that fail to parse or
/// lack the required keys are skipped and counted.
///
/// Throws IoError when the file cannot be read and MalformedCorpus when the
/// file has records but none of them is well-formed.
Corpus load_corpus(const std::filesystem::path& path, const LoadOptions& options = {});

/// Parses one dump line. Returns nullopt for a malformed record.
std::optional<RawPost> parse_post_record(std::string_view line);

/// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

/// Rule-based splitter: the title (if kept and nonempty) is sentence 0 as a
/// whole; the body is cut after '.', '!' or '?' when the next character is
/// whitespace or the end of text. Terminators stay with their sentence. No
/// abbreviation handling.
std::vector<Sentence> segment_sentences(const RawPost& post, bool include_title = true);

/// Segments every post; runs in parallel, output in input order.
std::vector<std::vector<Sentence>> segment_corpus(std::span<const RawPost> posts, bool include_title = true);

/// Title and body joined by a blank line; the text sent to post-level
/// classifiers.
std::string full_post_text(const RawPost& post);

/// Accepts `YYYY-MM-DD` or `YYYY-MM-DDTHH:MM:SS[Z]` (UTC). A bare date maps to
/// the first second of the day, or the last one when `end_of_day` is set.
/// Throws InvalidArgument on anything else.
std::int64_t parse_iso8601(std::string_view text, bool end_of_day = false);

}  // namespace emopair
