#include "emopair/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "emopair/error.hpp"
#include "text_util.hpp"

namespace emopair {
namespace {

using nlohmann::json;

std::optional<std::int64_t> read_epoch(const json& v) {
  if (v.is_number_integer()) {
    return v.get<std::int64_t>();
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d) || d != std::floor(d) || std::abs(d) > 9.0e15) return std::nullopt;
    return static_cast<std::int64_t>(d);
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    std::int64_t out = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return out;
  }
  return std::nullopt;
}

std::string read_text(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

// Pushshift placeholders for moderated or deleted content.
bool is_placeholder(const std::string& s) { return s == "[removed]" || s == "[deleted]"; }

bool has_content(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return !detail::is_space(c); });
}

}  // namespace

TimeRange TimeRange::default_decade() {
  return TimeRange{parse_iso8601("2012-01-01"), parse_iso8601("2022-12-31", true)};
}

std::optional<RawPost> parse_post_record(std::string_view line) {
  const json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) return std::nullopt;

  const auto id = obj.find("id");
  if (id == obj.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) return std::nullopt;
  const auto created = obj.find("created_utc");
  if (created == obj.end()) return std::nullopt;
  const auto epoch = read_epoch(*created);
  if (!epoch || *epoch < 0) return std::nullopt;

  RawPost post;
  post.id = id->get<std::string>();
  post.created_utc = *epoch;
  post.title = read_text(obj, "title");
  post.body = obj.contains("selftext") ? read_text(obj, "selftext") : read_text(obj, "body");
  if (is_placeholder(post.body)) post.body.clear();
  post.source = read_text(obj, "subreddit");
  return post;
}

Corpus load_corpus(const std::filesystem::path& path, const LoadOptions& options) {
  auto in = detail::open_input(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (has_content(line)) lines.push_back(std::move(line));
  }
  if (in.bad()) throw IoError("read error on '" + path.string() + "'");

  const auto n = static_cast<std::ptrdiff_t>(lines.size());
  std::vector<std::optional<RawPost>> parsed(lines.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    parsed[static_cast<std::size_t>(i)] = parse_post_record(lines[static_cast<std::size_t>(i)]);
  }

  Corpus corpus;
  auto& m = corpus.manifest;
  m.total_records = lines.size();
  std::unordered_set<std::string> seen;
  std::size_t well_formed = 0;
  for (auto& rec : parsed) {
    if (!rec || (!has_content(rec->title) && !has_content(rec->body)) || !seen.insert(rec->id).second) {
      ++m.skipped_records;
      continue;
    }
    ++well_formed;
    if (options.time_range && !options.time_range->contains(rec->created_utc)) {
      ++m.filtered_records;
      continue;
    }
    corpus.posts.push_back(std::move(*rec));
  }
  if (m.total_records > 0 && well_formed == 0) {
    throw MalformedCorpus("no well-formed records among " + std::to_string(m.total_records) + " lines of '" +
                          path.string() + "'");
  }

  std::sort(corpus.posts.begin(), corpus.posts.end(), [](const RawPost& a, const RawPost& b) {
    return a.created_utc != b.created_utc ? a.created_utc < b.created_utc : a.id < b.id;
  });

  corpus.sentences = segment_corpus(corpus.posts, options.include_titles);
  m.post_count = corpus.posts.size();
  for (const auto& s : corpus.sentences) m.sentence_count += s.size();
  if (!corpus.posts.empty()) {
    m.time_min = corpus.posts.front().created_utc;
    m.time_max = corpus.posts.back().created_utc;
  }
  return corpus;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (detail::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<Sentence> segment_sentences(const RawPost& post, bool include_title) {
  std::vector<Sentence> out;
  auto emit = [&](std::string text) {
    out.push_back(Sentence{post.id, out.size(), std::move(text)});
  };

  if (include_title) {
    auto title = normalize_whitespace(post.title);
    if (!title.empty()) emit(std::move(title));
  }

  const std::string body = normalize_whitespace(post.body);
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (i + 1 < body.size() && body[i + 1] != ' ') continue;
    auto piece = detail::trim(std::string_view(body).substr(start, i + 1 - start));
    if (!piece.empty()) emit(std::string(piece));
    start = i + 1;
  }
  if (start < body.size()) {
    auto tail = detail::trim(std::string_view(body).substr(start));
    if (!tail.empty()) emit(std::string(tail));
  }
  return out;
}

std::vector<std::vector<Sentence>> segment_corpus(std::span<const RawPost> posts, bool include_title) {
  std::vector<std::vector<Sentence>> out(posts.size());
  const auto n = static_cast<std::ptrdiff_t>(posts.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = segment_sentences(posts[k], include_title);
  }
  return out;
}

std::string full_post_text(const RawPost& post) {
  const auto title = normalize_whitespace(post.title);
  const auto body = normalize_whitespace(post.body);
  if (title.empty()) return body;
  if (body.empty()) return title;
  return title + "\n\n" + body;
}

std::int64_t parse_iso8601(std::string_view text, bool end_of_day) {
  auto fail = [&]() -> std::int64_t {
    throw InvalidArgument("invalid ISO-8601 date '" + std::string(text) + "' (expected YYYY-MM-DD[THH:MM:SS[Z]])");
  };
  auto number = [&](std::size_t pos, std::size_t len) -> int {
    if (pos + len > text.size()) fail();
    int v = 0;
    const auto res = std::from_chars(text.data() + pos, text.data() + pos + len, v);
    if (res.ec != std::errc{} || res.ptr != text.data() + pos + len) fail();
    return v;
  };

  if (text.size() < 10 || text[4] != '-' || text[7] != '-') fail();
  const int y = number(0, 4);
  const int mo = number(5, 2);
  const int d = number(8, 2);
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) fail();

  std::int64_t seconds_in_day = end_of_day ? 86399 : 0;
  if (text.size() > 10) {
    if (text[10] != 'T' && text[10] != ' ') fail();
    if (text.size() < 19 || text[13] != ':' || text[16] != ':') fail();
    const int h = number(11, 2);
    const int mi = number(14, 2);
    const int s = number(17, 2);
    const auto rest = text.substr(19);
    if (!(rest.empty() || rest == "Z")) fail();
    if (h > 23 || mi > 59 || s > 60) fail();
    seconds_in_day = h * 3600 + mi * 60 + s;
  }
  const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + seconds_in_day;
}

}  // namespace emopair
