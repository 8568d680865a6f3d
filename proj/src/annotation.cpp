#include "emopair/annotation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "emopair/error.hpp"
#include "text_util.hpp"

namespace emopair {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename Rule, typename Parse>
std::vector<Rule> load_keyword_csv(const std::filesystem::path& path, std::string_view header_second, Parse parse) {
  auto in = detail::open_input(path);
  std::vector<Rule> rules;
  std::string line, keyword, value;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = detail::trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    if (!detail::split_last_comma(row, keyword, value)) throw SchemaViolation(where + ": expected two columns");
    if (rules.empty() && keyword == "keyword" && value == header_second) continue;
    if (keyword.empty()) throw SchemaViolation(where + ": empty keyword");
    const auto parsed = parse(value);
    if (!parsed) throw SchemaViolation(where + ": unknown " + std::string(header_second) + " '" + value + "'");
    rules.push_back(Rule{ascii_lower(keyword), *parsed});
  }
  return rules;
}

}  // namespace

std::string_view to_string(Severity s) noexcept {
  switch (s) {
    case Severity::not_depressed: return "not_depressed";
    case Severity::moderate: return "moderate";
    case Severity::severe: return "severe";
  }
  return "not_depressed";
}

std::optional<Severity> parse_severity(std::string_view name) noexcept {
  if (name == "not_depressed") return Severity::not_depressed;
  if (name == "moderate") return Severity::moderate;
  if (name == "severe") return Severity::severe;
  return std::nullopt;
}

std::optional<BinarizationPolicy> parse_binarization(std::string_view name) noexcept {
  if (name == "moderate_or_severe") return BinarizationPolicy::moderate_or_severe;
  if (name == "severe_only") return BinarizationPolicy::severe_only;
  return std::nullopt;
}

EmotionSet distinct_emotions(const AnnotatedPost& post, const EmotionFilter& filter) {
  EmotionSet set;
  for (const auto& s : post.sentences) {
    if (filter.admits(s)) set.insert(s.emotion);
  }
  return set;
}

std::vector<EmotionSet> distinct_emotion_sets(std::span<const AnnotatedPost> posts, const EmotionFilter& filter) {
  std::vector<EmotionSet> sets(posts.size());
  const auto n = static_cast<std::ptrdiff_t>(posts.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    sets[static_cast<std::size_t>(i)] = distinct_emotions(posts[static_cast<std::size_t>(i)], filter);
  }
  return sets;
}

void apply_binarization(std::span<AnnotatedPost> posts, BinarizationPolicy policy) {
  for (auto& p : posts) p.outcome = binarize_depression(p.depression, policy);
}

Emotion lexicon_annotate(std::string_view text, std::span<const LexiconRule> rules) {
  const auto lowered = ascii_lower(text);
  for (const auto& rule : rules) {
    if (lowered.find(rule.keyword) != std::string::npos) return rule.emotion;
  }
  return Emotion::neutral;
}

std::vector<LexiconRule> load_lexicon_rules(const std::filesystem::path& path) {
  return load_keyword_csv<LexiconRule>(path, "emotion", [](std::string_view v) { return parse_emotion(v); });
}

std::vector<DepressionRule> load_depression_rules(const std::filesystem::path& path) {
  return load_keyword_csv<DepressionRule>(path, "severity", [](std::string_view v) { return parse_severity(v); });
}

LexiconAnnotator::LexiconAnnotator(std::vector<LexiconRule> rules, std::vector<DepressionRule> depression_rules)
    : rules_(std::move(rules)), depression_rules_(std::move(depression_rules)) {
  if (rules_.empty()) throw InvalidArgument("lexicon backend needs at least one rule");
  for (auto& r : rules_) r.keyword = ascii_lower(r.keyword);
  for (auto& r : depression_rules_) r.keyword = ascii_lower(r.keyword);
}

PostLabels LexiconAnnotator::annotate(const RawPost& post, std::span<const Sentence> sentences) {
  PostLabels labels;
  labels.emotions.reserve(sentences.size());
  for (const auto& s : sentences) labels.emotions.push_back({lexicon_annotate(s.text, rules_), 1.0});

  const auto text = ascii_lower(full_post_text(post));
  for (const auto& rule : depression_rules_) {
    if (text.find(rule.keyword) != std::string::npos) {
      labels.depression = {rule.severity, 1.0};
      break;
    }
  }
  return labels;
}

PrelabeledAnnotator::PrelabeledAnnotator(std::vector<AnnotatedPost> labeled) {
  for (auto& p : labeled) {
    auto id = p.post_id;
    by_id_.insert_or_assign(std::move(id), std::move(p));
  }
}

PostLabels PrelabeledAnnotator::annotate(const RawPost& post, std::span<const Sentence> sentences) {
  const auto it = by_id_.find(post.id);
  if (it == by_id_.end()) throw AnnotationBackendError("no pre-labeled record for post '" + post.id + "'");
  const auto& labeled = it->second;
  if (labeled.sentences.size() != sentences.size()) {
    throw AnnotationBackendError("pre-labeled post '" + post.id + "' has " +
                                 std::to_string(labeled.sentences.size()) + " sentences, segmentation produced " +
                                 std::to_string(sentences.size()));
  }
  PostLabels labels;
  for (const auto& s : labeled.sentences) labels.emotions.push_back({s.emotion, s.score});
  labels.depression = labeled.depression;
  return labels;
}

std::vector<AnnotatedPost> annotate_corpus(std::span<const RawPost> posts,
                                           std::span<const std::vector<Sentence>> sentences,
                                           Annotator& annotator, const AnnotateOptions& options) {
  if (posts.size() != sentences.size()) {
    throw InvalidArgument("annotate_corpus: " + std::to_string(posts.size()) + " posts but " +
                          std::to_string(sentences.size()) + " sentence lists");
  }
  std::vector<AnnotatedPost> out(posts.size());
  if (posts.empty()) return out;

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  std::size_t failure_index = posts.size();
  std::string failure_message;

  auto label_one = [&](std::size_t i) {
    const auto& post = posts[i];
    const auto& sents = sentences[i];
    auto delay = options.backoff;
    std::string last_error;
    for (std::size_t attempt = 0; attempt < std::max<std::size_t>(1, options.attempts); ++attempt) {
      if (attempt > 0 && delay.count() > 0) {
        std::this_thread::sleep_for(delay);
        delay *= 2;
      }
      try {
        auto labels = annotator.annotate(post, sents);
        if (labels.emotions.size() != sents.size()) {
          last_error = "backend returned " + std::to_string(labels.emotions.size()) + " labels for " +
                       std::to_string(sents.size()) + " sentences";
          continue;
        }
        AnnotatedPost ap;
        ap.post_id = post.id;
        ap.sentences.reserve(sents.size());
        for (std::size_t k = 0; k < sents.size(); ++k) {
          ap.sentences.push_back({sents[k].index, labels.emotions[k].emotion, labels.emotions[k].score});
        }
        ap.depression = labels.depression;
        ap.outcome = binarize_depression(ap.depression, options.policy);
        out[i] = std::move(ap);
        return;
      } catch (const std::exception& e) {
        last_error = e.what();
      }
    }
    std::lock_guard lock(failure_mutex);
    if (i < failure_index) {
      failure_index = i;
      failure_message = last_error;
    }
    failed = true;
  };

  const auto workers = std::clamp<std::size_t>(options.concurrency, 1, posts.size());
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < posts.size() && !failed; i = next++) label_one(i);
      });
    }
  }

  if (failed) {
    throw AnnotationBackendError("annotation failed for post '" + posts[failure_index].id + "' after " +
                                 std::to_string(std::max<std::size_t>(1, options.attempts)) +
                                 " attempts: " + failure_message);
  }
  return out;
}

void write_annotations(std::ostream& out, std::span<const AnnotatedPost> posts) {
  for (const auto& p : posts) {
    ordered_json rec;
    rec["id"] = p.post_id;
    rec["outcome"] = p.outcome;
    rec["depression"] = to_string(p.depression.severity);
    rec["depression_score"] = p.depression.confidence;
    auto sentences = ordered_json::array();
    for (const auto& s : p.sentences) {
      ordered_json js;
      js["i"] = s.index;
      js["emotion"] = to_string(s.emotion);
      js["score"] = s.score;
      sentences.push_back(std::move(js));
    }
    rec["sentences"] = std::move(sentences);
    out << rec.dump() << '\n';
  }
}

void save_annotations(const std::filesystem::path& path, std::span<const AnnotatedPost> posts) {
  auto out = detail::open_output(path);
  write_annotations(out, posts);
  detail::finish_output(out, path);
}

std::vector<AnnotatedPost> read_annotations(std::istream& in, std::string_view source_name) {
  std::vector<AnnotatedPost> posts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto fail = [&](const std::string& what) -> void {
      throw SchemaViolation(std::string(source_name) + ":" + std::to_string(line_no) + ": " + what);
    };

    const json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) fail("not a JSON object");

    AnnotatedPost p;
    const auto id = rec.find("id");
    if (id == rec.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) fail("missing id");
    p.post_id = id->get<std::string>();

    const auto outcome = rec.find("outcome");
    if (outcome == rec.end() || !outcome->is_number_integer()) fail("missing integer outcome");
    const auto y = outcome->get<std::int64_t>();
    if (y != 0 && y != 1) fail("outcome must be 0 or 1");
    p.outcome = static_cast<int>(y);

    const auto dep = rec.find("depression");
    if (dep == rec.end() || !dep->is_string()) fail("missing depression label");
    const auto severity = parse_severity(dep->get_ref<const std::string&>());
    if (!severity) fail("unknown depression label '" + dep->get<std::string>() + "'");
    p.depression.severity = *severity;
    if (const auto ds = rec.find("depression_score"); ds != rec.end()) {
      if (!ds->is_number()) fail("depression_score must be a number");
      p.depression.confidence = ds->get<double>();
      if (!(p.depression.confidence >= 0.0 && p.depression.confidence <= 1.0)) fail("depression_score outside [0,1]");
    }

    const auto sents = rec.find("sentences");
    if (sents == rec.end() || !sents->is_array()) fail("missing sentences array");
    for (const auto& s : *sents) {
      if (!s.is_object()) fail("sentence entry is not an object");
      const auto i = s.find("i");
      const auto emo = s.find("emotion");
      const auto score = s.find("score");
      if (i == s.end() || !i->is_number_unsigned()) fail("sentence index missing");
      if (i->get<std::size_t>() != p.sentences.size()) fail("sentence indices must be contiguous from 0");
      if (emo == s.end() || !emo->is_string()) fail("sentence emotion missing");
      const auto e = parse_emotion(emo->get_ref<const std::string&>());
      if (!e) fail("unknown emotion '" + emo->get<std::string>() + "'");
      double sc = 1.0;
      if (score != s.end()) {
        if (!score->is_number()) fail("score must be a number");
        sc = score->get<double>();
        if (!(sc >= 0.0 && sc <= 1.0)) fail("score outside [0,1]");
      }
      p.sentences.push_back({p.sentences.size(), *e, sc});
    }
    posts.push_back(std::move(p));
  }
  return posts;
}

std::vector<AnnotatedPost> load_annotations(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_annotations(in, path.string());
}

}  // namespace emopair
