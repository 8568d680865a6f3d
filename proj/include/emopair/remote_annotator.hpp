#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "emopair/annotation.hpp"

namespace emopair {

/// Environment variable holding the annotator service base URL.
inline constexpr const char* kAnnotatorUrlEnv = "EMOPAIR_ANNOTATOR_URL";

/// Largest sentence batch the service accepts in one /v1/emotions request.
inline constexpr std::size_t kMaxEmotionBatch = 64;

struct RemoteAnnotatorConfig {
  /// Base URL, e.g. "http://127.0.0.1:8080".
  std::string endpoint;
  std::size_t max_batch = kMaxEmotionBatch;
  std::chrono::seconds timeout{30};
};

/// Client for the annotator service:
///
///   POST /v1/emotions    {"texts": [...]}  -> {"results": [{"label", "score"}, ...]}
///   POST /v1/depression  {"text": "..."}   -> {"label", "score", "truncated"}
///   GET  /health                           -> {"status", "model_loaded"}
///
/// Sentences go out in batches of at most `max_batch`; the post-level request
/// carries the full post text. Any transport failure, non-200 status, or
/// response that breaks the schema raises AnnotationBackendError. Retries are
/// left to annotate_corpus.
class RemoteAnnotator final : public Annotator {
 public:
  explicit RemoteAnnotator(RemoteAnnotatorConfig config);

  PostLabels annotate(const RawPost& post, std::span<const Sentence> sentences) override;

  std::vector<EmotionScore> classify_sentences(std::span<const std::string> texts) const;
  DepressionLabel classify_post(const std::string& text) const;

  /// True when /health answers 200.
  bool healthy() const;

 private:
  RemoteAnnotatorConfig config_;
};

/// Reads kAnnotatorUrlEnv; empty when unset.
std::string annotator_endpoint_from_env();

}  // namespace emopair
