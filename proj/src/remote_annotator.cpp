#include "emopair/remote_annotator.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "emopair/error.hpp"

namespace emopair {
namespace {

using nlohmann::json;

httplib::Client make_client(const RemoteAnnotatorConfig& config) {
  httplib::Client client(config.endpoint);
  client.set_connection_timeout(config.timeout);
  client.set_read_timeout(config.timeout);
  client.set_write_timeout(config.timeout);
  return client;
}

json post_json(const RemoteAnnotatorConfig& config, const char* route, const json& body) {
  auto client = make_client(config);
  const auto res = client.Post(route, body.dump(), "application/json");
  if (!res) {
    throw AnnotationBackendError(std::string(route) + ": " + httplib::to_string(res.error()) + " (" +
                                 config.endpoint + ")");
  }
  if (res->status != 200) {
    throw AnnotationBackendError(std::string(route) + ": HTTP " + std::to_string(res->status));
  }
  json parsed = json::parse(res->body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw AnnotationBackendError(std::string(route) + ": response is not a JSON object");
  }
  return parsed;
}

double read_score(const json& obj, const char* route) {
  const auto it = obj.find("score");
  if (it == obj.end() || !it->is_number()) throw AnnotationBackendError(std::string(route) + ": missing score");
  const double s = it->get<double>();
  if (!(s >= 0.0 && s <= 1.0)) throw AnnotationBackendError(std::string(route) + ": score outside [0,1]");
  return s;
}

}  // namespace

RemoteAnnotator::RemoteAnnotator(RemoteAnnotatorConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw InvalidArgument(std::string("remote backend needs an endpoint (flag or ") + kAnnotatorUrlEnv + ")");
  }
  if (config_.max_batch == 0 || config_.max_batch > kMaxEmotionBatch) {
    throw InvalidArgument("batch size must be in [1, " + std::to_string(kMaxEmotionBatch) + "]");
  }
}

std::vector<EmotionScore> RemoteAnnotator::classify_sentences(std::span<const std::string> texts) const {
  constexpr const char* route = "/v1/emotions";
  std::vector<EmotionScore> out;
  out.reserve(texts.size());
  for (std::size_t begin = 0; begin < texts.size(); begin += config_.max_batch) {
    const auto batch = texts.subspan(begin, std::min(config_.max_batch, texts.size() - begin));
    json request;
    request["texts"] = json::array();
    for (const auto& t : batch) request["texts"].push_back(t);

    const auto response = post_json(config_, route, request);
    const auto results = response.find("results");
    if (results == response.end() || !results->is_array()) {
      throw AnnotationBackendError(std::string(route) + ": missing results array");
    }
    if (results->size() != batch.size()) {
      throw AnnotationBackendError(std::string(route) + ": " + std::to_string(results->size()) +
                                   " results for " + std::to_string(batch.size()) + " texts");
    }
    for (const auto& r : *results) {
      const auto label = r.find("label");
      if (!r.is_object() || label == r.end() || !label->is_string()) {
        throw AnnotationBackendError(std::string(route) + ": result without label");
      }
      const auto emotion = parse_emotion(label->get_ref<const std::string&>());
      if (!emotion) {
        throw AnnotationBackendError(std::string(route) + ": unknown label '" + label->get<std::string>() + "'");
      }
      out.push_back({*emotion, read_score(r, route)});
    }
  }
  return out;
}

DepressionLabel RemoteAnnotator::classify_post(const std::string& text) const {
  constexpr const char* route = "/v1/depression";
  json request;
  request["text"] = text;
  const auto response = post_json(config_, route, request);
  const auto label = response.find("label");
  if (label == response.end() || !label->is_string()) {
    throw AnnotationBackendError(std::string(route) + ": missing label");
  }
  const auto severity = parse_severity(label->get_ref<const std::string&>());
  if (!severity) {
    throw AnnotationBackendError(std::string(route) + ": unknown label '" + label->get<std::string>() + "'");
  }
  return {*severity, read_score(response, route)};
}

PostLabels RemoteAnnotator::annotate(const RawPost& post, std::span<const Sentence> sentences) {
  std::vector<std::string> texts;
  texts.reserve(sentences.size());
  for (const auto& s : sentences) texts.push_back(s.text);

  PostLabels labels;
  labels.emotions = classify_sentences(texts);
  const auto full = full_post_text(post);
  if (!full.empty()) labels.depression = classify_post(full);
  return labels;
}

bool RemoteAnnotator::healthy() const {
  auto client = make_client(config_);
  const auto res = client.Get("/health");
  return res && res->status == 200;
}

std::string annotator_endpoint_from_env() {
  const char* v = std::getenv(kAnnotatorUrlEnv);
  return v ? std::string(v) : std::string();
}

}  // namespace emopair
