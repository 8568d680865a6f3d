#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "emopair/error.hpp"
#include "emopair/remote_annotator.hpp"
#include "emopair/simulate.hpp"

using namespace emopair;
using nlohmann::json;

namespace {

// In-process stand-in for the annotator service. The emotion label of a text
// is its last word when that names an emotion (neutral otherwise), scored
// 0.75; the post label is `severe` when the text contains "severe".
class StubService {
 public:
  StubService() {
    server_.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"status":"ok","model_loaded":false})", "application/json");
    });
    server_.Post("/v1/emotions", [this](const httplib::Request& req, httplib::Response& res) {
      emotion_calls_++;
      if (fail_emotions_) {
        res.status = 503;
        res.set_header("Retry-After", "1");
        return;
      }
      const auto body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("texts") || !body["texts"].is_array() || body["texts"].empty()) {
        res.status = 400;
        return;
      }
      if (body["texts"].size() > kMaxEmotionBatch) {
        res.status = 413;
        return;
      }
      {
        std::lock_guard lock(mutex_);
        batch_sizes_.push_back(body["texts"].size());
      }
      json out;
      out["results"] = json::array();
      for (const auto& t : body["texts"]) {
        const auto text = t.get<std::string>();
        auto word = text.substr(text.find_last_of(' ') + 1);
        if (!word.empty() && word.back() == '.') word.pop_back();
        std::string label = parse_emotion(word) ? word : "neutral";
        if (text == "garbage-label") label = "glee";
        out["results"].push_back({{"label", label}, {"score", 0.75}});
      }
      if (drop_one_) out["results"].erase(out["results"].size() - 1);
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/v1/depression", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("text") || body["text"].get<std::string>().empty()) {
        res.status = 400;
        return;
      }
      const bool severe = body["text"].get<std::string>().find("severe") != std::string::npos;
      json out{{"label", severe ? "severe" : "not_depressed"}, {"score", 0.9}, {"truncated", false}};
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubService() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
  std::vector<std::size_t> batch_sizes() {
    std::lock_guard lock(mutex_);
    return batch_sizes_;
  }

  std::atomic<bool> fail_emotions_{false};
  std::atomic<bool> drop_one_{false};
  std::atomic<int> emotion_calls_{0};

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mutex_;
  std::vector<std::size_t> batch_sizes_;
};

}  // namespace

TEST_CASE("remote client batches sentences and keeps their order") {
  StubService stub;
  RemoteAnnotator client({stub.endpoint()});
  CHECK(client.healthy());

  std::vector<std::string> texts;
  for (std::size_t i = 0; i < 150; ++i) texts.push_back("this is " + std::string(to_string(emotion_at(i % 27))));
  const auto labels = client.classify_sentences(texts);
  REQUIRE(labels.size() == 150);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    CHECK(labels[i].emotion == emotion_at(i % 27));
    CHECK(labels[i].score == 0.75);
  }
  CHECK(stub.batch_sizes() == std::vector<std::size_t>{64, 64, 22});
}

TEST_CASE("remote client honours a smaller batch size and rejects oversize configs") {
  StubService stub;
  RemoteAnnotator client({stub.endpoint(), 10});
  std::vector<std::string> texts(25, "joy");
  CHECK(client.classify_sentences(texts).size() == 25);
  CHECK(stub.batch_sizes() == std::vector<std::size_t>{10, 10, 5});
  CHECK_THROWS_AS(RemoteAnnotator({stub.endpoint(), kMaxEmotionBatch + 1}), InvalidArgument);
  CHECK_THROWS_AS(RemoteAnnotator({""}), InvalidArgument);
}

TEST_CASE("remote client turns service failures into AnnotationBackendError") {
  StubService stub;
  RemoteAnnotator client({stub.endpoint()});
  const std::vector<std::string> one{"joy"};

  stub.fail_emotions_ = true;
  CHECK_THROWS_AS(client.classify_sentences(one), AnnotationBackendError);
  stub.fail_emotions_ = false;

  stub.drop_one_ = true;
  CHECK_THROWS_AS(client.classify_sentences(one), AnnotationBackendError);
  stub.drop_one_ = false;

  const std::vector<std::string> garbage{"garbage-label"};
  CHECK_THROWS_AS(client.classify_sentences(garbage), AnnotationBackendError);

  CHECK_THROWS_AS(client.classify_post(""), AnnotationBackendError);
  CHECK(client.classify_post("a severe case").severity == Severity::severe);
  CHECK(client.classify_post("fine").severity == Severity::not_depressed);

  RemoteAnnotator nowhere({"http://127.0.0.1:1", kMaxEmotionBatch, std::chrono::seconds(2)});
  CHECK_THROWS_AS(nowhere.classify_sentences(one), AnnotationBackendError);
  CHECK_FALSE(nowhere.healthy());
}

TEST_CASE("annotating a rendered synthetic corpus through the service reproduces its labels") {
  StubService stub;
  RemoteAnnotator client({stub.endpoint()});

  auto model = PlantedModel::reference(3);
  const auto posts = generate_corpus(model, 60);
  const auto raw = render_raw_posts(posts);
  const auto sentences = segment_corpus(raw, false);
  AnnotateOptions opts;
  opts.policy = BinarizationPolicy::severe_only;
  opts.concurrency = 4;
  const auto labeled = annotate_corpus(raw, sentences, client, opts);
  REQUIRE(labeled.size() == posts.size());
  for (std::size_t i = 0; i < posts.size(); ++i) {
    CHECK(labeled[i].post_id == posts[i].post_id);
    CHECK(labeled[i].outcome == posts[i].outcome);
    REQUIRE(labeled[i].sentences.size() == posts[i].sentences.size());
    for (std::size_t k = 0; k < posts[i].sentences.size(); ++k) {
      CHECK(labeled[i].sentences[k].emotion == posts[i].sentences[k].emotion);
    }
  }
}

TEST_CASE("endpoint comes from the environment") {
  ::setenv(kAnnotatorUrlEnv, "http://annotator:9000", 1);
  CHECK(annotator_endpoint_from_env() == "http://annotator:9000");
  ::unsetenv(kAnnotatorUrlEnv);
  CHECK(annotator_endpoint_from_env().empty());
}
