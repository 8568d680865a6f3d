#pragma once
// Shared helpers for the unit tests: fixture paths, scratch directories and
// hand-rolled random generators for property tests.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "emopair/annotation.hpp"
#include "emopair/simulate.hpp"

#ifndef EMOPAIR_TEST_DATA_DIR
#error "EMOPAIR_TEST_DATA_DIR must be defined"
#endif

namespace emopair::testing {

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(EMOPAIR_TEST_DATA_DIR) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

/// A fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("emopair-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Builds a post from sentence labels, all scored 1.0.
inline AnnotatedPost make_post(std::string id, std::vector<Emotion> labels, int outcome = 0) {
  AnnotatedPost post;
  post.post_id = std::move(id);
  for (std::size_t i = 0; i < labels.size(); ++i) post.sentences.push_back({i, labels[i], 1.0});
  post.outcome = outcome;
  post.depression = {outcome ? Severity::severe : Severity::not_depressed, 1.0};
  return post;
}

/// Random corpus: up to `max_posts` posts, each with up to `max_sentences`
/// sentences drawn from the first `palette` emotions (neutral included when
/// the palette reaches it), random scores and outcomes.
inline std::vector<AnnotatedPost> random_corpus(FixtureRng& rng, std::size_t max_posts, std::size_t max_sentences,
                                                std::size_t palette = kEmotionCount) {
  const auto n = 1 + rng.below(max_posts);
  std::vector<AnnotatedPost> posts;
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = rng.below(max_sentences + 1);
    AnnotatedPost post;
    post.post_id = "p" + std::to_string(i);
    for (std::size_t s = 0; s < k; ++s) {
      post.sentences.push_back({s, emotion_at(rng.below(palette)), rng.uniform()});
    }
    post.outcome = rng.bernoulli(0.5) ? 1 : 0;
    post.depression = {post.outcome ? Severity::moderate : Severity::not_depressed, rng.uniform()};
    posts.push_back(std::move(post));
  }
  return posts;
}

/// Random set of distinct emotions of size at most `max_size`.
inline EmotionSet random_set(FixtureRng& rng, std::size_t max_size) {
  EmotionSet set;
  const auto k = rng.below(max_size + 1);
  for (std::size_t j = 0; j < k; ++j) set.insert(emotion_at(rng.below(kEmotionCount)));
  return set;
}

}  // namespace emopair::testing
