#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <vector>

#include "emopair/annotation.hpp"
#include "emopair/pairfeat.hpp"

namespace emopair {

/// Portable random source for fixtures.
///
/// Engine: std::mt19937_64 (the 64-bit Mersenne Twister, whose output
/// sequence the C++ standard pins exactly), seeded with the 64-bit seed.
/// Uniform reals take the top 53 bits: (x >> 11) * 2^-53. Bernoulli(p) is
/// uniform() < p. Integers below n reject draws >= the largest multiple of n
/// and return x % n. No std distributions are used, so the stream is the
/// same on every platform and in any language with an MT19937-64.
class FixtureRng {
 public:
  explicit FixtureRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// Ground truth for a synthetic corpus.
struct PlantedModel {
  std::vector<EmotionPair> pairs;
  double intercept = 0.0;
  /// One per pair.
  std::vector<double> coefficients;
  /// Independent per-emotion inclusion probabilities.
  std::array<double, kEmotionCount> inclusion{};
  /// Accepted distinct-emotion counts per post (inclusive); sets outside are
  /// redrawn.
  std::size_t min_distinct = 1;
  std::size_t max_distinct = kEmotionCount;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument if a pair uses an emotion with zero inclusion
  /// probability, sizes disagree, probabilities leave [0,1], or the distinct
  /// range is empty.
  void validate() const;

  /// The model `emopair simulate` uses when no model file is given.
  static PlantedModel reference(std::uint64_t seed);
};

/// Per post: draw an emotion set (redrawing until its size is in range), emit
/// one sentence per emotion in shuffled order, then draw
/// y ~ Bernoulli(sigmoid(intercept + sum of planted coefficients of present
/// pairs)). y = 1 posts carry a `severe` label, y = 0 posts `not_depressed`.
/// Ids are "sim-000001", ... Fully determined by the model seed.
std::vector<AnnotatedPost> generate_corpus(const PlantedModel& model, std::size_t n_posts);

/// Text form of a generated corpus: each sentence reads "<emotion>." and posts
/// with outcome 1 get the title "severe". Segmented with titles ignored and
/// labeled by identity_lexicon() plus the rule severe->severe, it reproduces
/// the corpus exactly.
std::vector<RawPost> render_raw_posts(std::span<const AnnotatedPost> posts);

/// One rule per emotion name, longest names first so that no name shadows a
/// longer one containing it.
std::vector<LexiconRule> identity_lexicon();

/// JSON: {"seed", "intercept", "coefficients":[{"pair","beta"}],
/// "inclusion":{emotion: p}, "distinct_range":[min,max]}.
void write_ground_truth(std::ostream& out, const PlantedModel& model);
void save_ground_truth(const std::filesystem::path& path, const PlantedModel& model);
PlantedModel load_planted_model(const std::filesystem::path& path);

}  // namespace emopair
