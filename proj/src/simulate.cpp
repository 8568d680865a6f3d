#include "emopair/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "emopair/error.hpp"
#include "text_util.hpp"

namespace emopair {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::size_t kMaxRedraws = 100000;
// 2015-01-01T00:00:00Z; synthetic posts are spaced one hour apart from here.
constexpr std::int64_t kSyntheticEpoch = 1420070400;

}  // namespace

std::uint64_t FixtureRng::below(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("FixtureRng::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const auto x = engine_();
    if (x < limit) return x % n;
  }
}

void PlantedModel::validate() const {
  if (coefficients.size() != pairs.size()) {
    throw InvalidArgument("planted model: " + std::to_string(pairs.size()) + " pairs but " +
                          std::to_string(coefficients.size()) + " coefficients");
  }
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    if (!(inclusion[e] >= 0.0 && inclusion[e] <= 1.0)) {
      throw InvalidArgument("planted model: inclusion probability of '" + std::string(to_string(emotion_at(e))) +
                            "' outside [0,1]");
    }
  }
  if (min_distinct > max_distinct || max_distinct > kEmotionCount) {
    throw InvalidArgument("planted model: empty distinct-count range");
  }
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto& p = pairs[j];
    if (p.first == p.second) throw InvalidArgument("planted model: pair with a repeated emotion");
    if (inclusion[index_of(p.first)] <= 0.0 || inclusion[index_of(p.second)] <= 0.0) {
      throw InvalidArgument("planted model: pair '" + p.name() + "' can never be generated");
    }
    if (!std::isfinite(coefficients[j])) throw InvalidArgument("planted model: non-finite coefficient");
    for (std::size_t k = 0; k < j; ++k) {
      if (EmotionPair::unordered(pairs[k].first, pairs[k].second) == EmotionPair::unordered(p.first, p.second)) {
        throw InvalidArgument("planted model: duplicate pair '" + p.name() + "'");
      }
    }
  }
  if (max_distinct < 2 && !pairs.empty()) throw InvalidArgument("planted model: pairs need max_distinct >= 2");
}

PlantedModel PlantedModel::reference(std::uint64_t seed) {
  using E = Emotion;
  PlantedModel m;
  m.seed = seed;
  m.min_distinct = 1;
  m.max_distinct = 8;
  m.intercept = -0.4;
  const std::pair<E, double> inclusion[] = {
      {E::realization, 0.35}, {E::approval, 0.30},  {E::sadness, 0.30},   {E::anger, 0.28},
      {E::disapproval, 0.25}, {E::annoyance, 0.25}, {E::curiosity, 0.22}, {E::disappointment, 0.22},
      {E::neutral, 0.40},     {E::optimism, 0.14},  {E::caring, 0.12},    {E::amusement, 0.10},
      {E::fear, 0.10},        {E::grief, 0.08},     {E::joy, 0.08},       {E::confusion, 0.08},
      {E::love, 0.06},        {E::gratitude, 0.06}, {E::admiration, 0.06},
  };
  for (const auto& [e, p] : inclusion) m.inclusion[index_of(e)] = p;
  const std::tuple<E, E, double> planted[] = {
      {E::amusement, E::grief, 0.9632},       {E::optimism, E::sadness, -0.2357},
      {E::caring, E::curiosity, -0.8},        {E::anger, E::sadness, 0.5},
      {E::disappointment, E::sadness, 0.4},   {E::fear, E::sadness, 0.6},
      {E::approval, E::realization, 0.0},     {E::anger, E::annoyance, 0.0},
      {E::curiosity, E::realization, 0.0},    {E::disapproval, E::realization, 0.0},
      {E::annoyance, E::disappointment, 0.0}, {E::joy, E::love, 0.0},
  };
  for (const auto& [a, b, beta] : planted) {
    m.pairs.push_back(EmotionPair::unordered(a, b));
    m.coefficients.push_back(beta);
  }
  return m;
}

std::vector<AnnotatedPost> generate_corpus(const PlantedModel& model, std::size_t n_posts) {
  model.validate();
  if (n_posts == 0) throw InvalidArgument("generate_corpus: n_posts must be at least 1");

  FixtureRng rng(model.seed);
  std::vector<AnnotatedPost> posts;
  posts.reserve(n_posts);
  std::vector<Emotion> order;
  char id[32];

  for (std::size_t i = 0; i < n_posts; ++i) {
    EmotionSet set;
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kMaxRedraws) {
        throw InvalidArgument("planted model: distinct-count range is practically unreachable");
      }
      set = EmotionSet{};
      for (std::size_t e = 0; e < kEmotionCount; ++e) {
        if (rng.bernoulli(model.inclusion[e])) set.insert(emotion_at(e));
      }
      if (set.size() >= model.min_distinct && set.size() <= model.max_distinct) break;
    }

    order = set.members();
    for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);

    double eta = model.intercept;
    for (std::size_t j = 0; j < model.pairs.size(); ++j) {
      if (set.contains(model.pairs[j].first) && set.contains(model.pairs[j].second)) eta += model.coefficients[j];
    }
    const double prob = 1.0 / (1.0 + std::exp(-eta));
    const bool y = rng.bernoulli(prob);

    AnnotatedPost post;
    std::snprintf(id, sizeof id, "sim-%06zu", i + 1);
    post.post_id = id;
    for (std::size_t k = 0; k < order.size(); ++k) post.sentences.push_back({k, order[k], 1.0});
    post.depression = {y ? Severity::severe : Severity::not_depressed, 1.0};
    post.outcome = y ? 1 : 0;
    posts.push_back(std::move(post));
  }
  return posts;
}

std::vector<RawPost> render_raw_posts(std::span<const AnnotatedPost> posts) {
  std::vector<RawPost> out;
  out.reserve(posts.size());
  for (std::size_t i = 0; i < posts.size(); ++i) {
    const auto& p = posts[i];
    RawPost raw;
    raw.id = p.post_id;
    raw.created_utc = kSyntheticEpoch + static_cast<std::int64_t>(i) * 3600;
    raw.title = p.outcome ? "severe" : "";
    raw.source = "synthetic";
    for (const auto& s : p.sentences) {
      if (!raw.body.empty()) raw.body += ' ';
      raw.body += to_string(s.emotion);
      raw.body += '.';
    }
    out.push_back(std::move(raw));
  }
  return out;
}

std::vector<LexiconRule> identity_lexicon() {
  std::vector<LexiconRule> rules;
  for (auto e : all_emotions()) rules.push_back({std::string(to_string(e)), e});
  std::stable_sort(rules.begin(), rules.end(),
                   [](const LexiconRule& a, const LexiconRule& b) { return a.keyword.size() > b.keyword.size(); });
  return rules;
}

void write_ground_truth(std::ostream& out, const PlantedModel& model) {
  ordered_json j;
  j["seed"] = model.seed;
  j["intercept"] = model.intercept;
  j["coefficients"] = ordered_json::array();
  for (std::size_t k = 0; k < model.pairs.size(); ++k) {
    ordered_json c;
    c["pair"] = model.pairs[k].name();
    c["beta"] = model.coefficients[k];
    j["coefficients"].push_back(std::move(c));
  }
  ordered_json inc = ordered_json::object();
  for (auto e : all_emotions()) {
    if (model.inclusion[index_of(e)] > 0.0) inc[std::string(to_string(e))] = model.inclusion[index_of(e)];
  }
  j["inclusion"] = std::move(inc);
  j["distinct_range"] = {model.min_distinct, model.max_distinct};
  out << j.dump(2) << '\n';
}

void save_ground_truth(const std::filesystem::path& path, const PlantedModel& model) {
  auto out = detail::open_output(path);
  write_ground_truth(out, model);
  detail::finish_output(out, path);
}

PlantedModel load_planted_model(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  const json j = json::parse(in, nullptr, false);
  auto fail = [&](const std::string& what) -> void { throw SchemaViolation(path.string() + ": " + what); };
  if (j.is_discarded() || !j.is_object()) fail("not a JSON object");

  PlantedModel m;
  try {
    m.seed = j.value("seed", std::uint64_t{0});
    m.intercept = j.value("intercept", 0.0);
    for (const auto& c : j.at("coefficients")) {
      const auto pair = parse_pair(c.at("pair").get<std::string>());
      if (!pair) fail("bad pair '" + c.at("pair").get<std::string>() + "'");
      m.pairs.push_back(*pair);
      m.coefficients.push_back(c.at("beta").get<double>());
    }
    for (const auto& [name, p] : j.at("inclusion").items()) {
      const auto e = parse_emotion(name);
      if (!e) fail("unknown emotion '" + name + "'");
      m.inclusion[index_of(*e)] = p.get<double>();
    }
    if (j.contains("distinct_range")) {
      const auto& r = j.at("distinct_range");
      if (!r.is_array() || r.size() != 2) fail("distinct_range must be [min, max]");
      m.min_distinct = r[0].get<std::size_t>();
      m.max_distinct = r[1].get<std::size_t>();
    }
  } catch (const json::exception& e) {
    fail(e.what());
  }
  m.validate();
  return m;
}

}  // namespace emopair
