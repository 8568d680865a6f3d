#include "emopair/pairfeat.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "emopair/error.hpp"
#include "text_util.hpp"

namespace emopair {
namespace {

std::vector<std::string> names_of(const PairVocabulary& vocabulary) {
  std::vector<std::string> names;
  names.reserve(vocabulary.size());
  for (const auto& p : vocabulary.pairs) names.push_back(p.name());
  return names;
}

std::vector<std::uint64_t> measure_support(std::span<const AnnotatedPost> posts, std::span<const EmotionPair> pairs,
                                           const PairOptions& options) {
  std::map<EmotionPair, std::uint64_t> counts;
  for (const auto& p : posts) {
    for (const auto& pair : extract_features(p, options)) ++counts[pair];
  }
  std::vector<std::uint64_t> support;
  support.reserve(pairs.size());
  for (const auto& pair : pairs) {
    const auto it = counts.find(pair);
    support.push_back(it == counts.end() ? 0 : it->second);
  }
  return support;
}

}  // namespace

std::string EmotionPair::name() const {
  std::string out(to_string(first));
  out += '-';
  out += to_string(second);
  return out;
}

std::optional<EmotionPair> parse_pair(std::string_view text) noexcept {
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  const auto a = parse_emotion(text.substr(0, dash));
  const auto b = parse_emotion(text.substr(dash + 1));
  if (!a || !b || *a == *b) return std::nullopt;
  return EmotionPair::unordered(*a, *b);
}

std::vector<EmotionPair> extract_pairs(const AnnotatedPost& post, const EmotionFilter& filter) {
  const auto members = distinct_emotions(post, filter).members();
  std::vector<EmotionPair> out;
  out.reserve(members.size() * (members.size() > 0 ? members.size() - 1 : 0) / 2);
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) out.push_back({members[i], members[j]});
  }
  return out;
}

std::vector<EmotionPair> extract_ordered_pairs(const AnnotatedPost& post, const EmotionFilter& filter) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::array<std::size_t, kEmotionCount> first_at;
  std::array<std::size_t, kEmotionCount> last_at;
  first_at.fill(kNone);
  last_at.fill(kNone);
  for (std::size_t pos = 0; pos < post.sentences.size(); ++pos) {
    const auto& s = post.sentences[pos];
    if (!filter.admits(s)) continue;
    const auto e = index_of(s.emotion);
    if (first_at[e] == kNone) first_at[e] = pos;
    last_at[e] = pos;
  }
  std::vector<EmotionPair> out;
  for (std::size_t a = 0; a < kEmotionCount; ++a) {
    if (first_at[a] == kNone) continue;
    for (std::size_t b = 0; b < kEmotionCount; ++b) {
      if (a == b || last_at[b] == kNone) continue;
      if (first_at[a] < last_at[b]) out.push_back({emotion_at(a), emotion_at(b)});
    }
  }
  return out;
}

std::vector<EmotionPair> extract_features(const AnnotatedPost& post, const PairOptions& options) {
  return options.ordered ? extract_ordered_pairs(post, options.filter) : extract_pairs(post, options.filter);
}

std::optional<std::size_t> PairVocabulary::column_of(EmotionPair pair) const noexcept {
  if (!ordered) pair = EmotionPair::unordered(pair.first, pair.second);
  const auto it = std::find(pairs.begin(), pairs.end(), pair);
  if (it == pairs.end()) return std::nullopt;
  return static_cast<std::size_t>(it - pairs.begin());
}

std::size_t default_min_support(std::size_t n_posts) noexcept {
  const auto tenth_percent = static_cast<std::size_t>(std::ceil(static_cast<double>(n_posts) * 0.001));
  return std::max<std::size_t>(25, tenth_percent);
}

PairVocabulary build_vocabulary(std::span<const AnnotatedPost> posts, std::size_t min_support,
                                const PairOptions& options) {
  if (min_support == 0) throw InvalidArgument("min_support must be at least 1");

  std::vector<std::pair<EmotionPair, std::uint64_t>> candidates;
  if (options.ordered) {
    std::map<EmotionPair, std::uint64_t> counts;
    for (const auto& p : posts) {
      for (const auto& pair : extract_ordered_pairs(p, options.filter)) ++counts[pair];
    }
    candidates.assign(counts.begin(), counts.end());
  } else {
    // Post support of {a, b} is exactly the post-level co-occurrence count.
    const auto counts = kernels::cooccurrence_parallel(distinct_emotion_sets(posts, options.filter));
    for (std::size_t a = 0; a < kEmotionCount; ++a) {
      for (std::size_t b = a + 1; b < kEmotionCount; ++b) {
        const auto c = counts[a * kEmotionCount + b];
        if (c > 0) candidates.push_back({{emotion_at(a), emotion_at(b)}, c});
      }
    }
  }

  std::erase_if(candidates, [&](const auto& c) { return c.second < min_support; });
  if (candidates.empty()) {
    throw EmptyVocabulary("no emotion pair reaches min_support=" + std::to_string(min_support) + " in " +
                          std::to_string(posts.size()) + " posts");
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& l, const auto& r) { return l.second > r.second; });

  PairVocabulary v;
  v.min_support = min_support;
  v.ordered = options.ordered;
  for (const auto& [pair, support] : candidates) {
    v.pairs.push_back(pair);
    v.support.push_back(support);
  }
  return v;
}

PairVocabulary fixed_vocabulary(std::span<const AnnotatedPost> posts, std::vector<EmotionPair> pairs,
                                const PairOptions& options) {
  PairVocabulary v;
  v.ordered = options.ordered;
  if (!options.ordered) {
    for (auto& p : pairs) p = EmotionPair::unordered(p.first, p.second);
  }
  v.pairs = std::move(pairs);
  for (std::size_t i = 0; i < v.pairs.size(); ++i) {
    if (std::find(v.pairs.begin(), v.pairs.begin() + static_cast<std::ptrdiff_t>(i), v.pairs[i]) !=
        v.pairs.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw InvalidArgument("duplicate pair '" + v.pairs[i].name() + "' in vocabulary");
    }
  }
  v.support = measure_support(posts, v.pairs, options);
  return v;
}

DesignMatrix build_design_matrix(std::span<const AnnotatedPost> posts, const PairVocabulary& vocabulary,
                                 const PairOptions& options) {
  DesignMatrix m;
  m.feature_names = names_of(vocabulary);
  m.y.reserve(posts.size());
  for (const auto& p : posts) m.y.push_back(static_cast<std::uint8_t>(p.outcome != 0));

  if (!vocabulary.ordered) {
    kernels::PairColumnTable table;
    table.fill(-1);
    for (std::size_t c = 0; c < vocabulary.size(); ++c) {
      const auto a = index_of(vocabulary.pairs[c].first);
      const auto b = index_of(vocabulary.pairs[c].second);
      table[a * kEmotionCount + b] = static_cast<std::int32_t>(c);
      table[b * kEmotionCount + a] = static_cast<std::int32_t>(c);
    }
    m.x = kernels::pair_rows_parallel(distinct_emotion_sets(posts, options.filter), table, vocabulary.size());
    return m;
  }

  std::map<EmotionPair, std::uint32_t> lookup;
  for (std::size_t c = 0; c < vocabulary.size(); ++c) lookup[vocabulary.pairs[c]] = static_cast<std::uint32_t>(c);
  m.x.n_cols = vocabulary.size();
  for (const auto& p : posts) {
    const auto begin = m.x.cols.size();
    for (const auto& pair : extract_ordered_pairs(p, options.filter)) {
      if (const auto it = lookup.find(pair); it != lookup.end()) m.x.cols.push_back(it->second);
    }
    std::sort(m.x.cols.begin() + static_cast<std::ptrdiff_t>(begin), m.x.cols.end());
    m.x.row_ptr.push_back(m.x.cols.size());
  }
  return m;
}

DesignMatrix make_design_matrix(std::vector<std::vector<std::uint32_t>> rows, std::vector<std::uint8_t> y,
                                std::size_t n_cols, std::vector<std::string> feature_names) {
  if (rows.size() != y.size()) throw InvalidArgument("design matrix: row count differs from outcome length");
  DesignMatrix m;
  m.x.n_cols = n_cols;
  for (auto& r : rows) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    for (auto c : r) {
      if (c >= n_cols) throw InvalidArgument("design matrix: column " + std::to_string(c) + " out of range");
      m.x.cols.push_back(c);
    }
    m.x.row_ptr.push_back(m.x.cols.size());
  }
  m.y = std::move(y);
  if (feature_names.empty()) {
    for (std::size_t c = 0; c < n_cols; ++c) feature_names.push_back("x" + std::to_string(c));
  }
  m.feature_names = std::move(feature_names);
  return m;
}

void export_design(const DesignMatrix& matrix, const PairVocabulary& vocabulary,
                   const std::filesystem::path& directory, const std::string& prefix) {
  {
    const auto path = directory / (prefix + "triplets.csv");
    auto out = detail::open_output(path);
    out << "row,col,value\n";
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
      for (auto c : matrix.x.row(i)) out << i << ',' << c << ",1\n";
    }
    detail::finish_output(out, path);
  }
  {
    const auto path = directory / (prefix + "vocabulary.csv");
    auto out = detail::open_output(path);
    out << "col,emotion_a,emotion_b,support\n";
    for (std::size_t c = 0; c < vocabulary.size(); ++c) {
      out << c << ',' << to_string(vocabulary.pairs[c].first) << ',' << to_string(vocabulary.pairs[c].second) << ','
          << vocabulary.support[c] << '\n';
    }
    detail::finish_output(out, path);
  }
  {
    const auto path = directory / (prefix + "outcome.csv");
    auto out = detail::open_output(path);
    out << "row,y\n";
    for (std::size_t i = 0; i < matrix.y.size(); ++i) out << i << ',' << static_cast<int>(matrix.y[i]) << '\n';
    detail::finish_output(out, path);
  }
}

}  // namespace emopair
