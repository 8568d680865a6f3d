#include "emopair/diststats.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "emopair/error.hpp"
#include "text_util.hpp"

namespace emopair {

std::optional<FrequencyUnit> parse_frequency_unit(std::string_view name) noexcept {
  if (name == "sentence") return FrequencyUnit::sentence;
  if (name == "post_presence" || name == "post") return FrequencyUnit::post_presence;
  return std::nullopt;
}

DistributionSummary summarize_counts(const std::array<std::uint64_t, kEmotionCount>& counts) {
  DistributionSummary summary;
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    if (counts[e] == 0) continue;
    summary.ranked.push_back({emotion_at(e), counts[e], 0.0});
    summary.total += counts[e];
  }
  if (summary.total == 0) throw EmptyDistribution("no labeled sentences to rank");

  std::stable_sort(summary.ranked.begin(), summary.ranked.end(),
                   [](const RankedEmotion& a, const RankedEmotion& b) { return a.count > b.count; });

  // Cumulative shares come from exact integer prefix sums, so the CDF is
  // monotone and ends at exactly 1.
  const auto total = static_cast<double>(summary.total);
  std::uint64_t running = 0;
  for (auto& r : summary.ranked) {
    r.share = static_cast<double>(r.count) / total;
    running += r.count;
    const double c = static_cast<double>(running) / total;
    summary.cdf.push_back(c);
    summary.ccdf.push_back(1.0 - c);
  }
  return summary;
}

DistributionSummary emotion_frequency(std::span<const AnnotatedPost> posts, FrequencyUnit unit,
                                      const EmotionFilter& filter) {
  std::array<std::uint64_t, kEmotionCount> counts{};
  for (const auto& p : posts) {
    if (unit == FrequencyUnit::sentence) {
      for (const auto& s : p.sentences) {
        if (filter.admits(s)) ++counts[index_of(s.emotion)];
      }
    } else {
      for (auto e : distinct_emotions(p, filter).members()) ++counts[index_of(e)];
    }
  }
  return summarize_counts(counts);
}

double top_k_share(const DistributionSummary& summary, std::size_t k) {
  if (k == 0 || k > summary.cdf.size()) {
    throw BoundsError("top-k share: k=" + std::to_string(k) + " outside [1, " + std::to_string(summary.cdf.size()) +
                      "]");
  }
  return summary.cdf[k - 1];
}

PairCountHistogram pair_count_histogram(std::span<const AnnotatedPost> posts, const EmotionFilter& filter) {
  PairCountHistogram h;
  for (const auto& p : posts) {
    const std::uint64_t k = distinct_emotions(p, filter).size();
    ++h.by_distinct[k];
    ++h.by_pairs[k < 2 ? 0 : k * (k - 1) / 2];
  }
  return h;
}

void write_frequency_tsv(std::ostream& out, const DistributionSummary& summary) {
  out << "rank\temotion\tcount\tshare\tcdf\tccdf\n";
  for (std::size_t i = 0; i < summary.ranked.size(); ++i) {
    const auto& r = summary.ranked[i];
    out << (i + 1) << '\t' << to_string(r.emotion) << '\t' << r.count << '\t' << detail::format_double(r.share)
        << '\t' << detail::format_double(summary.cdf[i]) << '\t' << detail::format_double(summary.ccdf[i]) << '\n';
  }
}

void export_frequency_tsv(const DistributionSummary& summary, const std::filesystem::path& destination) {
  auto out = detail::open_output(destination);
  write_frequency_tsv(out, summary);
  detail::finish_output(out, destination);
}

void write_histogram_tsv(std::ostream& out, const PairCountHistogram& histogram) {
  out << "pairs\tposts\n";
  for (const auto& [pairs, posts] : histogram.by_pairs) out << pairs << '\t' << posts << '\n';
}

void export_histogram_tsv(const PairCountHistogram& histogram, const std::filesystem::path& destination) {
  auto out = detail::open_output(destination);
  write_histogram_tsv(out, histogram);
  detail::finish_output(out, destination);
}

}  // namespace emopair
