#include "emopair/emonet.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "emopair/error.hpp"
#include "text_util.hpp"

namespace emopair {
namespace {

kernels::PairCounts multiset_counts(std::span<const AnnotatedPost> posts, const EmotionFilter& filter) {
  kernels::PairCounts counts{};
  std::array<std::uint64_t, kEmotionCount> occ{};
  for (const auto& p : posts) {
    occ.fill(0);
    for (const auto& s : p.sentences) {
      if (filter.admits(s)) ++occ[index_of(s.emotion)];
    }
    for (std::size_t a = 0; a < kEmotionCount; ++a) {
      if (occ[a] == 0) continue;
      for (std::size_t b = a + 1; b < kEmotionCount; ++b) {
        const auto w = std::min(occ[a], occ[b]);
        counts[a * kEmotionCount + b] += w;
        counts[b * kEmotionCount + a] += w;
      }
    }
  }
  return counts;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void write_graphml(std::ostream& out, const EmotionNetwork& net, const SentimentMap& sentiment) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"occurrence_count\" for=\"node\" attr.name=\"occurrence_count\" attr.type=\"long\"/>\n"
      << "  <key id=\"post_presence\" for=\"node\" attr.name=\"post_presence\" attr.type=\"long\"/>\n"
      << "  <key id=\"weighted_degree\" for=\"node\" attr.name=\"weighted_degree\" attr.type=\"long\"/>\n"
      << "  <key id=\"sentiment\" for=\"node\" attr.name=\"sentiment\" attr.type=\"string\"/>\n"
      << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
      << "  <graph id=\"emotions\" edgedefault=\"undirected\">\n";
  for (const auto& n : net.nodes) {
    out << "    <node id=\"" << xml_escape(to_string(n.emotion)) << "\">\n"
        << "      <data key=\"occurrence_count\">" << n.occurrence_count << "</data>\n"
        << "      <data key=\"post_presence\">" << n.post_presence << "</data>\n"
        << "      <data key=\"weighted_degree\">" << n.weighted_degree << "</data>\n"
        << "      <data key=\"sentiment\">" << to_string(sentiment[n.emotion]) << "</data>\n"
        << "    </node>\n";
  }
  for (const auto& e : net.edges) {
    out << "    <edge source=\"" << xml_escape(to_string(e.source)) << "\" target=\""
        << xml_escape(to_string(e.target)) << "\">\n"
        << "      <data key=\"weight\">" << e.weight << "</data>\n"
        << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_dot(std::ostream& out, const EmotionNetwork& net, const SentimentMap& sentiment) {
  out << "graph emotions {\n";
  for (const auto& n : net.nodes) {
    out << "  \"" << to_string(n.emotion) << "\" [occurrence_count=" << n.occurrence_count
        << ", post_presence=" << n.post_presence << ", weighted_degree=" << n.weighted_degree << ", sentiment=\""
        << to_string(sentiment[n.emotion]) << "\"];\n";
  }
  for (const auto& e : net.edges) {
    out << "  \"" << to_string(e.source) << "\" -- \"" << to_string(e.target) << "\" [weight=" << e.weight
        << "];\n";
  }
  out << "}\n";
}

void write_edge_csv(std::ostream& out, const EmotionNetwork& net) {
  out << "source,target,weight\n";
  for (const auto& e : net.edges) out << to_string(e.source) << ',' << to_string(e.target) << ',' << e.weight << '\n';
}

}  // namespace

std::optional<CountMode> parse_count_mode(std::string_view name) noexcept {
  if (name == "distinct") return CountMode::distinct;
  if (name == "multiset") return CountMode::multiset;
  return std::nullopt;
}

std::optional<NetworkFormat> parse_network_format(std::string_view name) noexcept {
  if (name == "graphml") return NetworkFormat::graphml;
  if (name == "dot") return NetworkFormat::dot;
  if (name == "edge_csv") return NetworkFormat::edge_csv;
  return std::nullopt;
}

std::optional<MatrixOrder> parse_matrix_order(std::string_view name) noexcept {
  if (name == "canonical") return MatrixOrder::canonical;
  if (name == "sentiment") return MatrixOrder::sentiment;
  return std::nullopt;
}

std::uint64_t CooccurrenceMatrix::upper_triangle_sum() const noexcept {
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < kEmotionCount; ++a) {
    for (std::size_t b = a + 1; b < kEmotionCount; ++b) total += counts_[a * kEmotionCount + b];
  }
  return total;
}

CooccurrenceMatrix build_cooccurrence(std::span<const AnnotatedPost> posts, const EmotionFilter& filter,
                                      CountMode mode) {
  if (mode == CountMode::multiset) return {multiset_counts(posts, filter), posts.size()};
  const auto sets = distinct_emotion_sets(posts, filter);
  return {kernels::cooccurrence_parallel(sets), posts.size()};
}

NodeStats compute_node_stats(std::span<const AnnotatedPost> posts, const EmotionFilter& filter) {
  NodeStats stats;
  for (const auto& p : posts) {
    EmotionSet seen;
    for (const auto& s : p.sentences) {
      if (!filter.admits(s)) continue;
      ++stats.occurrence_count[index_of(s.emotion)];
      seen.insert(s.emotion);
    }
    for (auto e : seen.members()) ++stats.post_presence[index_of(e)];
  }
  return stats;
}

const NetworkNode* EmotionNetwork::find(Emotion e) const noexcept {
  const auto it = std::find_if(nodes.begin(), nodes.end(), [e](const NetworkNode& n) { return n.emotion == e; });
  return it == nodes.end() ? nullptr : &*it;
}

EmotionNetwork matrix_to_network(const CooccurrenceMatrix& matrix, const NodeStats& stats) {
  EmotionNetwork net;
  std::array<std::uint64_t, kEmotionCount> degree{};
  for (std::size_t a = 0; a < kEmotionCount; ++a) {
    for (std::size_t b = a + 1; b < kEmotionCount; ++b) {
      const auto w = matrix(emotion_at(a), emotion_at(b));
      if (w == 0) continue;
      net.edges.push_back({emotion_at(a), emotion_at(b), w});
      degree[a] += w;
      degree[b] += w;
    }
  }
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    if (stats.occurrence_count[e] == 0 && degree[e] == 0) continue;
    net.nodes.push_back({emotion_at(e), stats.occurrence_count[e], stats.post_presence[e], degree[e]});
  }
  return net;
}

void write_network(std::ostream& out, const EmotionNetwork& network, NetworkFormat format,
                   const SentimentMap& sentiment) {
  switch (format) {
    case NetworkFormat::graphml: write_graphml(out, network, sentiment); break;
    case NetworkFormat::dot: write_dot(out, network, sentiment); break;
    case NetworkFormat::edge_csv: write_edge_csv(out, network); break;
  }
}

void export_network(const EmotionNetwork& network, NetworkFormat format, const std::filesystem::path& destination,
                    const SentimentMap& sentiment) {
  auto out = detail::open_output(destination);
  write_network(out, network, format, sentiment);
  detail::finish_output(out, destination);
}

void write_matrix_csv(std::ostream& out, const CooccurrenceMatrix& matrix, MatrixOrder order, bool include_neutral,
                      const SentimentMap& sentiment) {
  std::vector<Emotion> axis;
  if (order == MatrixOrder::sentiment) {
    axis = sentiment.grouped_order();
  } else {
    axis.assign(all_emotions().begin(), all_emotions().end());
  }
  if (!include_neutral) std::erase(axis, Emotion::neutral);

  out << "emotion";
  for (auto e : axis) out << ',' << to_string(e);
  out << '\n';
  for (auto a : axis) {
    out << to_string(a);
    for (auto b : axis) out << ',' << matrix(a, b);
    out << '\n';
  }
}

void export_matrix_csv(const CooccurrenceMatrix& matrix, const std::filesystem::path& destination, MatrixOrder order,
                       bool include_neutral, const SentimentMap& sentiment) {
  auto out = detail::open_output(destination);
  write_matrix_csv(out, matrix, order, include_neutral, sentiment);
  detail::finish_output(out, destination);
}

}  // namespace emopair
