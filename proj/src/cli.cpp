#include "emopair/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "emopair/annotation.hpp"
#include "emopair/corpus.hpp"
#include "emopair/diststats.hpp"
#include "emopair/emonet.hpp"
#include "emopair/error.hpp"
#include "emopair/logit.hpp"
#include "emopair/pairfeat.hpp"
#include "emopair/remote_annotator.hpp"
#include "emopair/simulate.hpp"
#include "text_util.hpp"

namespace emopair::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

// ---------------------------------------------------------------------------
// Flag groups

struct IngestFlags {
  std::string input;
  std::string since;
  std::string until;
  bool all_time = false;
  bool ignore_titles = false;
};

struct AnalysisFlags {
  std::string input;
  bool include_neutral = false;
  double min_score = 0.0;
  std::string binarize;
  std::string sentiment_map;
};

struct FitFlags {
  std::size_t min_support = 0;
  bool ordered_pairs = false;
  double alpha = 0.05;
  std::string correction = "none";
  double ridge = 0.0;
  std::size_t max_iterations = 100;
  double tolerance = 1e-8;
  bool marginal = false;
  std::vector<std::string> pairs;
  std::string truth;
};

struct NetworkFlags {
  std::string order = "canonical";
  std::string count_mode = "distinct";
};

const std::vector<std::string> kPolicies = {"moderate_or_severe", "severe_only"};

void add_ingest_flags(CLI::App* sub, IngestFlags& f) {
  sub->add_option("--input,-i", f.input, "JSON-lines post dump")->required()->check(CLI::ExistingFile);
  sub->add_option("--since", f.since, "Earliest post date (ISO-8601, inclusive)");
  sub->add_option("--until", f.until, "Latest post date (ISO-8601, inclusive)");
  sub->add_flag("--all-time", f.all_time, "Disable the default 2012-2022 time filter");
  sub->add_flag("--ignore-titles", f.ignore_titles, "Do not treat titles as sentence 0");
}

void add_analysis_flags(CLI::App* sub, AnalysisFlags& f) {
  sub->add_option("--input,-i", f.input, "Labeled-corpus JSON-lines file")->required()->check(CLI::ExistingFile);
  sub->add_flag("--include-neutral", f.include_neutral, "Count the neutral label as an emotion");
  sub->add_option("--min-score", f.min_score, "Ignore sentence labels scored below this")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--binarize", f.binarize, "Recompute outcomes from depression labels")
      ->check(CLI::IsMember(kPolicies));
  sub->add_option("--sentiment-map", f.sentiment_map, "emotion,group CSV")->check(CLI::ExistingFile);
}

void add_network_flags(CLI::App* sub, NetworkFlags& f) {
  sub->add_option("--order", f.order, "Matrix row/column order")
      ->check(CLI::IsMember({"canonical", "sentiment"}));
  sub->add_option("--count-mode", f.count_mode, "Pair weight per post")->check(CLI::IsMember({"distinct", "multiset"}));
}

void add_fit_flags(CLI::App* sub, FitFlags& f) {
  sub->add_option("--min-support", f.min_support, "Minimum posts per pair (default max(25, 0.1% of posts))");
  sub->add_flag("--ordered-pairs", f.ordered_pairs, "Directed pair features");
  sub->add_option("--alpha", f.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--correction", f.correction, "Multiple-testing correction")
      ->check(CLI::IsMember({"none", "bonferroni"}));
  sub->add_option("--ridge", f.ridge, "L2 penalty on pair coefficients")->check(CLI::NonNegativeNumber);
  sub->add_option("--max-iter", f.max_iterations, "IRLS iteration budget")->check(CLI::PositiveNumber);
  sub->add_option("--tol", f.tolerance, "Log-likelihood change tolerance")->check(CLI::PositiveNumber);
  sub->add_flag("--marginal", f.marginal, "Fit one single-pair model per feature");
  sub->add_option("--pairs", f.pairs, "Fixed vocabulary, e.g. amusement-grief")->delimiter(',');
  sub->add_option("--truth", f.truth, "Use the vocabulary of a ground-truth JSON")->check(CLI::ExistingFile);
}

// ---------------------------------------------------------------------------
// Shared steps

LoadOptions load_options(const IngestFlags& f) {
  LoadOptions opts;
  opts.include_titles = !f.ignore_titles;
  if (!f.all_time || !f.since.empty() || !f.until.empty()) {
    auto range = TimeRange::default_decade();
    if (f.all_time) range = {0, std::numeric_limits<std::int64_t>::max()};
    try {
      if (!f.since.empty()) range.begin = parse_iso8601(f.since);
      if (!f.until.empty()) range.end = parse_iso8601(f.until, true);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    if (range.begin > range.end) throw UsageError("--since is after --until");
    opts.time_range = range;
  }
  return opts;
}

EmotionFilter filter_of(const AnalysisFlags& f) { return {f.include_neutral, f.min_score}; }

SentimentMap sentiment_of(const AnalysisFlags& f) {
  return f.sentiment_map.empty() ? SentimentMap::defaults() : SentimentMap::load(f.sentiment_map);
}

std::vector<AnnotatedPost> load_analysis_input(const AnalysisFlags& f) {
  auto posts = load_annotations(f.input);
  if (!f.binarize.empty()) apply_binarization(posts, *parse_binarization(f.binarize));
  return posts;
}

FitConfig fit_config(const FitFlags& f) {
  FitConfig c;
  c.alpha = f.alpha;
  c.correction = *parse_correction(f.correction);
  c.ridge = f.ridge;
  c.max_iterations = f.max_iterations;
  c.tolerance = f.tolerance;
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return c;
}

std::vector<EmotionPair> fixed_pairs(const FitFlags& f) {
  std::vector<EmotionPair> pairs;
  for (const auto& text : f.pairs) {
    const auto p = parse_pair(text);
    if (!p) throw UsageError("--pairs: cannot parse '" + text + "' (expected emotion-emotion)");
    pairs.push_back(*p);
  }
  return pairs;
}

void check_fit_flags(const FitFlags& f) {
  fit_config(f);
  fixed_pairs(f);
  if (!f.pairs.empty() && !f.truth.empty()) throw UsageError("--pairs and --truth are mutually exclusive");
  if (f.ordered_pairs && (!f.pairs.empty() || !f.truth.empty())) {
    throw UsageError("--ordered-pairs needs a data-driven vocabulary");
  }
}

struct FitOutputs {
  PairVocabulary vocabulary;
  DesignMatrix matrix;
  FitConfig config;
  FitResult fit;
  std::vector<SignificantPair> significant;
};

PairVocabulary choose_vocabulary(std::span<const AnnotatedPost> posts, const FitFlags& f, const PairOptions& opts) {
  if (!f.pairs.empty()) return fixed_vocabulary(posts, fixed_pairs(f), opts);
  if (!f.truth.empty()) return fixed_vocabulary(posts, load_planted_model(f.truth).pairs, opts);
  const auto min_support = f.min_support > 0 ? f.min_support : default_min_support(posts.size());
  return build_vocabulary(posts, min_support, opts);
}

FitOutputs run_fit(std::span<const AnnotatedPost> posts, const AnalysisFlags& a, const FitFlags& f) {
  FitOutputs o;
  const PairOptions opts{filter_of(a), f.ordered_pairs};
  o.config = fit_config(f);
  o.vocabulary = choose_vocabulary(posts, f, opts);
  o.matrix = build_design_matrix(posts, o.vocabulary, opts);
  o.fit = f.marginal ? fit_marginal(o.matrix, o.config) : fit_logistic(o.matrix, o.config);
  o.significant = significant_pairs(o.fit, o.vocabulary, o.config.alpha, o.config.correction);
  return o;
}

ordered_json fit_metadata(const FitOutputs& o, const AnalysisFlags& a, const FitFlags& f, std::string_view command) {
  ordered_json j;
  j["command"] = command;
  j["input"] = fs::path(a.input).filename().string();
  j["mode"] = f.marginal ? "marginal" : "joint";
  ordered_json cfg;
  cfg["max_iterations"] = o.config.max_iterations;
  cfg["tolerance"] = o.config.tolerance;
  cfg["ridge"] = o.config.ridge;
  cfg["alpha"] = o.config.alpha;
  cfg["correction"] = to_string(o.config.correction);
  cfg["min_support"] = o.vocabulary.min_support;
  cfg["ordered_pairs"] = o.vocabulary.ordered;
  cfg["include_neutral"] = a.include_neutral;
  cfg["min_score"] = a.min_score;
  cfg["binarize"] = a.binarize.empty() ? "stored" : a.binarize;
  j["config"] = std::move(cfg);
  j["rows"] = o.matrix.rows();
  j["features"] = o.matrix.features();
  j["iterations"] = o.fit.iterations;
  j["log_likelihood"] = o.fit.log_likelihood;
  j["converged"] = o.fit.converged;
  j["separation_flag"] = o.fit.separation_flag;
  j["significant"] = ordered_json::array();
  for (const auto& s : o.significant) j["significant"].push_back(s.pair.name());
  return j;
}

void write_json(const fs::path& path, const ordered_json& j) {
  auto out = detail::open_output(path);
  out << j.dump(2) << '\n';
  detail::finish_output(out, path);
}

void print_significant(std::ostream& out, const FitOutputs& o) {
  out << "significant pairs: " << o.significant.size() << " of " << o.vocabulary.size() << " (alpha "
      << detail::format_double(o.config.alpha) << ", " << to_string(o.config.correction) << ")\n";
  for (const auto& s : o.significant) {
    out << "  " << s.pair.name() << "\tcoef " << detail::format_double(s.stats.coef) << "\tOR "
        << detail::format_double(s.stats.odds_ratio) << "\tp " << detail::format_double(s.stats.p) << '\n';
  }
}

std::string utc_stamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
  return s.str();
}

fs::path make_run_directory(const fs::path& root, const std::string& name) {
  fs::create_directories(root);
  if (!name.empty()) {
    const auto dir = root / name;
    if (!fs::create_directory(dir)) throw IoError("run directory '" + dir.string() + "' already exists");
    return dir;
  }
  const auto base = "run-" + utc_stamp();
  for (int k = 1;; ++k) {
    const auto dir = root / (k == 1 ? base : base + "-" + std::to_string(k));
    if (fs::create_directory(dir)) return dir;
  }
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_ingest(const IngestFlags& f, const std::string& out_path, std::ostream& out) {
  const auto corpus = load_corpus(f.input, load_options(f));
  if (!out_path.empty()) {
    auto file = detail::open_output(out_path);
    for (std::size_t i = 0; i < corpus.posts.size(); ++i) {
      ordered_json j;
      j["id"] = corpus.posts[i].id;
      j["created_utc"] = corpus.posts[i].created_utc;
      j["source"] = corpus.posts[i].source;
      j["sentences"] = ordered_json::array();
      for (const auto& s : corpus.sentences[i]) j["sentences"].push_back(s.text);
      file << j.dump() << '\n';
    }
    detail::finish_output(file, out_path);
  }
  const auto& m = corpus.manifest;
  ordered_json j;
  j["post_count"] = m.post_count;
  j["sentence_count"] = m.sentence_count;
  j["time_min"] = m.time_min;
  j["time_max"] = m.time_max;
  j["skipped_records"] = m.skipped_records;
  j["filtered_records"] = m.filtered_records;
  j["total_records"] = m.total_records;
  out << j.dump() << '\n';
  return kExitOk;
}

struct AnnotateFlags {
  std::string backend = "lexicon";
  std::string rules;
  std::string depression_rules;
  std::string labels;
  std::string endpoint;
  std::size_t concurrency = 4;
  std::string binarize = "moderate_or_severe";
  std::string out;
};

int cmd_annotate(const IngestFlags& ingest, const AnnotateFlags& f, std::ostream& out) {
  std::unique_ptr<Annotator> annotator;
  if (f.backend == "lexicon") {
    if (f.rules.empty()) throw UsageError("--backend lexicon needs --rules");
  } else if (f.backend == "file") {
    if (f.labels.empty()) throw UsageError("--backend file needs --labels");
  } else if (f.endpoint.empty()) {
    throw UsageError(std::string("--backend remote needs --endpoint or ") + kAnnotatorUrlEnv);
  }
  const auto options = load_options(ingest);

  if (f.backend == "lexicon") {
    auto rules = load_lexicon_rules(f.rules);
    auto dep = f.depression_rules.empty() ? std::vector<DepressionRule>{} : load_depression_rules(f.depression_rules);
    annotator = std::make_unique<LexiconAnnotator>(std::move(rules), std::move(dep));
  } else if (f.backend == "file") {
    annotator = std::make_unique<PrelabeledAnnotator>(load_annotations(f.labels));
  } else {
    annotator = std::make_unique<RemoteAnnotator>(RemoteAnnotatorConfig{f.endpoint});
  }

  const auto corpus = load_corpus(ingest.input, options);
  AnnotateOptions ao;
  ao.policy = *parse_binarization(f.binarize);
  ao.concurrency = f.concurrency;
  const auto labeled = annotate_corpus(corpus.posts, corpus.sentences, *annotator, ao);
  save_annotations(f.out, labeled);
  out << "annotated " << labeled.size() << " posts, " << corpus.manifest.sentence_count << " sentences -> " << f.out
      << '\n';
  return kExitOk;
}

struct NetworkOutputs {
  std::string graphml, dot, edges, matrix;
};

int cmd_network(const AnalysisFlags& a, const NetworkFlags& n, const NetworkOutputs& o, std::ostream& out) {
  if (o.graphml.empty() && o.dot.empty() && o.edges.empty() && o.matrix.empty()) {
    throw UsageError("network: give at least one of --graphml, --dot, --edges, --matrix");
  }
  const auto sentiment = sentiment_of(a);
  const auto posts = load_analysis_input(a);
  const auto filter = filter_of(a);
  const auto matrix = build_cooccurrence(posts, filter, *parse_count_mode(n.count_mode));
  const auto network = matrix_to_network(matrix, compute_node_stats(posts, filter));
  if (!o.graphml.empty()) export_network(network, NetworkFormat::graphml, o.graphml, sentiment);
  if (!o.dot.empty()) export_network(network, NetworkFormat::dot, o.dot, sentiment);
  if (!o.edges.empty()) export_network(network, NetworkFormat::edge_csv, o.edges, sentiment);
  if (!o.matrix.empty()) {
    export_matrix_csv(matrix, o.matrix, *parse_matrix_order(n.order), a.include_neutral, sentiment);
  }
  out << "network: " << network.nodes.size() << " nodes, " << network.edges.size() << " edges over "
      << matrix.post_count() << " posts\n";
  return kExitOk;
}

struct StatsFlags {
  std::string unit = "sentence";
  std::size_t top_k = 8;
  std::string out;
  std::string hist;
};

int cmd_stats(const AnalysisFlags& a, const StatsFlags& s, std::ostream& out) {
  const auto posts = load_analysis_input(a);
  const auto filter = filter_of(a);
  const auto summary = emotion_frequency(posts, *parse_frequency_unit(s.unit), filter);
  if (!s.out.empty()) export_frequency_tsv(summary, s.out);
  if (!s.hist.empty()) export_histogram_tsv(pair_count_histogram(posts, filter), s.hist);
  out << "emotions ranked: " << summary.ranked.size() << ", total " << summary.total << " (" << s.unit << ")\n";
  const auto k = std::min(s.top_k, summary.ranked.size());
  out << "top-" << k << " share: " << detail::format_double(top_k_share(summary, k)) << '\n';
  return kExitOk;
}

int cmd_pairs(const AnalysisFlags& a, const FitFlags& f, const std::string& out_dir, std::ostream& out) {
  const auto posts = load_analysis_input(a);
  const PairOptions opts{filter_of(a), f.ordered_pairs};
  const auto vocabulary = choose_vocabulary(posts, f, opts);
  const auto matrix = build_design_matrix(posts, vocabulary, opts);
  fs::create_directories(out_dir);
  export_design(matrix, vocabulary, out_dir);
  out << "design matrix: " << matrix.rows() << " rows x " << matrix.features() << " pair features, "
      << matrix.x.cols.size() << " nonzeros\n";
  return kExitOk;
}

struct FitOutputFlags {
  std::string results;
  std::string significant;
  std::string meta;
};

int cmd_fit(const AnalysisFlags& a, const FitFlags& f, const FitOutputFlags& o, std::ostream& out) {
  const auto posts = load_analysis_input(a);
  const auto result = run_fit(posts, a, f);
  if (!o.results.empty()) export_results_csv(result.fit.columns, o.results);
  if (!o.significant.empty()) export_results_csv(significant_rows(result.significant), o.significant);
  if (!o.meta.empty()) write_json(o.meta, fit_metadata(result, a, f, "fit"));
  out << "fit: " << result.fit.iterations << " iterations, log-likelihood "
      << detail::format_double(result.fit.log_likelihood) << '\n';
  print_significant(out, result);
  return kExitOk;
}

struct ReportFlags {
  std::string out_root;
  std::string run_name;
  std::string unit = "sentence";
};

int cmd_report(const AnalysisFlags& a, const NetworkFlags& n, const FitFlags& f, const ReportFlags& r,
               std::ostream& out) {
  const auto sentiment = sentiment_of(a);
  const auto posts = load_analysis_input(a);
  const auto filter = filter_of(a);

  const auto summary = emotion_frequency(posts, *parse_frequency_unit(r.unit), filter);
  const auto histogram = pair_count_histogram(posts, filter);
  const auto matrix = build_cooccurrence(posts, filter, *parse_count_mode(n.count_mode));
  const auto network = matrix_to_network(matrix, compute_node_stats(posts, filter));
  const auto fit = run_fit(posts, a, f);

  const auto dir = make_run_directory(r.out_root, r.run_name);
  const std::vector<std::string> artifacts = {"frequency.tsv",   "pair_counts.tsv", "cooccurrence.csv",
                                              "network.graphml", "results.csv",     "significant.csv",
                                              "run.json"};
  export_frequency_tsv(summary, dir / "frequency.tsv");
  export_histogram_tsv(histogram, dir / "pair_counts.tsv");
  export_matrix_csv(matrix, dir / "cooccurrence.csv", *parse_matrix_order(n.order), a.include_neutral, sentiment);
  export_network(network, NetworkFormat::graphml, dir / "network.graphml", sentiment);
  export_results_csv(fit.fit.columns, dir / "results.csv");
  export_results_csv(significant_rows(fit.significant), dir / "significant.csv");

  auto meta = fit_metadata(fit, a, f, "report");
  meta["unit"] = r.unit;
  meta["order"] = n.order;
  meta["count_mode"] = n.count_mode;
  meta["posts"] = posts.size();
  meta["top_8_share"] = top_k_share(summary, std::min<std::size_t>(8, summary.ranked.size()));
  write_json(dir / "run.json", meta);

  ordered_json manifest;
  manifest["artifacts"] = artifacts;
  write_json(dir / "manifest.json", manifest);

  out << dir.string() << '\n';
  return kExitOk;
}

struct SimulateFlags {
  std::uint64_t seed = 0;
  std::size_t posts = 1000;
  std::string model;
  std::string out;
  std::string truth;
  std::string raw_out;
};

int cmd_simulate(const SimulateFlags& s, std::ostream& out) {
  auto model = s.model.empty() ? PlantedModel::reference(s.seed) : load_planted_model(s.model);
  model.seed = s.seed;
  const auto posts = generate_corpus(model, s.posts);
  save_annotations(s.out, posts);
  if (!s.truth.empty()) save_ground_truth(s.truth, model);
  if (!s.raw_out.empty()) {
    const auto raw = render_raw_posts(posts);
    auto file = detail::open_output(s.raw_out);
    for (const auto& p : raw) {
      ordered_json j;
      j["id"] = p.id;
      j["created_utc"] = p.created_utc;
      j["title"] = p.title;
      j["selftext"] = p.body;
      j["subreddit"] = p.source;
      file << j.dump() << '\n';
    }
    detail::finish_output(file, s.raw_out);
  }
  std::size_t ones = 0;
  for (const auto& p : posts) ones += static_cast<std::size_t>(p.outcome);
  out << "simulated " << posts.size() << " posts (seed " << s.seed << ", " << ones << " with outcome 1) -> " << s.out
      << '\n';
  return kExitOk;
}

bool is_flag_present(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;

  std::ifstream in(config_path);
  if (!in) throw UsageError("cannot read config file '" + config_path + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto row = detail::trim(line);
    if (row.empty() || row.front() == '#' || row.front() == '[') continue;
    const auto eq = row.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(config_path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    auto key = std::string(detail::trim(row.substr(0, eq)));
    auto value = std::string(detail::trim(row.substr(eq + 1)));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    std::replace(key.begin(), key.end(), '_', '-');
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    const auto flag = "--" + key;
    if (is_flag_present(rest, flag)) continue;
    if (value == "true") {
      rest.push_back(flag);
    } else if (value != "false") {
      rest.push_back(flag);
      rest.push_back(value);
    }
  }
  return rest;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Emotion co-occurrence and depressive-symptom pair analysis", "emopair"};
  app.require_subcommand(1);

  IngestFlags ingest;
  std::string ingest_out;
  auto* ingest_cmd = app.add_subcommand("ingest", "Load a post dump, filter by time and segment sentences");
  add_ingest_flags(ingest_cmd, ingest);
  ingest_cmd->add_option("--out,-o", ingest_out, "Write segmented posts as JSON lines");

  IngestFlags annotate_ingest;
  AnnotateFlags annotate;
  auto* annotate_cmd = app.add_subcommand("annotate", "Label sentences and posts with an annotator backend");
  add_ingest_flags(annotate_cmd, annotate_ingest);
  annotate_cmd->add_option("--backend", annotate.backend, "Annotator backend")
      ->check(CLI::IsMember({"lexicon", "remote", "file"}));
  annotate_cmd->add_option("--rules", annotate.rules, "keyword,emotion CSV (lexicon)")->check(CLI::ExistingFile);
  annotate_cmd->add_option("--depression-rules", annotate.depression_rules, "keyword,severity CSV (lexicon)")
      ->check(CLI::ExistingFile);
  annotate_cmd->add_option("--labels", annotate.labels, "Pre-labeled corpus (file)")->check(CLI::ExistingFile);
  annotate_cmd->add_option("--endpoint", annotate.endpoint, "Annotator service URL (remote)")
      ->envname(kAnnotatorUrlEnv);
  annotate_cmd->add_option("--concurrency", annotate.concurrency, "Posts in flight")->check(CLI::Range(1, 256));
  annotate_cmd->add_option("--binarize", annotate.binarize, "Depression binarization policy")
      ->check(CLI::IsMember(kPolicies));
  annotate_cmd->add_option("--out,-o", annotate.out, "Labeled-corpus output")->required();

  AnalysisFlags network_in;
  NetworkFlags network_flags;
  NetworkOutputs network_out;
  auto* network_cmd = app.add_subcommand("network", "Build the co-occurrence matrix and network");
  add_analysis_flags(network_cmd, network_in);
  add_network_flags(network_cmd, network_flags);
  network_cmd->add_option("--graphml", network_out.graphml, "GraphML output");
  network_cmd->add_option("--dot", network_out.dot, "DOT output");
  network_cmd->add_option("--edges", network_out.edges, "Edge-list CSV output");
  network_cmd->add_option("--matrix", network_out.matrix, "Matrix CSV output");

  AnalysisFlags stats_in;
  StatsFlags stats;
  auto* stats_cmd = app.add_subcommand("stats", "Emotion frequency ranking, CDF/CCDF and pairs per post");
  add_analysis_flags(stats_cmd, stats_in);
  stats_cmd->add_option("--unit", stats.unit, "Frequency unit")
      ->check(CLI::IsMember({"sentence", "post_presence"}));
  stats_cmd->add_option("--top-k", stats.top_k, "Report the share of the k most frequent emotions")
      ->check(CLI::PositiveNumber);
  stats_cmd->add_option("--out,-o", stats.out, "Frequency TSV output");
  stats_cmd->add_option("--hist", stats.hist, "Pairs-per-post TSV output");

  AnalysisFlags pairs_in;
  FitFlags pairs_flags;
  std::string pairs_out;
  auto* pairs_cmd = app.add_subcommand("pairs", "Export the pair-feature design matrix");
  add_analysis_flags(pairs_cmd, pairs_in);
  pairs_cmd->add_option("--min-support", pairs_flags.min_support, "Minimum posts per pair");
  pairs_cmd->add_flag("--ordered-pairs", pairs_flags.ordered_pairs, "Directed pair features");
  pairs_cmd->add_option("--pairs", pairs_flags.pairs, "Fixed vocabulary")->delimiter(',');
  pairs_cmd->add_option("--truth", pairs_flags.truth, "Use the vocabulary of a ground-truth JSON")
      ->check(CLI::ExistingFile);
  pairs_cmd->add_option("--out-dir", pairs_out, "Directory for triplets/vocabulary/outcome CSVs")->required();

  AnalysisFlags fit_in;
  FitFlags fit_flags;
  FitOutputFlags fit_out;
  auto* fit_cmd = app.add_subcommand("fit", "Logistic regression of the outcome on pair features");
  add_analysis_flags(fit_cmd, fit_in);
  add_fit_flags(fit_cmd, fit_flags);
  fit_cmd->add_option("--out,-o", fit_out.results, "Coefficient table CSV");
  fit_cmd->add_option("--significant", fit_out.significant, "Significant-pair table CSV");
  fit_cmd->add_option("--meta", fit_out.meta, "Run metadata JSON");

  AnalysisFlags report_in;
  NetworkFlags report_network;
  FitFlags report_fit;
  ReportFlags report;
  auto* report_cmd = app.add_subcommand("report", "Run stats, network, pairs and fit into one run directory");
  add_analysis_flags(report_cmd, report_in);
  add_network_flags(report_cmd, report_network);
  add_fit_flags(report_cmd, report_fit);
  report_cmd->add_option("--unit", report.unit, "Frequency unit")
      ->check(CLI::IsMember({"sentence", "post_presence"}));
  report_cmd->add_option("--out-root", report.out_root, "Parent directory for run directories")->required();
  report_cmd->add_option("--run-name", report.run_name, "Run directory name (default run-<UTC timestamp>)");

  SimulateFlags simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a labeled corpus from a planted model");
  simulate_cmd->add_option("--seed", simulate.seed, "Generator seed");
  simulate_cmd->add_option("--posts", simulate.posts, "Number of posts")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--model", simulate.model, "Planted model JSON")->check(CLI::ExistingFile);
  simulate_cmd->add_option("--out,-o", simulate.out, "Labeled-corpus output")->required();
  simulate_cmd->add_option("--truth", simulate.truth, "Ground-truth JSON output");
  simulate_cmd->add_option("--raw-out", simulate.raw_out, "Also write the corpus as a post dump");

  try {
    const auto args = expand_config(raw_args);
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("emopair");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (*fit_cmd) check_fit_flags(fit_flags);
    if (*report_cmd) check_fit_flags(report_fit);
    if (*pairs_cmd) check_fit_flags(pairs_flags);
    if (*ingest_cmd) load_options(ingest);
    if (*annotate_cmd) load_options(annotate_ingest);

    if (*ingest_cmd) return cmd_ingest(ingest, ingest_out, out);
    if (*annotate_cmd) return cmd_annotate(annotate_ingest, annotate, out);
    if (*network_cmd) return cmd_network(network_in, network_flags, network_out, out);
    if (*stats_cmd) return cmd_stats(stats_in, stats, out);
    if (*pairs_cmd) return cmd_pairs(pairs_in, pairs_flags, pairs_out, out);
    if (*fit_cmd) return cmd_fit(fit_in, fit_flags, fit_out, out);
    if (*report_cmd) return cmd_report(report_in, report_network, report_fit, report, out);
    if (*simulate_cmd) return cmd_simulate(simulate, out);
    throw UsageError("no subcommand");
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: UsageError: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: UsageError: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << one_line(e.what()) << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: InternalError: " << one_line(e.what()) << '\n';
    return kExitFailure;
  }
}

}  // namespace emopair::cli
