// Acceptance suite: one PASS/FAIL line per primary criterion, exit status 1 if
// any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "emopair/cli.hpp"
#include "emopair/diststats.hpp"
#include "emopair/emonet.hpp"
#include "emopair/logit.hpp"
#include "emopair/pairfeat.hpp"
#include "emopair/simulate.hpp"
#include "support.hpp"

#ifndef EMOPAIR_CLI_PATH
#error "EMOPAIR_CLI_PATH must be defined"
#endif

using namespace emopair;
using emopair::testing::data_file;
using emopair::testing::make_post;
using emopair::testing::read_file;
using emopair::testing::ScratchDir;
using E = Emotion;

namespace {

/// Collects failure messages for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  bool failed() const { return failed_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
};

int g_failed = 0;

void criterion(int number, const std::string& title, double budget_seconds, const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("unexpected exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0.0) {
    std::ostringstream msg;
    msg << "runtime " << seconds << " s exceeds " << budget_seconds << " s";
    check.expect(seconds < budget_seconds, msg.str());
  }
  std::cout << (check.failed() ? "FAIL" : "PASS") << " criterion " << number << ": " << title << " ("
            << std::fixed << std::setprecision(3) << seconds << " s)" << std::defaultfloat << '\n';
  for (const auto& f : check.failures()) std::cout << "    " << f << '\n';
  if (check.failed()) ++g_failed;
}

DesignMatrix two_by_two(std::size_t n11, std::size_t n10, std::size_t n01, std::size_t n00) {
  std::vector<std::vector<std::uint32_t>> rows;
  std::vector<std::uint8_t> y;
  auto add = [&](std::size_t count, bool x, bool outcome) {
    for (std::size_t i = 0; i < count; ++i) {
      rows.push_back(x ? std::vector<std::uint32_t>{0} : std::vector<std::uint32_t>{});
      y.push_back(outcome);
    }
  };
  add(n11, true, true);
  add(n10, true, false);
  add(n01, false, true);
  add(n00, false, false);
  return make_design_matrix(std::move(rows), std::move(y), 1);
}

std::vector<AnnotatedPost> small_random_corpus(FixtureRng& rng, std::size_t max_posts, std::size_t max_emotions) {
  std::vector<AnnotatedPost> posts(1 + rng.below(max_posts));
  for (std::size_t i = 0; i < posts.size(); ++i) {
    std::vector<E> labels;
    const auto k = rng.below(max_emotions + 1);
    for (std::size_t s = 0; s < k; ++s) labels.push_back(emotion_at(rng.below(kEmotionCount - 1)));
    posts[i] = make_post("p" + std::to_string(i), labels, rng.bernoulli(0.5));
  }
  return posts;
}

int run_cli(const std::string& args) {
  const std::string command = std::string("\"") + EMOPAIR_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cell_stream(line);
    std::string cell;
    while (std::getline(cell_stream, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

template <typename F>
bool throws_kind(F f, const std::string& kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

int main() {
  criterion(1, "closed-form 2x2 logistic oracle", 1.0, [](Check& c) {
    FixtureRng rng(20240101);
    for (int t = 0; t < 20; ++t) {
      const std::size_t n11 = 1 + rng.below(300), n10 = 1 + rng.below(300), n01 = 1 + rng.below(300),
                        n00 = 1 + rng.below(300);
      const auto fit = fit_logistic(two_by_two(n11, n10, n01, n00));
      const double expected = std::log(double(n11) * double(n00) / (double(n10) * double(n01)));
      std::ostringstream msg;
      msg << "cells " << n11 << "/" << n10 << "/" << n01 << "/" << n00 << ": beta1 " << fit.columns[1].coef
          << " vs " << expected;
      c.expect(std::abs(fit.columns[1].coef - expected) < 1e-6, msg.str());
    }
  });

  criterion(2, "planted-model recovery on 20000 simulated posts", 30.0, [](Check& c) {
    PlantedModel model;
    model.seed = 20240202;
    model.intercept = -0.4;
    const std::vector<E> palette = {E::admiration, E::amusement, E::anger,   E::fear,
                                    E::grief,      E::joy,       E::optimism, E::sadness};
    for (auto e : palette) model.inclusion[index_of(e)] = 0.4;
    model.pairs = {{E::amusement, E::grief}, {E::optimism, E::sadness}, {E::anger, E::fear},
                   {E::fear, E::sadness},    {E::admiration, E::joy},   {E::grief, E::sadness},
                   {E::admiration, E::amusement}, {E::anger, E::joy},   {E::fear, E::optimism},
                   {E::amusement, E::sadness},    {E::grief, E::joy},   {E::admiration, E::anger}};
    model.coefficients = {0.96, -0.6, 0.75, 1.2, -1.2, 0.5, 0, 0, 0, 0, 0, 0};
    model.validate();

    const auto posts = generate_corpus(model, 20000);
    const auto vocabulary = fixed_vocabulary(posts, model.pairs);
    const auto matrix = build_design_matrix(posts, vocabulary);
    const auto fit = fit_logistic(matrix);
    c.expect(fit.converged, "fit did not converge");
    for (std::size_t j = 0; j < model.pairs.size(); ++j) {
      const auto& col = fit.columns[j + 1];
      std::ostringstream msg;
      msg << model.pairs[j].name() << ": estimate " << col.coef << " (se " << col.se << ") vs planted "
          << model.coefficients[j];
      c.expect(std::abs(col.coef - model.coefficients[j]) <= 3.0 * col.se, msg.str());
    }

    const auto significant = significant_pairs(fit, vocabulary, 0.05, Correction::bonferroni);
    std::size_t mistakes = 0;
    for (std::size_t j = 0; j < model.pairs.size(); ++j) {
      const bool planted = model.coefficients[j] != 0.0;
      bool found = false;
      for (const auto& s : significant) found = found || s.pair == model.pairs[j];
      mistakes += planted != found;
    }
    c.expect(mistakes <= 1, std::to_string(mistakes) + " false inclusions/exclusions among significant pairs");
  });

  criterion(3, "co-occurrence matrix equals a double-loop oracle", 0.0, [](Check& c) {
    FixtureRng rng(20240303);
    for (int t = 0; t < 50; ++t) {
      const auto posts = small_random_corpus(rng, 200, 6);
      const auto m = build_cooccurrence(posts);
      for (std::size_t a = 0; a < kEmotionCount; ++a) {
        for (std::size_t b = 0; b < kEmotionCount; ++b) {
          std::uint64_t expected = 0;
          for (const auto& p : posts) {
            bool has_a = false, has_b = false;
            for (const auto& s : p.sentences) {
              has_a = has_a || (s.emotion == emotion_at(a) && s.emotion != E::neutral);
              has_b = has_b || (s.emotion == emotion_at(b) && s.emotion != E::neutral);
            }
            expected += a != b && has_a && has_b;
          }
          const auto got = m(emotion_at(a), emotion_at(b));
          c.expect(got == expected, "corpus " + std::to_string(t) + " cell " + std::to_string(a) + "," +
                                        std::to_string(b) + ": " + std::to_string(got) +
                                        " vs " + std::to_string(expected));
          c.expect(got == m(emotion_at(b), emotion_at(a)), "asymmetric matrix");
        }
        c.expect(m(emotion_at(a), emotion_at(a)) == 0, "nonzero diagonal");
      }
    }
  });

  criterion(4, "distribution properties on random corpora", 0.0, [](Check& c) {
    FixtureRng rng(20240404);
    for (int t = 0; t < 50; ++t) {
      const auto posts = small_random_corpus(rng, 300, 8);
      for (auto unit : {FrequencyUnit::sentence, FrequencyUnit::post_presence}) {
        DistributionSummary s;
        try {
          s = emotion_frequency(posts, unit);
        } catch (const EmptyDistribution&) {
          continue;
        }
        for (std::size_t k = 1; k < s.cdf.size(); ++k) c.expect(s.cdf[k] >= s.cdf[k - 1], "CDF not monotone");
        c.expect(std::abs(s.cdf.back() - 1.0) <= 1e-12, "CDF does not end at 1");
        c.expect(top_k_share(s, s.ranked.size()) == 1.0, "top_k_share(all) != 1");
      }
      const auto hist = pair_count_histogram(posts);
      std::map<std::uint64_t, std::uint64_t> expected;
      for (const auto& p : posts) {
        std::set<E> distinct;
        for (const auto& s : p.sentences) distinct.insert(s.emotion);
        const std::uint64_t k = distinct.size();
        ++expected[k < 2 ? 0 : k * (k - 1) / 2];
      }
      c.expect(hist.by_pairs == expected, "pairs-per-post histogram differs from C(k,2) counts");
    }
  });

  criterion(5, "analytic gradient and normal CDF", 0.0, [](Check& c) {
    FixtureRng rng(20240505);
    for (int t = 0; t < 10; ++t) {
      const std::size_t n = 500, p = 5;
      std::vector<std::vector<std::uint32_t>> rows(n);
      std::vector<std::uint8_t> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < p; ++j) {
          if (rng.bernoulli(0.3)) rows[i].push_back(j);
        }
        y[i] = rng.bernoulli(0.4);
      }
      const auto m = make_design_matrix(rows, y, p);
      std::vector<double> beta(p + 1);
      for (auto& b : beta) b = 2.0 * rng.uniform() - 1.0;
      const double ridge = t % 2 ? 0.0 : 0.5;
      const auto grad = penalized_gradient(m, beta, ridge);
      for (std::size_t j = 0; j <= p; ++j) {
        const double h = 1e-5;
        auto plus = beta, minus = beta;
        plus[j] += h;
        minus[j] -= h;
        const double fd =
            (penalized_log_likelihood(m, plus, ridge) - penalized_log_likelihood(m, minus, ridge)) / (2 * h);
        c.expect(std::abs(grad[j] - fd) <= 1e-4 * std::max(1.0, std::abs(fd)),
                 "gradient component " + std::to_string(j) + " disagrees with finite differences");
      }
    }
    c.expect(std::abs(std_normal_cdf(1.959964) - 0.975) <= 1e-6, "Phi(1.959964) != 0.975");
    for (int t = 0; t < 10000; ++t) {
      const double z = 16.0 * rng.uniform() - 8.0;
      c.expect(std::abs(std_normal_cdf(z) + std_normal_cdf(-z) - 1.0) <= 1e-12, "Phi(z) + Phi(-z) != 1");
    }
  });

  criterion(6, "report on the bundled fixture is byte-identical and OR = exp(coef)", 0.0, [](Check& c) {
    ScratchDir dir;
    const auto input = data_file("labeled_fixture.jsonl").string();
    const auto root = (dir / "runs").string();
    c.expect(run_cli("report --input \"" + input + "\" --out-root \"" + root + "\" --run-name a") == 0,
             "first report failed");
    c.expect(run_cli("report --input \"" + input + "\" --out-root \"" + root + "\" --run-name b") == 0,
             "second report failed");
    const std::filesystem::path a = dir / "runs" / "a", b = dir / "runs" / "b";
    std::size_t compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator(a)) {
      const auto name = entry.path().filename();
      c.expect(std::filesystem::exists(b / name), name.string() + " missing from the second run");
      c.expect(read_file(a / name) == read_file(b / name), name.string() + " differs between runs");
      ++compared;
    }
    c.expect(compared == 8, "expected 8 artifacts, found " + std::to_string(compared));

    const auto rows = read_csv(a / "results.csv");
    c.expect(rows.size() > 1 && rows[0].size() == 6 && rows[0][5] == "odds_ratio", "results.csv header");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const double coef = std::stod(rows[r][1]);
      const double odds = std::stod(rows[r][5]);
      c.expect(std::abs(odds - std::exp(coef)) <= 1e-9 * std::exp(coef), rows[r][0] + ": odds_ratio != exp(coef)");
      c.expect((odds > 1.0) == (coef > 0.0), rows[r][0] + ": OR > 1 does not match coef > 0");
    }
  });

  criterion(7, "error paths and CLI exit codes", 0.0, [](Check& c) {
    std::vector<std::vector<std::uint32_t>> rows;
    std::vector<std::uint8_t> y;
    for (int i = 0; i < 20; ++i) {
      rows.push_back(i % 2 ? std::vector<std::uint32_t>{0} : std::vector<std::uint32_t>{});
      y.push_back(0);
    }
    c.expect(throws_kind([&] { fit_logistic(make_design_matrix(rows, y, 1)); }, "DegenerateOutcome"),
             "single-class outcome");
    y[0] = 1;
    auto constant = rows;
    for (auto& r : constant) r = {0};
    c.expect(throws_kind([&] { fit_logistic(make_design_matrix(constant, y, 1)); }, "ConstantColumn"),
             "constant column");
    std::vector<std::uint8_t> separated(20);
    for (int i = 0; i < 20; ++i) separated[i] = i % 2 == 1 || i % 4 == 0;
    c.expect(throws_kind([&] { fit_logistic(make_design_matrix(rows, separated, 1)); }, "SeparationDetected"),
             "separation");

    ScratchDir dir;
    std::vector<AnnotatedPost> posts;
    for (int i = 0; i < 40; ++i) posts.push_back(make_post("p" + std::to_string(i), {E::anger, E::fear}, 0));
    save_annotations(dir / "single.jsonl", posts);
    const auto fixture = data_file("labeled_fixture.jsonl").string();
    c.expect(run_cli("stats --input \"" + fixture + "\"") == cli::kExitOk, "valid run exit code");
    c.expect(run_cli("fit --input \"" + fixture + "\" --bogus") == cli::kExitUsage, "unknown flag exit code");
    c.expect(run_cli("fit --input \"" + fixture + "\" --alpha 1.5") == cli::kExitUsage, "bad value exit code");
    c.expect(run_cli("fit --input \"" + (dir / "single.jsonl").string() + "\" --min-support 1") ==
                 cli::kExitFailure,
             "pipeline error exit code");
  });

  std::cout << (g_failed == 0 ? "all primary criteria passed" : std::to_string(g_failed) + " criteria failed")
            << '\n';
  return g_failed == 0 ? 0 : 1;
}
