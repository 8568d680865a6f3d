#include "emopair/logit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "emopair/kernels.hpp"
#include "text_util.hpp"

namespace emopair {
namespace {

constexpr double kSeparationMagnitude = 30.0;
constexpr int kMaxHalvings = 10;
constexpr double kSingularRcond = 1e-12;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Workspace {
  std::vector<double> eta;
  std::vector<double> weight;
  std::vector<double> residual;
};

double ridge_penalty(std::span<const double> beta, double ridge) {
  if (ridge == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t j = 1; j < beta.size(); ++j) s += beta[j] * beta[j];
  return 0.5 * ridge * s;
}

double objective(const DesignMatrix& m, std::span<const double> beta, double ridge, std::vector<double>& eta) {
  kernels::linear_predictor_parallel(m.x, beta, eta);
  return kernels::bernoulli_log_likelihood_parallel(eta, m.y) - ridge_penalty(beta, ridge);
}

inline double sigmoid(double eta) noexcept {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// Penalized information and gradient at the current eta.
kernels::CrossProducts information_at(const DesignMatrix& m, std::span<const double> beta, double ridge,
                                      Workspace& ws) {
  const auto n = static_cast<std::ptrdiff_t>(m.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double p = sigmoid(ws.eta[k]);
    ws.weight[k] = p * (1.0 - p);
    ws.residual[k] = static_cast<double>(m.y[k]) - p;
  }
  auto cp = kernels::cross_products_parallel(m.x, ws.weight, ws.residual);
  const std::size_t d = beta.size();
  for (std::size_t j = 1; j < d; ++j) {
    cp.information[j * d + j] += ridge;
    cp.score[j] -= ridge * beta[j];
  }
  return cp;
}

std::string column_name(const DesignMatrix& m, std::size_t j) {
  return j < m.feature_names.size() ? m.feature_names[j] : "x" + std::to_string(j);
}

void fill_wald(FitResult& result, std::span<const double> beta, const Eigen::MatrixXd& covariance) {
  for (std::size_t j = 0; j < beta.size(); ++j) {
    auto& c = result.columns[j];
    c.coef = beta[j];
    const double var = covariance(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
    c.se = var > 0.0 ? std::sqrt(var) : 0.0;
    c.z = c.se > 0.0 ? c.coef / c.se : 0.0;
    c.p = c.se > 0.0 ? two_sided_p_value(c.z) : 1.0;
    c.odds_ratio = std::exp(c.coef);
  }
}

void check_preconditions(const DesignMatrix& m, const FitConfig& config, FitResult& result) {
  const std::size_t n = m.rows();
  if (n == 0) throw DegenerateOutcome("design matrix has no rows");
  if (m.y.size() != n) throw InvalidArgument("outcome length differs from the row count");

  std::size_t ones = 0;
  for (auto y : m.y) ones += y;
  if (ones == 0 || ones == n) {
    throw DegenerateOutcome("outcome has a single class (" + std::to_string(ones) + " of " + std::to_string(n) +
                            " rows are 1)");
  }

  std::vector<std::size_t> present(m.features(), 0);
  std::vector<std::size_t> present_pos(m.features(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto c : m.x.row(i)) {
      ++present[c];
      present_pos[c] += m.y[i];
    }
  }
  for (std::size_t j = 0; j < m.features(); ++j) {
    if (present[j] == 0 || present[j] == n) {
      throw ConstantColumn(j, "column " + std::to_string(j) + " ('" + column_name(m, j) + "') is constant " +
                                  (present[j] == 0 ? "0" : "1") + " on all " + std::to_string(n) + " rows");
    }
  }
  // A binary column whose active rows all share one outcome has no finite MLE.
  for (std::size_t j = 0; j < m.features(); ++j) {
    if (present_pos[j] != 0 && present_pos[j] != present[j]) continue;
    if (config.ridge > 0.0) {
      result.separation_flag = true;
      continue;
    }
    throw SeparationDetected("column " + std::to_string(j) + " ('" + column_name(m, j) + "') perfectly predicts y=" +
                             (present_pos[j] == 0 ? "0" : "1") + " on its " + std::to_string(present[j]) +
                             " active rows; rerun with a ridge penalty (--ridge > 0)");
  }
}

}  // namespace

std::string_view to_string(Correction c) noexcept { return c == Correction::bonferroni ? "bonferroni" : "none"; }

std::optional<Correction> parse_correction(std::string_view name) noexcept {
  if (name == "none") return Correction::none;
  if (name == "bonferroni") return Correction::bonferroni;
  return std::nullopt;
}

void FitConfig::validate() const {
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be > 0");
  if (!(ridge >= 0.0)) throw InvalidArgument("ridge must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (max_iterations == 0) throw InvalidArgument("max_iterations must be positive");
}

std::vector<double> FitResult::coefficients() const {
  std::vector<double> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.coef);
  return out;
}

double std_normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double two_sided_p_value(double z) noexcept { return std::erfc(std::abs(z) / std::numbers::sqrt2); }

double penalized_log_likelihood(const DesignMatrix& matrix, std::span<const double> beta, double ridge) {
  std::vector<double> eta(matrix.rows());
  return objective(matrix, beta, ridge, eta);
}

std::vector<double> penalized_gradient(const DesignMatrix& matrix, std::span<const double> beta, double ridge) {
  Workspace ws{std::vector<double>(matrix.rows()), std::vector<double>(matrix.rows()),
               std::vector<double>(matrix.rows())};
  kernels::linear_predictor_parallel(matrix.x, beta, ws.eta);
  return information_at(matrix, beta, ridge, ws).score;
}

FitResult fit_logistic(const DesignMatrix& matrix, const FitConfig& config) {
  config.validate();
  FitResult result;
  check_preconditions(matrix, config, result);

  const std::size_t n = matrix.rows();
  const std::size_t d = matrix.features() + 1;
  result.rows = n;
  result.columns.resize(d);
  result.columns[0].name = "(intercept)";
  for (std::size_t j = 1; j < d; ++j) result.columns[j].name = column_name(matrix, j - 1);

  std::size_t ones = 0;
  for (auto y : matrix.y) ones += y;
  const double ybar = static_cast<double>(ones) / static_cast<double>(n);

  std::vector<double> beta(d, 0.0);
  beta[0] = std::log(ybar / (1.0 - ybar));
  Workspace ws{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  std::vector<double> candidate(d);
  std::vector<double> candidate_eta(n);

  double ll = objective(matrix, beta, config.ridge, ws.eta);
  Eigen::LLT<RowMatrix> llt;

  auto factorize = [&](const kernels::CrossProducts& cp) {
    const Eigen::Map<const RowMatrix> info(cp.information.data(), static_cast<Eigen::Index>(d),
                                           static_cast<Eigen::Index>(d));
    llt.compute(info);
    if (llt.info() != Eigen::Success || llt.rcond() < kSingularRcond) {
      if (config.ridge == 0.0) {
        throw SeparationDetected(
            "information matrix is numerically singular (separation or collinear columns); rerun with a ridge "
            "penalty (--ridge > 0)");
      }
      throw SeparationDetected("penalized information matrix is numerically singular; increase --ridge");
    }
  };

  for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
    const auto cp = information_at(matrix, beta, config.ridge, ws);
    factorize(cp);
    const Eigen::Map<const Eigen::VectorXd> score(cp.score.data(), static_cast<Eigen::Index>(d));
    const Eigen::VectorXd delta = llt.solve(score);

    double step = 1.0;
    bool accepted = false;
    double ll_new = ll;
    for (int h = 0; h <= kMaxHalvings; ++h, step *= 0.5) {
      for (std::size_t j = 0; j < d; ++j) candidate[j] = beta[j] + step * delta(static_cast<Eigen::Index>(j));
      ll_new = objective(matrix, candidate, config.ridge, candidate_eta);
      if (std::isfinite(ll_new) && ll_new >= ll) {
        accepted = true;
        break;
      }
    }
    result.iterations = iter;
    if (!accepted) {
      // No ascent direction left at working precision.
      result.converged = true;
      break;
    }

    const double change = ll_new - ll;
    beta.swap(candidate);
    ws.eta.swap(candidate_eta);
    ll = ll_new;

    const auto largest = std::max_element(beta.begin(), beta.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    if (std::abs(*largest) > kSeparationMagnitude) {
      const auto j = static_cast<std::size_t>(largest - beta.begin());
      throw SeparationDetected("coefficient of '" + result.columns[j].name + "' reached " +
                               detail::format_double(*largest) +
                               " (|beta| > 30); rerun with a ridge penalty (--ridge > 0)");
    }
    if (std::abs(change) < config.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.log_likelihood = ll;
  const auto cp = information_at(matrix, beta, config.ridge, ws);
  factorize(cp);
  const Eigen::MatrixXd covariance = llt.solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                                                         static_cast<Eigen::Index>(d)));
  fill_wald(result, beta, covariance);

  if (!result.converged) {
    throw NotConverged("no convergence after " + std::to_string(config.max_iterations) + " iterations", result);
  }
  return result;
}

FitResult fit_marginal(const DesignMatrix& matrix, const FitConfig& config) {
  config.validate();
  const std::size_t n = matrix.rows();

  DesignMatrix intercept_only;
  intercept_only.x.row_ptr.assign(n + 1, 0);
  intercept_only.y = matrix.y;
  FitResult combined = fit_logistic(intercept_only, config);
  combined.columns.resize(matrix.features() + 1);

  for (std::size_t j = 0; j < matrix.features(); ++j) {
    DesignMatrix single;
    single.x.n_cols = 1;
    single.x.row_ptr.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = matrix.x.row(i);
      if (std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(j))) single.x.cols.push_back(0);
      single.x.row_ptr.push_back(single.x.cols.size());
    }
    single.y = matrix.y;
    single.feature_names = {column_name(matrix, j)};
    try {
      auto fit = fit_logistic(single, config);
      combined.columns[j + 1] = fit.columns[1];
      combined.iterations = std::max(combined.iterations, fit.iterations);
      combined.separation_flag = combined.separation_flag || fit.separation_flag;
    } catch (const ConstantColumn& e) {
      throw ConstantColumn(j, "column " + std::to_string(j) + " ('" + column_name(matrix, j) + "'): " + e.what());
    }
  }
  return combined;
}

std::vector<SignificantPair> significant_pairs(const FitResult& fit, const PairVocabulary& vocabulary, double alpha,
                                               Correction correction) {
  if (!fit.converged) throw InvalidArgument("significant_pairs needs a converged fit");
  if (fit.columns.size() != vocabulary.size() + 1) {
    throw InvalidArgument("fit has " + std::to_string(fit.columns.size()) + " columns, vocabulary " +
                          std::to_string(vocabulary.size()) + " pairs");
  }
  const double threshold =
      correction == Correction::bonferroni && vocabulary.size() > 0 ? alpha / static_cast<double>(vocabulary.size())
                                                                    : alpha;
  std::vector<SignificantPair> out;
  for (std::size_t j = 0; j < vocabulary.size(); ++j) {
    const auto& c = fit.columns[j + 1];
    if (c.p < threshold) out.push_back({vocabulary.pairs[j], c});
  }
  std::stable_sort(out.begin(), out.end(), [](const SignificantPair& a, const SignificantPair& b) {
    if (a.stats.p != b.stats.p) return a.stats.p < b.stats.p;
    return a.pair < b.pair;
  });
  return out;
}

std::vector<Coefficient> significant_rows(std::span<const SignificantPair> pairs) {
  std::vector<Coefficient> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.stats);
  return out;
}

void write_results_csv(std::ostream& out, std::span<const Coefficient> rows) {
  using detail::format_double;
  out << "pair,coef,se,z,p,odds_ratio\n";
  for (const auto& r : rows) {
    out << r.name << ',' << format_double(r.coef) << ',' << format_double(r.se) << ',' << format_double(r.z) << ','
        << format_double(r.p) << ',' << format_double(r.odds_ratio) << '\n';
  }
}

void export_results_csv(std::span<const Coefficient> rows, const std::filesystem::path& destination) {
  auto out = detail::open_output(destination);
  write_results_csv(out, rows);
  detail::finish_output(out, destination);
}

}  // namespace emopair
