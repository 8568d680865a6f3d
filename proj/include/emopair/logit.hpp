#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emopair/error.hpp"
#include "emopair/pairfeat.hpp"

namespace emopair {

enum class Correction : std::uint8_t { none, bonferroni };

std::string_view to_string(Correction c) noexcept;
std::optional<Correction> parse_correction(std::string_view name) noexcept;

struct FitConfig {
  std::size_t max_iterations = 100;
  /// Stop once an accepted step changes the penalized log-likelihood by less.
  double tolerance = 1e-8;
  /// L2 penalty on the non-intercept coefficients.
  double ridge = 0.0;
  double alpha = 0.05;
  Correction correction = Correction::none;

  /// Throws InvalidArgument on tolerance <= 0, ridge < 0, alpha outside (0,1)
  /// or a zero iteration budget.
  void validate() const;
};

/// Wald statistics for one model column.
struct Coefficient {
  std::string name;
  double coef = 0.0;
  double se = 0.0;
  double z = 0.0;
  double p = 1.0;
  double odds_ratio = 1.0;
};

struct FitResult {
  /// Intercept first, then one entry per design column.
  std::vector<Coefficient> columns;
  double log_likelihood = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  /// Set when a column perfectly predicts the outcome and the ridge penalty
  /// is what keeps its estimate finite.
  bool separation_flag = false;
  std::size_t rows = 0;

  std::vector<double> coefficients() const;
};

/// Raised when the iteration budget runs out; carries the last iterate.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& message, FitResult partial)
      : Error("NotConverged", message), partial_(std::move(partial)) {}
  const FitResult& partial() const noexcept { return partial_; }

 private:
  FitResult partial_;
};

/// Maximum-likelihood logistic regression by Newton/IRLS with step-halving.
///
/// Maximizes sum_i [y_i log p_i + (1 - y_i) log(1 - p_i)] - ridge/2 * |beta_{1..}|^2
/// starting from beta = 0 with the intercept at logit(mean y). Each step solves
/// (X^T W X + ridge I) delta = X^T (y - p) - ridge beta by Cholesky; a step
/// that lowers the objective is halved, up to 10 times. Standard errors are
/// the square roots of the diagonal of the inverse penalized information at
/// the optimum.
///
/// Errors: DegenerateOutcome when y has a single class; ConstantColumn for a
/// feature equal on every row; SeparationDetected when (without ridge) a column
/// perfectly predicts y, the information matrix is numerically singular, or
/// any |beta| exceeds 30; NotConverged when max_iterations is exhausted.
FitResult fit_logistic(const DesignMatrix& matrix, const FitConfig& config = {});

/// One intercept + single-feature model per column. Column j of the result
/// holds feature j's estimate from its own model; the intercept entry and the
/// log-likelihood come from the intercept-only model.
FitResult fit_marginal(const DesignMatrix& matrix, const FitConfig& config = {});

/// Penalized log-likelihood at `beta` (intercept first).
double penalized_log_likelihood(const DesignMatrix& matrix, std::span<const double> beta, double ridge = 0.0);

/// Analytic gradient X^T (y - p) - ridge * beta (intercept unpenalized).
std::vector<double> penalized_gradient(const DesignMatrix& matrix, std::span<const double> beta, double ridge = 0.0);

/// Standard normal CDF via erfc; symmetric to rounding.
double std_normal_cdf(double z) noexcept;

/// 2 * (1 - Phi(|z|)), evaluated as erfc(|z| / sqrt 2) to keep tail precision.
double two_sided_p_value(double z) noexcept;

struct SignificantPair {
  EmotionPair pair;
  Coefficient stats;
};

/// Non-intercept rows with p below alpha (alpha / #features under
/// Bonferroni), sorted by p then canonical pair order. Throws InvalidArgument
/// for a fit that did not converge or does not match the vocabulary.
std::vector<SignificantPair> significant_pairs(const FitResult& fit, const PairVocabulary& vocabulary, double alpha,
                                               Correction correction);

/// CSV with columns pair,coef,se,z,p,odds_ratio.
void write_results_csv(std::ostream& out, std::span<const Coefficient> rows);
void export_results_csv(std::span<const Coefficient> rows, const std::filesystem::path& destination);

std::vector<Coefficient> significant_rows(std::span<const SignificantPair> pairs);

}  // namespace emopair
