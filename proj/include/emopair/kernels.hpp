#pragma once

// Data-parallel inner loops. Every kernel has a `serial` reference
// implementation, kept for tests and benchmarks, and a `parallel` OpenMP
// version that is the one the pipeline calls.
//
// Integer kernels give identical results in both versions. Floating-point
// reductions in the parallel versions split rows into a fixed sequence of
// chunks that depends only on the row count, and sum the chunk partials in
// chunk order, so results are bitwise reproducible for any thread count.
// They may differ from the serial reference in the last bits.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "emopair/emotion.hpp"

namespace emopair::kernels {

/// Row-major 28x28 pair counts.
using PairCounts = std::array<std::uint64_t, kEmotionCount * kEmotionCount>;

/// For every set, adds 1 to counts[a][b] and counts[b][a] for each pair
/// {a, b} of distinct members. The diagonal stays 0.
PairCounts cooccurrence_serial(std::span<const EmotionSet> sets);
PairCounts cooccurrence_parallel(std::span<const EmotionSet> sets);

/// Binary sparse rows in CSR layout. Column indices within a row are sorted.
/// The intercept is not stored.
struct SparseBinaryRows {
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::size_t n_cols = 0;

  std::size_t rows() const noexcept { return row_ptr.size() - 1; }
  std::span<const std::uint32_t> row(std::size_t i) const noexcept {
    return {cols.data() + row_ptr[i], row_ptr[i + 1] - row_ptr[i]};
  }

  friend bool operator==(const SparseBinaryRows&, const SparseBinaryRows&) = default;
};

/// Column index of every unordered pair, -1 when the pair is not a feature.
/// Indexed [a * 28 + b]; both orientations hold the same value.
using PairColumnTable = std::array<std::int32_t, kEmotionCount * kEmotionCount>;

/// Row i holds the columns of every pair of distinct members of sets[i].
SparseBinaryRows pair_rows_serial(std::span<const EmotionSet> sets, const PairColumnTable& table, std::size_t n_cols);
SparseBinaryRows pair_rows_parallel(std::span<const EmotionSet> sets, const PairColumnTable& table, std::size_t n_cols);

/// eta[i] = beta[0] + sum of beta[1 + j] over the columns j of row i.
void linear_predictor_serial(const SparseBinaryRows& x, std::span<const double> beta, std::span<double> eta);
void linear_predictor_parallel(const SparseBinaryRows& x, std::span<const double> beta, std::span<double> eta);

/// Sum over rows of y*eta - log(1 + exp(eta)), evaluated without overflow.
double bernoulli_log_likelihood_serial(std::span<const double> eta, std::span<const std::uint8_t> y);
double bernoulli_log_likelihood_parallel(std::span<const double> eta, std::span<const std::uint8_t> y);

/// Weighted cross-products with the intercept as column 0 (dimension
/// d = n_cols + 1): `information` = X^T diag(weight) X as a full symmetric
/// row-major d*d matrix, `score` = X^T residual.
struct CrossProducts {
  std::vector<double> information;
  std::vector<double> score;
};

CrossProducts cross_products_serial(const SparseBinaryRows& x, std::span<const double> weight,
                                    std::span<const double> residual);
CrossProducts cross_products_parallel(const SparseBinaryRows& x, std::span<const double> weight,
                                      std::span<const double> residual);

/// Rows per reduction chunk for `rows` rows. Depends on nothing else.
std::size_t reduction_chunk_rows(std::size_t rows) noexcept;

}  // namespace emopair::kernels
