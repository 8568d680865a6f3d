#include "emopair/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <omp.h>

namespace emopair::kernels {
namespace {

constexpr std::size_t kMinChunkRows = 2048;
constexpr std::size_t kMaxChunks = 64;

inline void add_pairs(std::uint32_t bits, PairCounts& counts) {
  for (std::uint32_t a_bits = bits; a_bits != 0; a_bits &= a_bits - 1) {
    const auto a = static_cast<std::size_t>(std::countr_zero(a_bits));
    for (std::uint32_t b_bits = a_bits & (a_bits - 1); b_bits != 0; b_bits &= b_bits - 1) {
      const auto b = static_cast<std::size_t>(std::countr_zero(b_bits));
      ++counts[a * kEmotionCount + b];
    }
  }
}

inline void mirror_upper(PairCounts& counts) {
  for (std::size_t a = 0; a < kEmotionCount; ++a) {
    for (std::size_t b = a + 1; b < kEmotionCount; ++b) counts[b * kEmotionCount + a] = counts[a * kEmotionCount + b];
  }
}

template <typename Emit>
inline void for_each_column(std::uint32_t bits, const PairColumnTable& table, Emit emit) {
  for (std::uint32_t a_bits = bits; a_bits != 0; a_bits &= a_bits - 1) {
    const auto a = static_cast<std::size_t>(std::countr_zero(a_bits));
    for (std::uint32_t b_bits = a_bits & (a_bits - 1); b_bits != 0; b_bits &= b_bits - 1) {
      const auto b = static_cast<std::size_t>(std::countr_zero(b_bits));
      const auto col = table[a * kEmotionCount + b];
      if (col >= 0) emit(static_cast<std::uint32_t>(col));
    }
  }
}

inline double softplus(double eta) noexcept {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

inline double row_eta(const SparseBinaryRows& x, std::span<const double> beta, std::size_t i) noexcept {
  double eta = beta[0];
  for (auto c : x.row(i)) eta += beta[c + 1];
  return eta;
}

// Adds one row into an upper-triangular d*d accumulator and a score vector.
inline void accumulate_row(std::span<const std::uint32_t> cols, double w, double r, std::size_t d, double* info,
                           double* score) noexcept {
  info[0] += w;
  score[0] += r;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const std::size_t ck = cols[k] + 1;
    info[ck] += w;
    score[ck] += r;
    double* row = info + ck * d;
    for (std::size_t l = k; l < cols.size(); ++l) row[cols[l] + 1] += w;
  }
}

inline void symmetrize(std::vector<double>& info, std::size_t d) {
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) info[j * d + i] = info[i * d + j];
  }
}

}  // namespace

std::size_t reduction_chunk_rows(std::size_t rows) noexcept {
  return std::max(kMinChunkRows, (rows + kMaxChunks - 1) / kMaxChunks);
}

PairCounts cooccurrence_serial(std::span<const EmotionSet> sets) {
  PairCounts counts{};
  for (const auto s : sets) add_pairs(s.bits(), counts);
  mirror_upper(counts);
  return counts;
}

PairCounts cooccurrence_parallel(std::span<const EmotionSet> sets) {
  PairCounts counts{};
  const auto n = static_cast<std::ptrdiff_t>(sets.size());
#pragma omp parallel
  {
    PairCounts local{};
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) add_pairs(sets[static_cast<std::size_t>(i)].bits(), local);
#pragma omp critical(emopair_cooccurrence_merge)
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += local[k];
  }
  mirror_upper(counts);
  return counts;
}

SparseBinaryRows pair_rows_serial(std::span<const EmotionSet> sets, const PairColumnTable& table, std::size_t n_cols) {
  SparseBinaryRows x;
  x.n_cols = n_cols;
  x.row_ptr.reserve(sets.size() + 1);
  for (const auto s : sets) {
    const auto begin = x.cols.size();
    for_each_column(s.bits(), table, [&](std::uint32_t c) { x.cols.push_back(c); });
    std::sort(x.cols.begin() + static_cast<std::ptrdiff_t>(begin), x.cols.end());
    x.row_ptr.push_back(x.cols.size());
  }
  return x;
}

SparseBinaryRows pair_rows_parallel(std::span<const EmotionSet> sets, const PairColumnTable& table,
                                    std::size_t n_cols) {
  SparseBinaryRows x;
  x.n_cols = n_cols;
  const auto n = static_cast<std::ptrdiff_t>(sets.size());
  x.row_ptr.assign(sets.size() + 1, 0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for_each_column(sets[static_cast<std::size_t>(i)].bits(), table, [&](std::uint32_t) { ++count; });
    x.row_ptr[static_cast<std::size_t>(i) + 1] = count;
  }
  for (std::size_t i = 1; i < x.row_ptr.size(); ++i) x.row_ptr[i] += x.row_ptr[i - 1];
  x.cols.resize(x.row_ptr.back());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    auto* out = x.cols.data() + x.row_ptr[k];
    auto* cursor = out;
    for_each_column(sets[k].bits(), table, [&](std::uint32_t c) { *cursor++ = c; });
    std::sort(out, cursor);
  }
  return x;
}

void linear_predictor_serial(const SparseBinaryRows& x, std::span<const double> beta, std::span<double> eta) {
  for (std::size_t i = 0; i < x.rows(); ++i) eta[i] = row_eta(x, beta, i);
}

void linear_predictor_parallel(const SparseBinaryRows& x, std::span<const double> beta, std::span<double> eta) {
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    eta[static_cast<std::size_t>(i)] = row_eta(x, beta, static_cast<std::size_t>(i));
  }
}

double bernoulli_log_likelihood_serial(std::span<const double> eta, std::span<const std::uint8_t> y) {
  double ll = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) ll += (y[i] ? eta[i] : 0.0) - softplus(eta[i]);
  return ll;
}

double bernoulli_log_likelihood_parallel(std::span<const double> eta, std::span<const std::uint8_t> y) {
  const std::size_t n = eta.size();
  const std::size_t chunk = reduction_chunk_rows(n);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(n_chunks, 0.0);
  const auto nc = static_cast<std::ptrdiff_t>(n_chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    const auto begin = static_cast<std::size_t>(c) * chunk;
    const auto end = std::min(n, begin + chunk);
    partial[static_cast<std::size_t>(c)] = bernoulli_log_likelihood_serial(eta.subspan(begin, end - begin),
                                                                           y.subspan(begin, end - begin));
  }
  double ll = 0.0;
  for (double p : partial) ll += p;
  return ll;
}

CrossProducts cross_products_serial(const SparseBinaryRows& x, std::span<const double> weight,
                                    std::span<const double> residual) {
  const std::size_t d = x.n_cols + 1;
  CrossProducts out{std::vector<double>(d * d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < x.rows(); ++i) {
    accumulate_row(x.row(i), weight[i], residual[i], d, out.information.data(), out.score.data());
  }
  symmetrize(out.information, d);
  return out;
}

CrossProducts cross_products_parallel(const SparseBinaryRows& x, std::span<const double> weight,
                                      std::span<const double> residual) {
  const std::size_t d = x.n_cols + 1;
  const std::size_t n = x.rows();
  const std::size_t chunk = reduction_chunk_rows(n);
  const std::size_t n_chunks = std::max<std::size_t>(1, (n + chunk - 1) / chunk);

  std::vector<std::vector<double>> info(n_chunks);
  std::vector<std::vector<double>> score(n_chunks);
  const auto nc = static_cast<std::ptrdiff_t>(n_chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    const auto k = static_cast<std::size_t>(c);
    info[k].assign(d * d, 0.0);
    score[k].assign(d, 0.0);
    const auto end = std::min(n, (k + 1) * chunk);
    for (std::size_t i = k * chunk; i < end; ++i) {
      accumulate_row(x.row(i), weight[i], residual[i], d, info[k].data(), score[k].data());
    }
  }

  CrossProducts out{std::move(info[0]), std::move(score[0])};
  const auto dd = static_cast<std::ptrdiff_t>(d * d);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < dd; ++e) {
    const auto k = static_cast<std::size_t>(e);
    double acc = out.information[k];
    for (std::size_t c = 1; c < n_chunks; ++c) acc += info[c][k];
    out.information[k] = acc;
  }
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t c = 1; c < n_chunks; ++c) out.score[j] += score[c][j];
  }
  symmetrize(out.information, d);
  return out;
}

}  // namespace emopair::kernels
