#include "tafkit/kernels.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tafkit {

std::size_t BitMatrix::row_count(std::size_t i) const noexcept {
  std::size_t c = 0;
  for (auto w : row(i)) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t BitMatrix::count() const noexcept {
  std::size_t c = 0;
  for (auto w : data_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

BitMatrix BitMatrix::transposed() const {
  BitMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j : row_indices(i)) t.set(j, i);
  return t;
}

std::vector<std::size_t> BitMatrix::row_indices(std::size_t i) const {
  std::vector<std::size_t> out;
  const auto r = row(i);
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = r[w];
    while (bits != 0) {
      const int b = std::countr_zero(bits);
      out.push_back(w * 64 + static_cast<std::size_t>(b));
      bits &= bits - 1;
    }
  }
  return out;
}

namespace kernels {
namespace {

// Rows ordered so that every row comes after all rows it strictly reaches.
// For a transitive strict relation, R(i, k) implies preds(k) is a proper
// subset of preds(i), so sorting by predecessor count is a topological order.
std::vector<std::size_t> topological_rows(const BitMatrix& strict) {
  std::vector<std::size_t> order(strict.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> cnt(strict.size());
  for (std::size_t i = 0; i < strict.size(); ++i) cnt[i] = strict.row_count(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cnt[a] < cnt[b]; });
  return order;
}

bool rows_intersect(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  for (std::size_t w = 0; w < a.size(); ++w)
    if ((a[w] & b[w]) != 0) return true;
  return false;
}

void relax_row(std::size_t i, const BitMatrix& strict, const BitMatrix& cover, LengthTable& out) {
  out.at(i, i) = 0;
  for (std::size_t k : cover.row_indices(i)) {
    // path j -> ... -> k -> i
    const auto via = [&](std::size_t j) {
      const std::uint32_t base = out.at(k, j);
      if (base == LengthTable::kNone) return;
      auto& cell = out.at(i, j);
      if (cell == LengthTable::kNone || cell < base + 1) cell = base + 1;
    };
    via(k);
    for (std::size_t j : strict.row_indices(k)) via(j);
  }
}

}  // namespace

namespace serial {

void transitive_closure(BitMatrix& m) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto rk = m.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      if (!m.get(i, k)) continue;
      auto ri = m.row(i);
      for (std::size_t w = 0; w < ri.size(); ++w) ri[w] |= rk[w];
    }
  }
}

BitMatrix covering(const BitMatrix& strict) {
  const std::size_t n = strict.size();
  const BitMatrix cols = strict.transposed();
  BitMatrix cover(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : strict.row_indices(i))
      if (!rows_intersect(strict.row(i), cols.row(j))) cover.set(i, j);
  return cover;
}

LengthTable longest_paths(const BitMatrix& strict, const BitMatrix& cover) {
  LengthTable out(strict.size());
  for (std::size_t i : topological_rows(strict)) relax_row(i, strict, cover, out);
  return out;
}

}  // namespace serial

namespace parallel {

void transitive_closure(BitMatrix& m) {
  const auto n = static_cast<std::ptrdiff_t>(m.size());
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    // Row k stays read-only during its own pivot step; OR-ing it into
    // itself is a no-op, so i == k is skipped.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (i == k || !m.get(static_cast<std::size_t>(i), static_cast<std::size_t>(k))) continue;
      auto ri = m.row(static_cast<std::size_t>(i));
      const auto rk = m.row(static_cast<std::size_t>(k));
      for (std::size_t w = 0; w < ri.size(); ++w) ri[w] |= rk[w];
    }
  }
}

BitMatrix covering(const BitMatrix& strict) {
  const auto n = static_cast<std::ptrdiff_t>(strict.size());
  const BitMatrix cols = strict.transposed();
  BitMatrix cover(strict.size());
  // Each thread writes only its own row of `cover`; rows are word-aligned.
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    for (std::size_t j : strict.row_indices(iu))
      if (!rows_intersect(strict.row(iu), cols.row(j))) cover.set(iu, j);
  }
  return cover;
}

LengthTable longest_paths(const BitMatrix& strict, const BitMatrix& cover) {
  const std::size_t n = strict.size();
  // Rows sharing a height only read rows of smaller height.
  std::vector<std::size_t> height(n, 0);
  std::size_t max_height = 0;
  for (std::size_t i : topological_rows(strict)) {
    for (std::size_t k : cover.row_indices(i)) height[i] = std::max(height[i], height[k] + 1);
    max_height = std::max(max_height, height[i]);
  }
  std::vector<std::vector<std::size_t>> layers(n == 0 ? 0 : max_height + 1);
  for (std::size_t i = 0; i < n; ++i) layers[height[i]].push_back(i);

  LengthTable out(n);
  for (const auto& layer : layers) {
    const auto m = static_cast<std::ptrdiff_t>(layer.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t t = 0; t < m; ++t)
      relax_row(layer[static_cast<std::size_t>(t)], strict, cover, out);
  }
  return out;
}

}  // namespace parallel

namespace {
bool use_parallel(std::size_t n) {
#ifdef _OPENMP
  return n >= kParallelThreshold && omp_get_max_threads() > 1;
#else
  (void)n;
  return false;
#endif
}
}  // namespace

void transitive_closure(BitMatrix& m) {
  if (use_parallel(m.size())) parallel::transitive_closure(m);
  else serial::transitive_closure(m);
}

BitMatrix covering(const BitMatrix& strict) {
  return use_parallel(strict.size()) ? parallel::covering(strict)
                                             : serial::covering(strict);
}

LengthTable longest_paths(const BitMatrix& strict, const BitMatrix& cover) {
  return use_parallel(strict.size()) ? parallel::longest_paths(strict, cover)
                                             : serial::longest_paths(strict, cover);
}

}  // namespace kernels
}  // namespace tafkit
