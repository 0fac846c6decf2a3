#pragma once

// Bit-matrix kernels shared by the graph and algebra layers.
//
// Every kernel exists twice: a plain serial version (the reference, used
// by the tests as an oracle) and an OpenMP version with the same
// signature and bit-identical output. The unqualified entry points pick
// the parallel path once the matrix is large enough to amortize the
// thread team.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace tafkit {

class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n)
      : n_(n), words_((n + 63) / 64), data_(n * words_, 0) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t words_per_row() const noexcept { return words_; }

  bool get(std::size_t i, std::size_t j) const noexcept {
    return (data_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }
  void set(std::size_t i, std::size_t j, bool v = true) noexcept {
    auto& w = data_[i * words_ + j / 64];
    const std::uint64_t bit = std::uint64_t{1} << (j % 64);
    w = v ? (w | bit) : (w & ~bit);
  }

  std::span<std::uint64_t> row(std::size_t i) noexcept {
    return {data_.data() + i * words_, words_};
  }
  std::span<const std::uint64_t> row(std::size_t i) const noexcept {
    return {data_.data() + i * words_, words_};
  }

  std::size_t row_count(std::size_t i) const noexcept;
  std::size_t count() const noexcept;
  BitMatrix transposed() const;

  // Indices of set bits in row i, ascending.
  std::vector<std::size_t> row_indices(std::size_t i) const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

// Dense table of nonnegative path lengths; kNone marks absent pairs.
class LengthTable {
 public:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  LengthTable() = default;
  explicit LengthTable(std::size_t n) : n_(n), data_(n * n, kNone) {}

  std::size_t size() const noexcept { return n_; }
  std::uint32_t at(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  std::uint32_t& at(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }

  friend bool operator==(const LengthTable&, const LengthTable&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> data_;
};

namespace kernels {

// A relation matrix R is read as "R(i, j) set means j -> i", matching the
// (range, source) convention of matrix units e_ij. Inputs to covering and
// longest_paths must be strict (irreflexive) and transitively closed.

namespace serial {
void transitive_closure(BitMatrix& m);
BitMatrix covering(const BitMatrix& strict);
LengthTable longest_paths(const BitMatrix& strict, const BitMatrix& cover);
}  // namespace serial

namespace parallel {
void transitive_closure(BitMatrix& m);
BitMatrix covering(const BitMatrix& strict);
LengthTable longest_paths(const BitMatrix& strict, const BitMatrix& cover);
}  // namespace parallel

// Below this dimension, or with a single thread, the serial kernels win.
inline constexpr std::size_t kParallelThreshold = 96;

void transitive_closure(BitMatrix& m);
BitMatrix covering(const BitMatrix& strict);
LengthTable longest_paths(const BitMatrix& strict, const BitMatrix& cover);

}  // namespace kernels
}  // namespace tafkit
