#ifndef BCNQ_ALGEBRA_HPP
#define BCNQ_ALGEBRA_HPP

// Exact matrix algebra over canonical vectors, logical matrices, 0/1
// matrices and rational matrices.
//
// Index conventions: canonical vectors and logical matrices use 1-based
// indices (delta_k^i has index i in [1,k]); dense element access through
// operator() and BooleanMatrix::test is 0-based.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bcnq/error.hpp"

namespace bcnq {

using Rational = boost::multiprecision::cpp_rational;

/// delta_dim^index.
class CanonicalVector {
public:
  CanonicalVector(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t index() const noexcept { return index_; }

  friend bool operator==(const CanonicalVector&, const CanonicalVector&) = default;

private:
  std::size_t dim_;
  std::size_t index_;
};

/// Row-major dense matrix. Used for the general semitensor product and for
/// rational cost vectors.
template <typename T>
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = DenseMatrix<std::int64_t>;
using RationalMatrix = DenseMatrix<Rational>;

template <typename T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols() != b.rows())
    throw DimensionError("multiply: inner dimensions " + std::to_string(a.cols()) +
                         " and " + std::to_string(b.rows()) + " differ");
  DenseMatrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t s = 0; s < a.cols(); ++s) {
      if (a(i, s) == T(0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, s) * b(s, j);
    }
  return c;
}

template <typename T>
DenseMatrix<T> kron(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  DenseMatrix<T> c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == T(0)) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          c(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    }
  return c;
}

/// Left semitensor product (A kron I_{l/m1})(B kron I_{l/n2}), l = lcm(m1, n2).
template <typename T>
DenseMatrix<T> stp(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  const std::size_t l = std::lcm(a.cols(), b.rows());
  return multiply(kron(a, DenseMatrix<T>::identity(l / a.cols())),
                  kron(b, DenseMatrix<T>::identity(l / b.rows())));
}

/// Matrix whose columns are canonical vectors, stored as one row index per
/// column.
class LogicalMatrix {
public:
  LogicalMatrix() = default;
  /// `indices[j]` is the 1-based row of the single 1 in column j+1.
  LogicalMatrix(std::size_t rows, std::vector<std::size_t> indices);

  static LogicalMatrix identity(std::size_t n);
  static LogicalMatrix from_vector(const CanonicalVector& v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return indices_.size(); }

  /// Row index of the 1 in column `col` (both 1-based).
  std::size_t index(std::size_t col) const { return indices_[col - 1]; }
  std::span<const std::size_t> indices() const noexcept { return indices_; }

  /// Columns [first, first + width), 1-based.
  LogicalMatrix columns(std::size_t first, std::size_t width) const;

  /// Product with a canonical vector picks a column.
  CanonicalVector apply(const CanonicalVector& v) const;

  template <typename T>
  DenseMatrix<T> to_dense() const {
    DenseMatrix<T> d(rows_, cols());
    for (std::size_t j = 0; j < cols(); ++j) d(indices_[j] - 1, j) = T(1);
    return d;
  }

  /// std::nullopt unless every column of `d` holds exactly one 1 and zeros
  /// elsewhere.
  template <typename T>
  static std::optional<LogicalMatrix> from_dense(const DenseMatrix<T>& d) {
    std::vector<std::size_t> idx(d.cols(), 0);
    for (std::size_t j = 0; j < d.cols(); ++j)
      for (std::size_t i = 0; i < d.rows(); ++i) {
        if (d(i, j) == T(0)) continue;
        if (d(i, j) != T(1) || idx[j] != 0) return std::nullopt;
        idx[j] = i + 1;
      }
    for (auto i : idx)
      if (i == 0) return std::nullopt;
    return LogicalMatrix(d.rows(), std::move(idx));
  }

  friend bool operator==(const LogicalMatrix&, const LogicalMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::vector<std::size_t> indices_;
};

LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b);
LogicalMatrix kron(const LogicalMatrix& a, const LogicalMatrix& b);

/// Dense 0/1 matrix with bit-packed rows.
class BooleanMatrix {
public:
  using Word = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  BooleanMatrix() = default;
  BooleanMatrix(std::size_t rows, std::size_t cols);

  static BooleanMatrix identity(std::size_t n);
  static BooleanMatrix ones(std::size_t rows, std::size_t cols);
  static BooleanMatrix from_logical(const LogicalMatrix& m);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return stride_; }

  bool test(std::size_t i, std::size_t j) const {
    return (bits_[i * stride_ + j / word_bits] >> (j % word_bits)) & 1U;
  }
  void set(std::size_t i, std::size_t j, bool value = true);

  std::span<const Word> row(std::size_t i) const {
    return {bits_.data() + i * stride_, stride_};
  }
  std::span<Word> row(std::size_t i) { return {bits_.data() + i * stride_, stride_}; }

  std::size_t count() const;
  bool is_logical() const;
  std::optional<LogicalMatrix> to_logical() const;
  BooleanMatrix transpose() const;

  /// Entrywise A <= B.
  bool subset_of(const BooleanMatrix& other) const;

  friend bool operator==(const BooleanMatrix&, const BooleanMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> bits_;
};

/// (C (.) D)_ij = OR_s C_is AND D_sj.
BooleanMatrix bool_product(const BooleanMatrix& c, const BooleanMatrix& d);

/// Entrywise AND.
BooleanMatrix meet(const BooleanMatrix& a, const BooleanMatrix& b);

/// F^T (.) A (.) F for a square logical F, computed as the gather
/// entry (i,j) = A[f(i), f(j)].
BooleanMatrix pull_back(const BooleanMatrix& a, const LogicalMatrix& f);

/// C^T (C C^T)^{-1} for a full-row-rank logical C. Throws DimensionError when
/// some row of C is empty.
RationalMatrix pseudoinverse(const LogicalMatrix& c);

} // namespace bcnq

#endif
