#include "bcnq/algebra.hpp"

#include <bit>

namespace bcnq {

CanonicalVector::CanonicalVector(std::size_t dim, std::size_t index)
    : dim_(dim), index_(index) {
  if (dim == 0 || index == 0 || index > dim)
    throw DimensionError("canonical vector index " + std::to_string(index) +
                         " outside [1, " + std::to_string(dim) + "]");
}

LogicalMatrix::LogicalMatrix(std::size_t rows, std::vector<std::size_t> indices)
    : rows_(rows), indices_(std::move(indices)) {
  for (std::size_t j = 0; j < indices_.size(); ++j)
    if (indices_[j] == 0 || indices_[j] > rows_)
      throw DimensionError("logical matrix column " + std::to_string(j + 1) +
                           " has index " + std::to_string(indices_[j]) +
                           " outside [1, " + std::to_string(rows_) + "]");
}

LogicalMatrix LogicalMatrix::identity(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{1});
  return LogicalMatrix(n, std::move(idx));
}

LogicalMatrix LogicalMatrix::from_vector(const CanonicalVector& v) {
  return LogicalMatrix(v.dim(), {v.index()});
}

LogicalMatrix LogicalMatrix::columns(std::size_t first, std::size_t width) const {
  if (first == 0 || first - 1 + width > cols())
    throw DimensionError("column range out of bounds");
  return LogicalMatrix(rows_, std::vector<std::size_t>(indices_.begin() + (first - 1),
                                                       indices_.begin() + (first - 1 + width)));
}

CanonicalVector LogicalMatrix::apply(const CanonicalVector& v) const {
  if (v.dim() != cols())
    throw DimensionError("cannot apply " + std::to_string(rows_) + "x" +
                         std::to_string(cols()) + " matrix to vector of length " +
                         std::to_string(v.dim()));
  return CanonicalVector(rows_, indices_[v.index() - 1]);
}

LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b) {
  // A is k x r, B is p x s, l = lcm(r, p). Column (j, t) of B kron I_{l/p} is
  // delta_l^{(b_j - 1) l/p + t}; splitting that row as (i, t') against
  // A kron I_{l/r} selects delta^{(a_i - 1) l/r + t'}.
  const std::size_t r = a.cols();
  const std::size_t p = b.rows();
  const std::size_t l = std::lcm(r, p);
  const std::size_t ea = l / r;
  const std::size_t eb = l / p;
  std::vector<std::size_t> out;
  out.reserve(b.cols() * eb);
  for (std::size_t j = 1; j <= b.cols(); ++j)
    for (std::size_t t = 0; t < eb; ++t) {
      const std::size_t row = (b.index(j) - 1) * eb + t; // 0-based in [0, l)
      const std::size_t i = row / ea + 1;
      const std::size_t tp = row % ea;
      out.push_back((a.index(i) - 1) * ea + tp + 1);
    }
  return LogicalMatrix(a.rows() * ea, std::move(out));
}

LogicalMatrix kron(const LogicalMatrix& a, const LogicalMatrix& b) {
  std::vector<std::size_t> out;
  out.reserve(a.cols() * b.cols());
  for (std::size_t j = 1; j <= a.cols(); ++j)
    for (std::size_t q = 1; q <= b.cols(); ++q)
      out.push_back((a.index(j) - 1) * b.rows() + b.index(q));
  return LogicalMatrix(a.rows() * b.rows(), std::move(out));
}

// ---------------------------------------------------------------------------

BooleanMatrix::BooleanMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_((cols + word_bits - 1) / word_bits),
      bits_(rows * stride_, 0) {}

BooleanMatrix BooleanMatrix::identity(std::size_t n) {
  BooleanMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BooleanMatrix BooleanMatrix::ones(std::size_t rows, std::size_t cols) {
  BooleanMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j);
  return m;
}

BooleanMatrix BooleanMatrix::from_logical(const LogicalMatrix& m) {
  BooleanMatrix b(m.rows(), m.cols());
  for (std::size_t j = 1; j <= m.cols(); ++j) b.set(m.index(j) - 1, j - 1);
  return b;
}

void BooleanMatrix::set(std::size_t i, std::size_t j, bool value) {
  Word& w = bits_[i * stride_ + j / word_bits];
  const Word mask = Word{1} << (j % word_bits);
  w = value ? (w | mask) : (w & ~mask);
}

std::size_t BooleanMatrix::count() const {
  std::size_t n = 0;
  for (Word w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BooleanMatrix::is_logical() const { return to_logical().has_value(); }

std::optional<LogicalMatrix> BooleanMatrix::to_logical() const {
  if (rows_ == 0) return std::nullopt;
  std::vector<std::size_t> idx(cols_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t w = 0; w < stride_; ++w) {
      Word bits = bits_[i * stride_ + w];
      while (bits != 0) {
        const std::size_t j = w * word_bits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (idx[j] != 0) return std::nullopt;
        idx[j] = i + 1;
      }
    }
  for (auto i : idx)
    if (i == 0) return std::nullopt;
  return LogicalMatrix(rows_, std::move(idx));
}

BooleanMatrix BooleanMatrix::transpose() const {
  BooleanMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t w = 0; w < stride_; ++w) {
      Word bits = bits_[i * stride_ + w];
      while (bits != 0) {
        const std::size_t j = w * word_bits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        t.set(j, i);
      }
    }
  return t;
}

bool BooleanMatrix::subset_of(const BooleanMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DimensionError("subset_of: shape mismatch");
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if ((bits_[k] & ~other.bits_[k]) != 0) return false;
  return true;
}

BooleanMatrix bool_product(const BooleanMatrix& c, const BooleanMatrix& d) {
  if (c.cols() != d.rows())
    throw DimensionError("bool_product: inner dimensions " + std::to_string(c.cols()) +
                         " and " + std::to_string(d.rows()) + " differ");
  BooleanMatrix out(c.rows(), d.cols());
  const std::size_t stride = c.words_per_row();
  for (std::size_t i = 0; i < c.rows(); ++i) {
    auto dst = out.row(i);
    auto src = c.row(i);
    for (std::size_t w = 0; w < stride; ++w) {
      BooleanMatrix::Word bits = src[w];
      while (bits != 0) {
        const std::size_t s =
            w * BooleanMatrix::word_bits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        auto add = d.row(s);
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] |= add[k];
      }
    }
  }
  return out;
}

BooleanMatrix meet(const BooleanMatrix& a, const BooleanMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("meet: shape mismatch");
  BooleanMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    auto src = b.row(i);
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] &= src[k];
  }
  return out;
}

BooleanMatrix pull_back(const BooleanMatrix& a, const LogicalMatrix& f) {
  const std::size_t n = a.rows();
  if (a.cols() != n || f.rows() != n || f.cols() != n)
    throw DimensionError("pull_back: expected square matrices of equal order");
  BooleanMatrix out(n, n);
  // Rows with the same image are identical; build each distinct one once.
  std::vector<std::size_t> built(n, n); // image row -> first output row holding it
  const auto idx = f.indices();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = idx[i] - 1;
    auto dst = out.row(i);
    if (built[src] != n) {
      auto done = out.row(built[src]);
      std::copy(done.begin(), done.end(), dst.begin());
      continue;
    }
    for (std::size_t w = 0; w < dst.size(); ++w) {
      BooleanMatrix::Word word = 0;
      const std::size_t end = std::min(n, (w + 1) * BooleanMatrix::word_bits);
      for (std::size_t j = w * BooleanMatrix::word_bits; j < end; ++j)
        word |= static_cast<BooleanMatrix::Word>(a.test(src, idx[j] - 1))
                << (j % BooleanMatrix::word_bits);
      dst[w] = word;
    }
    built[src] = i;
  }
  return out;
}

RationalMatrix pseudoinverse(const LogicalMatrix& c) {
  // C C^T is diagonal with the class sizes, so C^+ = C^T diag(1/size).
  std::vector<std::size_t> size(c.rows(), 0);
  for (auto i : c.indices()) ++size[i - 1];
  for (std::size_t i = 0; i < size.size(); ++i)
    if (size[i] == 0)
      throw DimensionError("pseudoinverse: row " + std::to_string(i + 1) +
                           " is empty, matrix is not of full row rank");
  RationalMatrix p(c.cols(), c.rows());
  for (std::size_t j = 1; j <= c.cols(); ++j)
    p(j - 1, c.index(j) - 1) = Rational(1, static_cast<long long>(size[c.index(j) - 1]));
  return p;
}

} // namespace bcnq
