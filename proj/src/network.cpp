#include "bcnq/network.hpp"

namespace bcnq {

CanonicalVector encode(const std::vector<bool>& bits) {
  LogicalMatrix acc = LogicalMatrix::identity(1);
  for (bool b : bits) acc = stp(acc, LogicalMatrix::from_vector(CanonicalVector(2, b ? 1 : 2)));
  return CanonicalVector(acc.rows(), acc.index(1));
}

std::vector<bool> decode(const CanonicalVector& v, std::size_t n_vars) {
  if (n_vars >= 8 * sizeof(std::size_t) || v.dim() != (std::size_t{1} << n_vars))
    throw DimensionError("decode: vector of length " + std::to_string(v.dim()) +
                         " does not encode " + std::to_string(n_vars) + " variables");
  std::vector<bool> bits(n_vars);
  std::size_t rest = v.index() - 1;
  for (std::size_t k = n_vars; k-- > 0;) {
    bits[k] = (rest & 1U) == 0;
    rest >>= 1;
  }
  return bits;
}

Bcn::Bcn(std::size_t n_states, std::size_t n_inputs, LogicalMatrix f)
    : n_states_(n_states), n_inputs_(n_inputs), f_(std::move(f)) {
  if (n_states_ == 0 || n_inputs_ == 0)
    throw DimensionError("network needs at least one state and one input");
  if (f_.rows() != n_states_ || f_.cols() != n_states_ * n_inputs_)
    throw DimensionError("transition matrix is " + std::to_string(f_.rows()) + "x" +
                         std::to_string(f_.cols()) + ", expected " +
                         std::to_string(n_states_) + "x" +
                         std::to_string(n_states_ * n_inputs_));
}

Bcn::Bcn(std::size_t n_states, std::size_t n_inputs, std::vector<std::size_t> columns)
    : Bcn(n_states, n_inputs, LogicalMatrix(n_states, std::move(columns))) {}

void Bcn::check(std::size_t x, std::size_t u) const {
  if (x == 0 || x > n_states_)
    throw DimensionError("state " + std::to_string(x) + " outside [1, " +
                         std::to_string(n_states_) + "]");
  if (u == 0 || u > n_inputs_)
    throw DimensionError("input " + std::to_string(u) + " outside [1, " +
                         std::to_string(n_inputs_) + "]");
}

LogicalMatrix Bcn::input_block(std::size_t k) const {
  check(1, k);
  return f_.columns((k - 1) * n_states_ + 1, n_states_);
}

std::vector<std::size_t> Bcn::trajectory(std::size_t x0,
                                         std::span<const std::size_t> inputs) const {
  check(x0, 1);
  std::vector<std::size_t> xs{x0};
  xs.reserve(inputs.size() + 1);
  for (auto u : inputs) xs.push_back(step(xs.back(), u));
  return xs;
}

Bcn from_truth_table(const TruthTable& tt) {
  if (tt.n == 0) throw ParseError("truth table needs at least one state variable");
  if (tt.n + tt.m >= 8 * sizeof(std::size_t) - 1)
    throw ParseError("truth table too large");
  const std::size_t expected = std::size_t{1} << (tt.n + tt.m);
  if (tt.rows.size() != expected)
    throw ParseError("truth table has " + std::to_string(tt.rows.size()) +
                     " rows, expected 2^" + std::to_string(tt.n + tt.m) + " = " +
                     std::to_string(expected));
  std::vector<std::size_t> columns;
  columns.reserve(expected);
  for (std::size_t r = 0; r < expected; ++r) {
    const auto& row = tt.rows[r];
    if (row.size() != tt.n)
      throw ParseError("truth table row " + std::to_string(r + 1) + " has " +
                       std::to_string(row.size()) + " outputs, expected " +
                       std::to_string(tt.n));
    columns.push_back(encode(row).index());
  }
  return Bcn(std::size_t{1} << tt.n, std::size_t{1} << tt.m, std::move(columns));
}

} // namespace bcnq
