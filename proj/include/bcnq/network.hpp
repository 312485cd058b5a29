#ifndef BCNQ_NETWORK_HPP
#define BCNQ_NETWORK_HPP

#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "bcnq/algebra.hpp"

namespace bcnq {

/// Boolean value -> delta_2^1 (true) or delta_2^2 (false), combined by
/// iterated semitensor product.
CanonicalVector encode(const std::vector<bool>& bits);
std::vector<bool> decode(const CanonicalVector& v, std::size_t n_vars);

/// Truth table of a Boolean control network with n state and m input
/// variables. Row r lists f_1..f_n for the r-th combination of (u, x), with
/// every variable enumerated 1 before 0 and input bits most significant.
struct TruthTable {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::vector<bool>> rows;
};

/// Algebraic network x(t+1) = F u(t) x(t), F in L^{N x NM}. Column block k of
/// width N is F_k. N and M need not be powers of two.
class Bcn {
public:
  Bcn(std::size_t n_states, std::size_t n_inputs, LogicalMatrix f);
  Bcn(std::size_t n_states, std::size_t n_inputs, std::vector<std::size_t> columns);

  std::size_t n_states() const noexcept { return n_states_; }
  std::size_t n_inputs() const noexcept { return n_inputs_; }
  const LogicalMatrix& matrix() const noexcept { return f_; }

  /// Successor of state x under input u (both 1-based).
  std::size_t step(std::size_t x, std::size_t u) const {
    check(x, u);
    return f_.index((u - 1) * n_states_ + x);
  }

  /// F_k = F delta_M^k.
  LogicalMatrix input_block(std::size_t k) const;

  std::vector<std::size_t> trajectory(std::size_t x0, std::span<const std::size_t> inputs) const;

  friend bool operator==(const Bcn&, const Bcn&) = default;

private:
  void check(std::size_t x, std::size_t u) const;

  std::size_t n_states_;
  std::size_t n_inputs_;
  LogicalMatrix f_;
};

Bcn from_truth_table(const TruthTable& tt);

/// Target set of 1-based states.
using StateSet = std::set<std::size_t>;

} // namespace bcnq

#endif
