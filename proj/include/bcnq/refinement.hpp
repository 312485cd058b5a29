#ifndef BCNQ_REFINEMENT_HPP
#define BCNQ_REFINEMENT_HPP

// Largest congruence contained in a seed equivalence S.
//
// refine() runs the matrix iteration
//   A_1 = A_S,  A_{k+1} = A_k ^ (F_1^T (.) A_k (.) F_1) ^ ... ^ (F_M^T (.) A_k (.) F_M)
// to its fixed point. refine_relational() runs the same recursion on explicit
// pair sets, R_{k+1} = (cap_u S_u^{-1} o R_k o S_u) cap R_k, and serves as an
// independent route to the same answer.

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "bcnq/algebra.hpp"
#include "bcnq/network.hpp"
#include "bcnq/partition.hpp"

namespace bcnq {

struct RefinementTrace {
  /// A_1, ..., A_{k*+1}; the last two are equal. Empty when iterates were
  /// not recorded.
  std::vector<BooleanMatrix> iterates;
  /// First k with A_{k+1} = A_k.
  std::size_t k_star = 0;
};

struct RefinementResult {
  Partition partition;
  RefinementTrace trace;
};

RefinementResult refine(const Bcn& bcn, const Partition& seed, bool record_iterates = true);

/// Binary relation on 1-based states as an explicit set of pairs.
using Relation = std::set<std::pair<std::size_t, std::size_t>>;

Relation relation_of(const Partition& p);
/// S_u = {(a, step(a, u))}.
Relation successor_relation(const Bcn& bcn, std::size_t u);
Relation inverse(const Relation& r);
/// second o first = {(a, c) : (a, b) in first and (b, c) in second}.
Relation compose(const Relation& second, const Relation& first);
Relation intersect(const Relation& a, const Relation& b);

Partition refine_relational(const Bcn& bcn, const Partition& seed);

/// True iff no relation strictly coarser than `result` stays inside `seed`
/// and satisfies the congruence condition. Throws std::invalid_argument when
/// `result` does not refine `seed` or is not a congruence.
bool maximality_oracle(const Bcn& bcn, const Partition& seed, const Partition& result);

} // namespace bcnq

#endif
