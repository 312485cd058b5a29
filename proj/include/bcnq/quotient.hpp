#ifndef BCNQ_QUOTIENT_HPP
#define BCNQ_QUOTIENT_HPP

#include "bcnq/network.hpp"
#include "bcnq/partition.hpp"

namespace bcnq {

/// Reduced system on the classes of a congruence: F~_k = C (.) F_k (.) C^T.
struct QuotientSystem {
  ClassMatrix c;
  Bcn reduced;
};

/// Throws CongruenceViolation (with witness) unless `p` is a congruence for
/// `bcn`. The blocks F~_k are obtained by mapping representatives through C
/// and cross-checked against the Boolean-product formula; a mismatch is a
/// std::logic_error.
QuotientSystem build_quotient(const Bcn& bcn, const Partition& p,
                              ClassOrder order = ClassOrder::first_occurrence);

/// C (.) F_k (.) C^T evaluated with Boolean products.
BooleanMatrix quotient_block_product(const ClassMatrix& c, const LogicalMatrix& f_k);

/// Both directions of the transition correspondence between `bcn` and `q`:
/// every original transition maps to a quotient transition, and every
/// quotient transition is the image of some original one.
bool verify_correspondence(const Bcn& bcn, const QuotientSystem& q);

} // namespace bcnq

#endif
