#include "bcnq/quotient.hpp"

#include <stdexcept>

namespace bcnq {

BooleanMatrix quotient_block_product(const ClassMatrix& c, const LogicalMatrix& f_k) {
  const BooleanMatrix cm = BooleanMatrix::from_logical(c.c);
  return bool_product(bool_product(cm, BooleanMatrix::from_logical(f_k)), cm.transpose());
}

QuotientSystem build_quotient(const Bcn& bcn, const Partition& p, ClassOrder order) {
  if (auto check = is_congruence(bcn, p); !check) throw CongruenceViolation(*check.witness);

  ClassMatrix c = class_matrix(p, order);
  const std::size_t nq = c.n_classes();
  std::vector<std::size_t> rep(nq + 1, 0);
  for (std::size_t x = bcn.n_states(); x >= 1; --x) rep[c.class_of(x)] = x;

  std::vector<std::size_t> columns;
  columns.reserve(nq * bcn.n_inputs());
  for (std::size_t u = 1; u <= bcn.n_inputs(); ++u) {
    const std::size_t first = columns.size();
    for (std::size_t q = 1; q <= nq; ++q) columns.push_back(c.class_of(bcn.step(rep[q], u)));
    const LogicalMatrix direct(nq, {columns.begin() + static_cast<std::ptrdiff_t>(first),
                                    columns.end()});
    const auto product = quotient_block_product(c, bcn.input_block(u)).to_logical();
    if (!product || *product != direct)
      throw std::logic_error("quotient block " + std::to_string(u) +
                             " disagrees with C (.) F_k (.) C^T");
  }
  return QuotientSystem{std::move(c), Bcn(nq, bcn.n_inputs(), std::move(columns))};
}

bool verify_correspondence(const Bcn& bcn, const QuotientSystem& q) {
  const auto& c = q.c;
  const auto& r = q.reduced;
  if (c.n_states() != bcn.n_states() || c.n_classes() != r.n_states() ||
      r.n_inputs() != bcn.n_inputs())
    return false;
  const std::size_t nq = r.n_states();
  // witnessed[u][q] records that some original transition realizes the
  // quotient transition (q, u, r.step(q, u)).
  std::vector<std::vector<bool>> witnessed(bcn.n_inputs() + 1, std::vector<bool>(nq + 1, false));
  for (std::size_t u = 1; u <= bcn.n_inputs(); ++u)
    for (std::size_t a = 1; a <= bcn.n_states(); ++a) {
      const std::size_t from = c.class_of(a);
      const std::size_t to = c.class_of(bcn.step(a, u));
      if (r.step(from, u) != to) return false;
      witnessed[u][from] = true;
    }
  for (std::size_t u = 1; u <= bcn.n_inputs(); ++u)
    for (std::size_t s = 1; s <= nq; ++s)
      if (!witnessed[u][s]) return false;
  return true;
}

} // namespace bcnq
