#include "bcnq/refinement.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace bcnq {

RefinementResult refine(const Bcn& bcn, const Partition& seed, bool record_iterates) {
  if (seed.n() != bcn.n_states())
    throw DimensionError("seed partition over " + std::to_string(seed.n()) +
                         " states, network has " + std::to_string(bcn.n_states()));
  std::vector<LogicalMatrix> blocks;
  for (std::size_t k = 1; k <= bcn.n_inputs(); ++k) blocks.push_back(bcn.input_block(k));

  RefinementTrace trace;
  BooleanMatrix current = relation_matrix(seed);
  if (record_iterates) trace.iterates.push_back(current);
  for (std::size_t k = 1;; ++k) {
    BooleanMatrix next = current;
    for (const auto& f : blocks) next = meet(next, pull_back(current, f));
    if (record_iterates) trace.iterates.push_back(next);
    if (next == current) {
      trace.k_star = k;
      break;
    }
    current = std::move(next);
  }

  Partition result;
  try {
    result = partition_of(current);
  } catch (const DimensionError&) {
    throw std::logic_error("refinement fixed point is not an equivalence relation");
  }
  return {std::move(result), std::move(trace)};
}

Relation relation_of(const Partition& p) {
  Relation r;
  for (const auto& block : p.blocks())
    for (auto a : block)
      for (auto b : block) r.emplace(a, b);
  return r;
}

Relation successor_relation(const Bcn& bcn, std::size_t u) {
  Relation r;
  for (std::size_t a = 1; a <= bcn.n_states(); ++a) r.emplace(a, bcn.step(a, u));
  return r;
}

Relation inverse(const Relation& r) {
  Relation out;
  for (const auto& [a, b] : r) out.emplace(b, a);
  return out;
}

Relation compose(const Relation& second, const Relation& first) {
  std::map<std::size_t, std::vector<std::size_t>> next;
  for (const auto& [b, c] : second) next[b].push_back(c);
  Relation out;
  for (const auto& [a, b] : first) {
    auto it = next.find(b);
    if (it == next.end()) continue;
    for (auto c : it->second) out.emplace(a, c);
  }
  return out;
}

Relation intersect(const Relation& a, const Relation& b) {
  Relation out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

Partition refine_relational(const Bcn& bcn, const Partition& seed) {
  if (seed.n() != bcn.n_states())
    throw DimensionError("seed partition over " + std::to_string(seed.n()) +
                         " states, network has " + std::to_string(bcn.n_states()));
  std::vector<Relation> succ;
  std::vector<Relation> pred;
  for (std::size_t u = 1; u <= bcn.n_inputs(); ++u) {
    succ.push_back(successor_relation(bcn, u));
    pred.push_back(inverse(succ.back()));
  }
  Relation current = relation_of(seed);
  for (;;) {
    Relation next = current;
    for (std::size_t u = 0; u < succ.size(); ++u)
      next = intersect(next, compose(pred[u], compose(current, succ[u])));
    if (next == current) break;
    current = std::move(next);
  }
  std::vector<std::vector<std::size_t>> rows(seed.n());
  for (const auto& [a, b] : current) rows[a - 1].push_back(b);
  std::vector<std::size_t> labels(seed.n());
  for (std::size_t a = 0; a < seed.n(); ++a) labels[a] = rows[a].front();
  Partition result = Partition::from_class_vector(labels);
  if (relation_of(result) != current)
    throw std::logic_error("relational fixed point is not an equivalence relation");
  return result;
}

namespace {

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

private:
  std::vector<std::size_t> parent_;
};

// Smallest congruence containing `base` and the pair (a, b); true when it
// relates two states from different seed blocks.
bool closure_escapes(const Bcn& bcn, const Partition& seed, const Partition& base,
                     std::size_t a, std::size_t b) {
  const std::size_t n = bcn.n_states();
  UnionFind uf(n);
  for (const auto& block : base.blocks())
    for (auto x : block) uf.unite(block.front() - 1, x - 1);
  uf.unite(a - 1, b - 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t u = 1; u <= bcn.n_inputs(); ++u) {
      std::vector<std::size_t> image(n, n);
      for (std::size_t x = 1; x <= n; ++x) {
        const std::size_t root = uf.find(x - 1);
        const std::size_t y = bcn.step(x, u) - 1;
        if (image[root] == n)
          image[root] = y;
        else
          changed |= uf.unite(image[root], y);
      }
    }
    for (std::size_t x = 1; x <= n; ++x)
      if (!seed.same_block(x, uf.find(x - 1) + 1)) return true;
  }
  return false;
}

} // namespace

bool maximality_oracle(const Bcn& bcn, const Partition& seed, const Partition& result) {
  if (seed.n() != bcn.n_states() || result.n() != bcn.n_states())
    throw std::invalid_argument("maximality_oracle: partitions do not match the network");
  if (!refines(result, seed))
    throw std::invalid_argument("maximality_oracle: result does not refine the seed");
  if (!is_congruence(bcn, result))
    throw std::invalid_argument("maximality_oracle: result is not a congruence");
  // The closure of result + (a, b) only depends on the result blocks of a
  // and b, so one representative pair per block pair suffices.
  for (std::size_t i = 1; i <= result.size(); ++i)
    for (std::size_t j = i + 1; j <= result.size(); ++j) {
      const std::size_t a = result.block(i).front();
      const std::size_t b = result.block(j).front();
      if (!seed.same_block(a, b)) continue;
      if (!closure_escapes(bcn, seed, result, a, b)) return false;
    }
  return true;
}

} // namespace bcnq
