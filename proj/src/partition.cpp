#include "bcnq/partition.hpp"

#include <algorithm>
#include <map>

namespace bcnq {

Partition::Partition(std::size_t n, std::vector<std::vector<std::size_t>> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  std::vector<bool> seen(n, false);
  std::size_t covered = 0;
  for (auto& b : blocks_) {
    if (b.empty()) throw DimensionError("partition has an empty block");
    std::sort(b.begin(), b.end());
    for (auto x : b) {
      if (x == 0 || x > n)
        throw DimensionError("state " + std::to_string(x) + " outside [1, " +
                             std::to_string(n) + "]");
      if (seen[x - 1])
        throw DimensionError("state " + std::to_string(x) + " appears in two blocks");
      seen[x - 1] = true;
      ++covered;
    }
  }
  if (covered != n)
    throw DimensionError("partition covers " + std::to_string(covered) + " of " +
                         std::to_string(n) + " states");
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  index_blocks();
}

void Partition::index_blocks() {
  block_of_.assign(n_, 0);
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (auto x : blocks_[b]) block_of_[x - 1] = b + 1;
}

Partition Partition::identity(std::size_t n) {
  std::vector<std::vector<std::size_t>> blocks(n);
  for (std::size_t x = 1; x <= n; ++x) blocks[x - 1] = {x};
  return Partition(n, std::move(blocks));
}

Partition Partition::single_block(std::size_t n) {
  std::vector<std::size_t> all(n);
  for (std::size_t x = 1; x <= n; ++x) all[x - 1] = x;
  return Partition(n, {std::move(all)});
}

BooleanMatrix relation_matrix(const Partition& p) {
  BooleanMatrix a(p.n(), p.n());
  for (const auto& b : p.blocks())
    for (auto i : b)
      for (auto j : b) a.set(i - 1, j - 1);
  return a;
}

ClassMatrix class_matrix(const Partition& p, ClassOrder order) {
  const std::size_t k = p.size();
  std::vector<std::size_t> idx(p.n());
  for (std::size_t x = 1; x <= p.n(); ++x) {
    const std::size_t b = p.block_of(x);
    idx[x - 1] = order == ClassOrder::first_occurrence ? b : k + 1 - b;
  }
  return ClassMatrix{LogicalMatrix(k, std::move(idx))};
}

ClassMatrix collapse_rows(const BooleanMatrix& a, ClassOrder order) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("collapse_rows: matrix is not square");
  // Keep the first copy of every distinct row, in row order.
  std::map<std::vector<BooleanMatrix::Word>, std::size_t> distinct;
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = a.row(i);
    if (distinct.try_emplace({row.begin(), row.end()}, i).second) reps.push_back(i);
  }
  if (order == ClassOrder::sorted_rows) {
    // Lexicographic on entries read from column 1: the first differing
    // column decides, and the row holding a 0 there is smaller.
    std::sort(reps.begin(), reps.end(), [&](std::size_t r, std::size_t s) {
      for (std::size_t j = 0; j < n; ++j)
        if (a.test(r, j) != a.test(s, j)) return !a.test(r, j);
      return false;
    });
  }
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t c = 0; c < reps.size(); ++c)
    for (std::size_t j = 0; j < n; ++j)
      if (a.test(reps[c], j)) {
        if (idx[j] != 0)
          throw DimensionError("collapse_rows: matrix is not an equivalence relation");
        idx[j] = c + 1;
      }
  for (std::size_t j = 0; j < n; ++j)
    if (idx[j] == 0 || !a.test(j, j))
      throw DimensionError("collapse_rows: matrix is not an equivalence relation");
  ClassMatrix c{LogicalMatrix(reps.size(), std::move(idx))};
  if (relation_matrix(partition_of(c)) != a)
    throw DimensionError("collapse_rows: matrix is not an equivalence relation");
  return c;
}

Partition partition_of(const ClassMatrix& c) {
  return Partition::from_class_vector(c.c.indices());
}

Partition partition_of(const BooleanMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("partition_of: matrix is not square");
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<bool> placed(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (placed[i]) continue;
    auto& block = blocks.emplace_back();
    for (std::size_t j = 0; j < n; ++j)
      if (a.test(i, j)) {
        if (placed[j])
          throw DimensionError("partition_of: matrix is not an equivalence relation");
        placed[j] = true;
        block.push_back(j + 1);
      }
    if (!a.test(i, i))
      throw DimensionError("partition_of: matrix is not an equivalence relation");
  }
  Partition p(n, std::move(blocks));
  if (relation_matrix(p) != a)
    throw DimensionError("partition_of: matrix is not an equivalence relation");
  return p;
}

CongruenceCheck is_congruence(const Bcn& bcn, const Partition& p) {
  if (p.n() != bcn.n_states())
    throw DimensionError("partition over " + std::to_string(p.n()) +
                         " states, network has " + std::to_string(bcn.n_states()));
  for (std::size_t u = 1; u <= bcn.n_inputs(); ++u)
    for (const auto& block : p.blocks()) {
      const std::size_t a = block.front();
      const std::size_t target = p.block_of(bcn.step(a, u));
      for (auto b : block)
        if (p.block_of(bcn.step(b, u)) != target)
          return {false, CongruenceWitness{u, a, b}};
    }
  return {};
}

bool refines(const Partition& p, const Partition& q) {
  if (p.n() != q.n()) throw DimensionError("refines: partitions over different state sets");
  for (const auto& block : p.blocks()) {
    const std::size_t b = q.block_of(block.front());
    for (auto x : block)
      if (q.block_of(x) != b) return false;
  }
  return true;
}

} // namespace bcnq
