#ifndef BCNQ_PARTITION_HPP
#define BCNQ_PARTITION_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "bcnq/algebra.hpp"
#include "bcnq/network.hpp"

namespace bcnq {

/// Partition of the states {1..N}. Blocks are kept in canonical order:
/// ascending smallest member, members ascending.
class Partition {
public:
  Partition() = default;
  /// Throws DimensionError unless `blocks` are disjoint, nonempty and cover
  /// [1, n].
  Partition(std::size_t n, std::vector<std::vector<std::size_t>> blocks);

  /// Partition whose blocks are the level sets of `labels` (labels[x-1] is the
  /// label of state x; any values).
  template <typename Label>
  static Partition from_labels(std::span<const Label> labels);
  static Partition from_class_vector(std::span<const std::size_t> labels) {
    return from_labels<std::size_t>(labels);
  }

  static Partition identity(std::size_t n);
  static Partition single_block(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  const std::vector<std::size_t>& block(std::size_t b) const { return blocks_[b - 1]; }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }

  /// 1-based canonical block index of state x.
  std::size_t block_of(std::size_t x) const { return block_of_[x - 1]; }

  bool same_block(std::size_t a, std::size_t b) const { return block_of(a) == block_of(b); }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.n_ == b.n_ && a.blocks_ == b.blocks_;
  }

private:
  void index_blocks();

  std::size_t n_ = 0;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
};

template <typename Label>
Partition Partition::from_labels(std::span<const Label> labels) {
  std::map<Label, std::size_t> seen;
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t x = 0; x < labels.size(); ++x) {
    auto [it, inserted] = seen.try_emplace(labels[x], blocks.size());
    if (inserted) blocks.emplace_back();
    blocks[it->second].push_back(x + 1);
  }
  return Partition(labels.size(), std::move(blocks));
}

/// How the rows of a class matrix are numbered.
enum class ClassOrder {
  /// Class of the smallest state first (ascending smallest member).
  first_occurrence,
  /// Distinct rows of A_R sorted ascending as 0/1 words read from column 1;
  /// equivalently, descending smallest member.
  sorted_rows,
};

/// Full-row-rank logical matrix C with Cx = Cx' iff x, x' share a block.
struct ClassMatrix {
  LogicalMatrix c;

  std::size_t n_classes() const noexcept { return c.rows(); }
  std::size_t n_states() const noexcept { return c.cols(); }
  std::size_t class_of(std::size_t x) const { return c.index(x); }

  friend bool operator==(const ClassMatrix&, const ClassMatrix&) = default;
};

/// (A_R)_ij = 1 iff states i and j share a block.
BooleanMatrix relation_matrix(const Partition& p);

ClassMatrix class_matrix(const Partition& p, ClassOrder order = ClassOrder::first_occurrence);

/// Collapses repeated rows of an equivalence-relation matrix into C. Throws
/// DimensionError when `a` is not reflexive, symmetric and transitive.
ClassMatrix collapse_rows(const BooleanMatrix& a, ClassOrder order = ClassOrder::first_occurrence);

Partition partition_of(const ClassMatrix& c);

/// Partition represented by an equivalence-relation matrix.
Partition partition_of(const BooleanMatrix& a);

struct CongruenceCheck {
  bool holds = true;
  std::optional<CongruenceWitness> witness;

  explicit operator bool() const noexcept { return holds; }
};

/// Every block is mapped into a single block under every input. On failure
/// the witness has the smallest input, then smallest block, then the
/// block's first member as `a` and the first member split from it as `b`.
CongruenceCheck is_congruence(const Bcn& bcn, const Partition& p);

/// Every block of p lies inside a block of q.
bool refines(const Partition& p, const Partition& q);

} // namespace bcnq

#endif
