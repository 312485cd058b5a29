#include <doctest.h>

#include <random>

#include "bcnq/error.hpp"
#include "bcnq/io.hpp"
#include "bcnq/partition.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace bcnq;

namespace {

const Partition example_r(8, {{1}, {2, 3}, {4}, {5, 6, 7, 8}});

std::vector<std::size_t> as_vector(const LogicalMatrix& m) {
  return {m.indices().begin(), m.indices().end()};
}

} // namespace

TEST_CASE("partitions are validated and kept canonical") {
  const Partition p(5, {{4, 2}, {5, 1}, {3}});
  CHECK(p.blocks() == std::vector<std::vector<std::size_t>>{{1, 5}, {2, 4}, {3}});
  CHECK(p.block_of(5) == 1);
  CHECK(p.same_block(2, 4));
  CHECK_FALSE(p.same_block(1, 2));
  CHECK_THROWS_AS(Partition(3, {{1, 2}}), DimensionError);         // 3 missing
  CHECK_THROWS_AS(Partition(3, {{1, 2}, {2, 3}}), DimensionError); // overlap
  CHECK_THROWS_AS(Partition(3, {{1, 2, 3}, {}}), DimensionError);  // empty block
  CHECK_THROWS_AS(Partition(3, {{1, 2, 4}}), DimensionError);      // out of range
}

TEST_CASE("partition from labels") {
  const std::vector<int> labels{7, 3, 3, 9, 1, 1, 1, 1};
  CHECK(Partition::from_labels<int>(labels) == example_r);
  CHECK(Partition::identity(3).size() == 3);
  CHECK(Partition::single_block(3).size() == 1);
}

TEST_CASE("class matrix of the example relation") {
  const auto c = class_matrix(example_r);
  CHECK(as_vector(c.c) == std::vector<std::size_t>{1, 2, 2, 3, 4, 4, 4, 4});
  CHECK(c.n_classes() == 4);
  CHECK(partition_of(c) == example_r);

  // Sorted relation rows number the classes by descending smallest member.
  const auto rows = class_matrix(example_r, ClassOrder::sorted_rows);
  CHECK(as_vector(rows.c) == std::vector<std::size_t>{4, 3, 3, 2, 1, 1, 1, 1});
  CHECK(partition_of(rows) == example_r);
}

TEST_CASE("relation matrix is block diagonal") {
  const auto a = relation_matrix(example_r);
  for (std::size_t i = 1; i <= 8; ++i)
    for (std::size_t j = 1; j <= 8; ++j) CHECK(a.test(i - 1, j - 1) == example_r.same_block(i, j));
  CHECK(partition_of(a) == example_r);
}

TEST_CASE("C^T (.) C equals the relation matrix and C (.) C^T is the identity") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 20;
    const auto labels = oracle::random_labels(rng, n, 1 + trial % 5);
    const auto p = Partition::from_class_vector(labels);
    for (auto order : {ClassOrder::first_occurrence, ClassOrder::sorted_rows}) {
      const auto c = BooleanMatrix::from_logical(class_matrix(p, order).c);
      CHECK(bool_product(c.transpose(), c) == relation_matrix(p));
      CHECK(bool_product(c, c.transpose()) == BooleanMatrix::identity(p.size()));
    }
  }
}

TEST_CASE("collapsing relation rows reproduces the class matrix") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 70;
    const auto p = Partition::from_class_vector(oracle::random_labels(rng, n, 1 + trial % 9));
    for (auto order : {ClassOrder::first_occurrence, ClassOrder::sorted_rows})
      CHECK(collapse_rows(relation_matrix(p), order) == class_matrix(p, order));
  }
  BooleanMatrix not_transitive = BooleanMatrix::identity(3);
  not_transitive.set(0, 1);
  not_transitive.set(1, 0);
  not_transitive.set(1, 2);
  not_transitive.set(2, 1);
  CHECK_THROWS_AS(collapse_rows(not_transitive), DimensionError);
  BooleanMatrix not_reflexive(2, 2);
  CHECK_THROWS_AS(collapse_rows(not_reflexive), DimensionError);
}

TEST_CASE("congruence check on the example network") {
  const auto bcn = io::load_network(data_path("example1.bcn"));
  CHECK(is_congruence(bcn, example_r).holds);
  CHECK(is_congruence(bcn, Partition::identity(8)).holds);
  CHECK(is_congruence(bcn, Partition::single_block(8)).holds);

  const Partition s(8, {{1}, {2, 3, 4}, {5, 6, 7, 8}});
  const auto check = is_congruence(bcn, s);
  CHECK_FALSE(check.holds);
  REQUIRE(check.witness.has_value());
  CHECK(check.witness->input == 1);
  CHECK(check.witness->a == 2);
  CHECK(check.witness->b == 4);
  // The witness really splits.
  CHECK_FALSE(s.same_block(bcn.step(check.witness->a, check.witness->input),
                           bcn.step(check.witness->b, check.witness->input)));
}

TEST_CASE("congruence check agrees with the pairwise oracle") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 12, m = 1 + trial % 3;
    const auto bcn = oracle::random_reducible_bcn(rng, n, m, 1 + trial % n);
    const auto labels = oracle::random_labels(rng, n, 1 + trial % 4);
    const auto p = Partition::from_class_vector(labels);
    const auto check = is_congruence(bcn, p);
    CHECK(check.holds == oracle::is_congruence(bcn, labels));
    if (!check.holds) {
      REQUIRE(check.witness.has_value());
      CHECK(p.same_block(check.witness->a, check.witness->b));
      CHECK_FALSE(p.same_block(bcn.step(check.witness->a, check.witness->input),
                               bcn.step(check.witness->b, check.witness->input)));
    }
  }
}

TEST_CASE("refinement order between partitions") {
  CHECK(refines(example_r, Partition(8, {{1}, {2, 3, 4}, {5, 6, 7, 8}})));
  CHECK_FALSE(refines(Partition(8, {{1}, {2, 3, 4}, {5, 6, 7, 8}}), example_r));
  CHECK(refines(Partition::identity(8), example_r));
  CHECK(refines(example_r, Partition::single_block(8)));
  CHECK(refines(example_r, example_r));
}
