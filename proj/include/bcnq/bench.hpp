#ifndef BCNQ_BENCH_HPP
#define BCNQ_BENCH_HPP

// Seeded comparison of direct synthesis against synthesis via quotients on
// random networks.
//
// Sampling: with `RandomModel::nk` every state variable reads `in_degree`
// distinct variables drawn uniformly from the n + m nodes and applies a
// uniformly random truth table; with `RandomModel::uniform` every column of
// F is drawn uniformly from [1, N]. Stabilization targets are uniform
// k-subsets of the states, initial states are uniform. Optimal-control costs
// are l(u, x) = 1 if u_1 = 1 else 0 and g(x) = 5 if x_1 = 0 else 0.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bcnq/control.hpp"
#include "bcnq/network.hpp"

namespace bcnq::bench {

enum class RandomModel { nk, uniform };

struct BenchConfig {
  std::size_t count = 1;
  std::size_t n_bits = 11;
  std::size_t m_bits = 5;
  std::vector<std::size_t> target_sizes{1, 100};
  std::size_t horizon = 40;
  std::uint64_t seed = 1;
  RandomModel model = RandomModel::nk;
  std::size_t in_degree = 2;
  /// Worker threads; results do not depend on it.
  std::size_t jobs = 1;
};

struct BenchRecord {
  std::size_t instance = 0;
  /// "stabilize k=<size>" or "optctl T=<horizon>".
  std::string task;
  std::size_t n_states = 0;
  std::size_t quotient_states = 0;
  double direct_seconds = 0;
  double quotient_seconds = 0;
  bool results_match = false;
  /// Short outcome summary, identical for both paths when they match.
  std::string outcome;
  /// Set when the instance could not be run (e.g. out of memory).
  std::string error;
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchRecord> records;

  bool all_match() const;
};

/// Throws std::invalid_argument for zero or oversized bit counts.
void check_config(const BenchConfig& config);

Bcn random_network(const BenchConfig& config, std::mt19937_64& rng);

/// Costs of the optimal-control benchmark for N = 2^n states, M = 2^m inputs.
CostSpec benchmark_cost(std::size_t n_states, std::size_t n_inputs);

BenchReport run_bench(const BenchConfig& config);

/// `with_timing = false` drops the time columns, leaving output that is
/// byte-identical across runs with the same seed.
std::string to_text(const BenchReport& report, bool with_timing = true);
std::string to_json(const BenchReport& report, bool with_timing = true);

} // namespace bcnq::bench

#endif
