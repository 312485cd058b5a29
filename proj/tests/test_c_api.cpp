// Exercises the shared library through its C header only.

#include <doctest.h>

#include <string>
#include <vector>

#include "bcnq/bcnq.h"
#include "test_support.hpp"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  bcnq_string_free(s);
  return out;
}

bcnq_network* example1() {
  bcnq_network* net = nullptr;
  REQUIRE(bcnq_network_load(data_path("example1.bcn").c_str(), &net) == BCNQ_OK);
  return net;
}

} // namespace

TEST_CASE("C API: truth-table conversion") {
  bcnq_network* net = nullptr;
  REQUIRE(bcnq_network_load_truth_table(data_path("example1.tt").c_str(), &net) == BCNQ_OK);
  CHECK(bcnq_network_states(net) == 8);
  CHECK(bcnq_network_inputs(net) == 2);
  std::vector<size_t> cols(16);
  REQUIRE(bcnq_network_columns(net, cols.data(), cols.size()) == BCNQ_OK);
  CHECK(cols == std::vector<size_t>{2, 1, 1, 5, 6, 7, 8, 5, 1, 1, 1, 8, 6, 7, 8, 7});
  CHECK(bcnq_network_columns(net, cols.data(), 3) == BCNQ_INVALID_ARGUMENT);
  char* text = nullptr;
  REQUIRE(bcnq_network_to_text(net, &text) == BCNQ_OK);
  CHECK(take(text) == "bcnq-network 1\nstates 8\ninputs 2\ncolumns\n2 1 1 5 6 7 8 5\n1 1 1 8 6 7 8 7\n");
  bcnq_network_free(net);
}

TEST_CASE("C API: errors and status codes") {
  bcnq_network* net = nullptr;
  CHECK(bcnq_network_load("/nonexistent/file.bcn", &net) == BCNQ_IO);
  CHECK(net == nullptr);
  CHECK(std::string(bcnq_last_error()).find("cannot open") != std::string::npos);
  CHECK(bcnq_network_parse("bcnq-network 1\nstates 2\n", &net) == BCNQ_PARSE);
  CHECK(std::string(bcnq_last_error()).find("missing section 'inputs'") != std::string::npos);
  CHECK(bcnq_network_parse(nullptr, &net) == BCNQ_INVALID_ARGUMENT);
  CHECK(bcnq_network_parse_truth_table("bcnq-truthtable 1\nn 1\nm 1\nrows\n1\n", &net) == BCNQ_PARSE);
  CHECK(std::string(bcnq_last_error()).find("2^2 = 4") != std::string::npos);
  const size_t bad[] = {1, 3};
  CHECK(bcnq_network_from_columns(2, 1, bad, &net) == BCNQ_INVALID_ARGUMENT);
  CHECK(std::string(bcnq_status_name(BCNQ_CONGRUENCE)) == "congruence violation");

  net = example1();
  size_t out = 0;
  CHECK(bcnq_network_step(net, 9, 1, &out) == BCNQ_INVALID_ARGUMENT);
  CHECK(bcnq_network_step(net, 1, 1, &out) == BCNQ_OK);
  CHECK(out == 2);
  CHECK(std::string(bcnq_last_error()).empty());
  bcnq_network_free(net);
  bcnq_network_free(nullptr);
}

TEST_CASE("C API: refinement and quotient") {
  bcnq_network* net = example1();
  bcnq_partition* seed = nullptr;
  REQUIRE(bcnq_partition_load(data_path("example3_seed.part").c_str(), &seed) == BCNQ_OK);

  int holds = 1;
  size_t w[3] = {0, 0, 0};
  REQUIRE(bcnq_check_congruence(net, seed, &holds, w) == BCNQ_OK);
  CHECK(holds == 0);
  CHECK(w[0] == 1);
  CHECK(w[1] == 2);
  CHECK(w[2] == 4);
  bcnq_quotient* q = nullptr;
  CHECK(bcnq_quotient_build(net, seed, BCNQ_ORDER_FIRST_OCCURRENCE, &q) == BCNQ_CONGRUENCE);

  bcnq_partition* refined = nullptr;
  size_t k_star = 0;
  REQUIRE(bcnq_refine(net, seed, &refined, &k_star) == BCNQ_OK);
  CHECK(k_star == 2);
  CHECK(bcnq_partition_blocks(refined) == 4);
  char* text = nullptr;
  REQUIRE(bcnq_partition_to_text(refined, &text) == BCNQ_OK);
  CHECK(take(text) == "bcnq-partition 1\nstates 8\nblocks 4\n1\n2 3\n4\n5 6 7 8\n");

  REQUIRE(bcnq_quotient_build(net, refined, BCNQ_ORDER_FIRST_OCCURRENCE, &q) == BCNQ_OK);
  CHECK(bcnq_quotient_classes(q) == 4);
  size_t cls = 0;
  REQUIRE(bcnq_quotient_class_of(q, 6, &cls) == BCNQ_OK);
  CHECK(cls == 4);
  bcnq_network* reduced = nullptr;
  REQUIRE(bcnq_quotient_network(q, &reduced) == BCNQ_OK);
  std::vector<size_t> cols(8);
  REQUIRE(bcnq_network_columns(reduced, cols.data(), cols.size()) == BCNQ_OK);
  CHECK(cols == std::vector<size_t>{2, 1, 4, 4, 1, 1, 4, 4});
  REQUIRE(bcnq_quotient_classes_to_text(q, &text) == BCNQ_OK);
  CHECK(take(text) == "bcnq-classes 1\nstates 8\nclasses 4\n1 2 2 3 4 4 4 4\n");

  bcnq_network_free(reduced);
  bcnq_quotient_free(q);
  bcnq_partition_free(refined);
  bcnq_partition_free(seed);
  bcnq_network_free(net);
}

TEST_CASE("C API: partitions from labels and targets") {
  const size_t labels[] = {5, 3, 3, 5};
  bcnq_partition* p = nullptr;
  REQUIRE(bcnq_partition_from_labels(4, labels, &p) == BCNQ_OK);
  CHECK(bcnq_partition_blocks(p) == 2);
  size_t b = 0;
  REQUIRE(bcnq_partition_block_of(p, 4, &b) == BCNQ_OK);
  CHECK(b == 1);
  CHECK(bcnq_partition_block_of(p, 5, &b) == BCNQ_INVALID_ARGUMENT);
  bcnq_partition_free(p);

  const size_t target[] = {2};
  REQUIRE(bcnq_partition_target(4, target, 1, &p) == BCNQ_OK);
  CHECK(bcnq_partition_blocks(p) == 2);
  bcnq_partition_free(p);
  CHECK(bcnq_partition_target(4, target, 0, &p) == BCNQ_INVALID_ARGUMENT);
}

TEST_CASE("C API: stabilization") {
  bcnq_network* lac = nullptr;
  REQUIRE(bcnq_network_load(data_path("lac_operon.bcn").c_str(), &lac) == BCNQ_OK);
  const size_t target[] = {387};
  bcnq_feedback* fb = nullptr;
  REQUIRE(bcnq_stabilize(lac, target, 1, 1, BCNQ_ORDER_SORTED_ROWS, &fb) == BCNQ_OK);
  CHECK(bcnq_feedback_stabilizable(fb) == 1);
  CHECK(bcnq_feedback_quotient_inconclusive(fb) == 0);
  CHECK(bcnq_feedback_quotient_states(fb) == 8);
  CHECK(bcnq_feedback_states(fb) == 432);
  std::vector<size_t> traj(865);
  for (size_t x0 = 1; x0 <= 432; ++x0) {
    REQUIRE(bcnq_simulate_feedback(lac, fb, x0, 864, traj.data()) == BCNQ_OK);
    CHECK(traj[bcnq_feedback_settling_bound(fb)] == 387);
    CHECK(traj[864] == 387);
  }
  char* text = nullptr;
  REQUIRE(bcnq_feedback_to_text(fb, &text) == BCNQ_OK);
  const std::string fb_text = take(text);
  CHECK(fb_text.find("classes 8\n") != std::string::npos);
  bcnq_feedback* again = nullptr;
  REQUIRE(bcnq_feedback_parse(fb_text.c_str(), &again) == BCNQ_OK);
  for (size_t x = 1; x <= 432; ++x) {
    size_t a = 0, b = 0;
    bcnq_feedback_input_for(fb, x, &a);
    bcnq_feedback_input_for(again, x, &b);
    CHECK(a == b);
  }
  bcnq_feedback_free(again);
  bcnq_feedback_free(fb);
  bcnq_network_free(lac);
}

TEST_CASE("C API: unstabilizable networks and the quotient fallback") {
  // States 3 <-> 4 swap under both inputs.
  const size_t cols[] = {1, 1, 4, 3, 2, 1, 4, 3};
  bcnq_network* net = nullptr;
  REQUIRE(bcnq_network_from_columns(4, 2, cols, &net) == BCNQ_OK);
  const size_t target[] = {1};
  bcnq_feedback* fb = nullptr;
  REQUIRE(bcnq_stabilize(net, target, 1, 1, BCNQ_ORDER_FIRST_OCCURRENCE, &fb) == BCNQ_OK);
  CHECK(bcnq_feedback_stabilizable(fb) == 0);
  CHECK(bcnq_feedback_quotient_inconclusive(fb) == 1);
  size_t count = 0;
  REQUIRE(bcnq_feedback_unstabilizable(fb, nullptr, 0, &count) == BCNQ_OK);
  REQUIRE(count == 2);
  std::vector<size_t> bad(count);
  REQUIRE(bcnq_feedback_unstabilizable(fb, bad.data(), bad.size(), &count) == BCNQ_OK);
  CHECK(bad == std::vector<size_t>{3, 4});
  char* text = nullptr;
  CHECK(bcnq_feedback_to_text(fb, &text) == BCNQ_NOT_STABILIZABLE);
  size_t u = 0;
  CHECK(bcnq_feedback_input_for(fb, 1, &u) == BCNQ_INVALID_ARGUMENT);
  bcnq_feedback_free(fb);
  bcnq_network_free(net);
}

TEST_CASE("C API: optimal control") {
  bcnq_network* lac = nullptr;
  REQUIRE(bcnq_network_load(data_path("lac_operon.bcn").c_str(), &lac) == BCNQ_OK);
  bcnq_cost* cost = nullptr;
  REQUIRE(bcnq_cost_load(data_path("lac_operon.cost").c_str(), &cost) == BCNQ_OK);
  for (int via : {0, 1}) {
    bcnq_solution* sol = nullptr;
    REQUIRE(bcnq_optimal_control(lac, cost, 10, 3, via, BCNQ_ORDER_SORTED_ROWS, &sol) == BCNQ_OK);
    CHECK(bcnq_solution_horizon(sol) == 3);
    std::vector<size_t> inputs(3);
    REQUIRE(bcnq_solution_inputs(sol, inputs.data(), inputs.size()) == BCNQ_OK);
    CHECK(inputs == std::vector<size_t>{2, 2, 1});
    char* j = nullptr;
    REQUIRE(bcnq_solution_cost(sol, &j) == BCNQ_OK);
    CHECK(take(j) == "5");
    CHECK(bcnq_solution_quotient_states(sol) == (via ? 12u : 0u));
    CHECK(bcnq_solution_quotient_x0(sol) == (via ? 11u : 0u));
    char* text = nullptr;
    REQUIRE(bcnq_solution_to_text(sol, &text) == BCNQ_OK);
    CHECK(take(text).find("controls 2 2 1\n") != std::string::npos);
    bcnq_solution_free(sol);
  }
  bcnq_solution* sol = nullptr;
  CHECK(bcnq_optimal_control(lac, cost, 433, 3, 0, BCNQ_ORDER_FIRST_OCCURRENCE, &sol) ==
        BCNQ_INVALID_ARGUMENT);

  bcnq_partition* p = nullptr;
  REQUIRE(bcnq_cost_partition(cost, &p) == BCNQ_OK);
  CHECK(bcnq_partition_blocks(p) == 2);
  bcnq_partition_free(p);
  bcnq_cost_free(cost);

  CHECK(bcnq_cost_parse("bcnq-cost 1\nstates 2\ninputs 1\nl\n1 1\ng\n0 1\nmu\n0 2\n", &cost) ==
        BCNQ_PARSE);
  bcnq_network_free(lac);
}

TEST_CASE("C API: open-loop simulation") {
  bcnq_network* net = example1();
  const size_t inputs[] = {1, 2, 1};
  size_t traj[4];
  REQUIRE(bcnq_simulate_inputs(net, 4, inputs, 3, traj) == BCNQ_OK);
  CHECK(traj[0] == 4);
  CHECK(traj[1] == 5);
  CHECK(traj[2] == 6);
  CHECK(traj[3] == 7);
  const size_t bad[] = {3};
  CHECK(bcnq_simulate_inputs(net, 1, bad, 1, traj) == BCNQ_INVALID_ARGUMENT);
  bcnq_network_free(net);
}

TEST_CASE("C API: benchmark") {
  bcnq_bench_config c;
  bcnq_bench_defaults(&c);
  CHECK(c.n_bits == 11);
  CHECK(c.m_bits == 5);
  CHECK(c.horizon == 40);
  const size_t sizes[] = {1, 3};
  c.count = 2;
  c.n_bits = 5;
  c.m_bits = 1;
  c.target_sizes = sizes;
  c.n_target_sizes = 2;
  c.horizon = 5;
  char* report = nullptr;
  int all_match = 0;
  REQUIRE(bcnq_bench_run(&c, 0, 0, &report, &all_match) == BCNQ_OK);
  CHECK(all_match == 1);
  const std::string text = take(report);
  CHECK(text.find("all instances match") != std::string::npos);
  REQUIRE(bcnq_bench_run(&c, 1, 0, &report, &all_match) == BCNQ_OK);
  CHECK(take(report).find("\"all_match\": true") != std::string::npos);
  c.model = 7;
  CHECK(bcnq_bench_run(&c, 0, 0, &report, &all_match) == BCNQ_INVALID_ARGUMENT);
}
