// bcnq command-line front end. Talks to the library only through bcnq.h.
//
// Exit codes: 0 success, 1 usage/parse/io errors, 2 domain failures
// (congruence violation, network not stabilizable, ill-defined cost,
// benchmark mismatch).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcnq/bcnq.h"

namespace {

using nlohmann::json;

// --- handle and string ownership ---------------------------------------------

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Network = std::unique_ptr<bcnq_network, Deleter<bcnq_network, bcnq_network_free>>;
using PartitionH = std::unique_ptr<bcnq_partition, Deleter<bcnq_partition, bcnq_partition_free>>;
using Quotient = std::unique_ptr<bcnq_quotient, Deleter<bcnq_quotient, bcnq_quotient_free>>;
using Feedback = std::unique_ptr<bcnq_feedback, Deleter<bcnq_feedback, bcnq_feedback_free>>;
using Cost = std::unique_ptr<bcnq_cost, Deleter<bcnq_cost, bcnq_cost_free>>;
using Solution = std::unique_ptr<bcnq_solution, Deleter<bcnq_solution, bcnq_solution_free>>;

/// Raised when a library call fails; carries the process exit code.
struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(bcnq_status s) {
  switch (s) {
  case BCNQ_CONGRUENCE:
  case BCNQ_NOT_STABILIZABLE:
  case BCNQ_ILL_DEFINED:
    return 2;
  default:
    return 1;
  }
}

void check(bcnq_status s) {
  if (s != BCNQ_OK) throw Failure{exit_code_for(s), bcnq_last_error()};
}

std::string take(char* s) {
  std::string out(s);
  bcnq_string_free(s);
  return out;
}

template <typename Fn, typename... Args>
std::string text_of(Fn fn, Args... args) {
  char* s = nullptr;
  check(fn(args..., &s));
  return take(s);
}

// --- options shared by every subcommand ----------------------------------------

struct Globals {
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string class_order = "first";

  bool json() const { return format == "json"; }
  bcnq_class_order order() const {
    return class_order == "rows" ? BCNQ_ORDER_SORTED_ROWS : BCNQ_ORDER_FIRST_OCCURRENCE;
  }
};

// The primary artifact goes to `path` when given, else to stdout. The report
// goes to stdout when the artifact went to a file, else to stderr, so that
// piping the artifact stays clean.
struct Output {
  std::string path;

  void artifact(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw Failure{1, "cannot write " + path};
    out << text;
  }

  std::ostream& report() const { return path.empty() ? std::cerr : std::cout; }
};

void print_report(const Globals& g, const Output& o, const json& j, const std::string& text) {
  if (g.json())
    o.report() << j.dump(2) << '\n';
  else
    o.report() << text;
}

std::string join(const std::vector<std::size_t>& v, const char* sep = " ") {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? sep : "") << v[i];
  return s.str();
}

Network load_network(const std::string& path) {
  bcnq_network* p = nullptr;
  check(bcnq_network_load(path.c_str(), &p));
  return Network(p);
}

PartitionH load_partition(const std::string& path) {
  bcnq_partition* p = nullptr;
  check(bcnq_partition_load(path.c_str(), &p));
  return PartitionH(p);
}

// --- subcommands -----------------------------------------------------------------

int cmd_convert(const Globals& g, const std::string& table, const Output& o) {
  bcnq_network* raw = nullptr;
  check(bcnq_network_load_truth_table(table.c_str(), &raw));
  Network net(raw);
  o.artifact(text_of(bcnq_network_to_text, net.get()));
  const auto n = bcnq_network_states(net.get()), m = bcnq_network_inputs(net.get());
  print_report(g, o, {{"states", n}, {"inputs", m}},
               "converted: " + std::to_string(n) + " states, " + std::to_string(m) + " inputs\n");
  return 0;
}

int cmd_refine(const Globals& g, const std::string& network, const std::string& seed,
               const Output& o) {
  auto net = load_network(network);
  auto s = load_partition(seed);
  bcnq_partition* raw = nullptr;
  std::size_t k_star = 0;
  check(bcnq_refine(net.get(), s.get(), &raw, &k_star));
  PartitionH result(raw);
  o.artifact(text_of(bcnq_partition_to_text, result.get()));
  const auto blocks = bcnq_partition_blocks(result.get());
  print_report(g, o, {{"k_star", k_star}, {"blocks", blocks}},
               "k* = " + std::to_string(k_star) + ", " + std::to_string(blocks) + " blocks\n");
  return 0;
}

int cmd_quotient(const Globals& g, const std::string& network, const std::string& partition,
                 const std::string& classes_path, const Output& o) {
  auto net = load_network(network);
  auto p = load_partition(partition);

  int holds = 0;
  std::size_t w[3] = {0, 0, 0};
  check(bcnq_check_congruence(net.get(), p.get(), &holds, w));
  if (!holds) {
    print_report(g, Output{}, {{"congruence", false}, {"witness", {{"input", w[0]}, {"a", w[1]}, {"b", w[2]}}}},
                 "not a congruence: input " + std::to_string(w[0]) + " sends states " +
                     std::to_string(w[1]) + " and " + std::to_string(w[2]) +
                     " into different blocks\n");
    return 2;
  }

  bcnq_quotient* raw = nullptr;
  check(bcnq_quotient_build(net.get(), p.get(), g.order(), &raw));
  Quotient q(raw);
  bcnq_network* reduced_raw = nullptr;
  check(bcnq_quotient_network(q.get(), &reduced_raw));
  Network reduced(reduced_raw);
  o.artifact(text_of(bcnq_network_to_text, reduced.get()));
  const std::string classes = text_of(bcnq_quotient_classes_to_text, q.get());
  if (!classes_path.empty()) Output{classes_path}.artifact(classes);

  const auto k = bcnq_quotient_classes(q.get());
  std::vector<std::size_t> assignment(bcnq_network_states(net.get()));
  for (std::size_t x = 1; x <= assignment.size(); ++x)
    check(bcnq_quotient_class_of(q.get(), x, &assignment[x - 1]));
  print_report(g, o, {{"states", assignment.size()}, {"classes", k}, {"class_of", assignment}},
               std::to_string(assignment.size()) + " states -> " + std::to_string(k) +
                   " classes\nC = " + join(assignment) + "\n");
  return 0;
}

int cmd_stabilize(const Globals& g, const std::string& network,
                  const std::vector<std::size_t>& target, bool direct, const Output& o) {
  auto net = load_network(network);
  bcnq_feedback* raw = nullptr;
  check(bcnq_stabilize(net.get(), target.data(), target.size(), direct ? 0 : 1, g.order(), &raw));
  Feedback fb(raw);

  const bool inconclusive = bcnq_feedback_quotient_inconclusive(fb.get()) != 0;
  if (inconclusive)
    std::cerr << "note: the quotient is not stabilizable, which is inconclusive for the "
                 "original network; fell back to direct synthesis\n";

  if (!bcnq_feedback_stabilizable(fb.get())) {
    std::size_t count = 0;
    check(bcnq_feedback_unstabilizable(fb.get(), nullptr, 0, &count));
    std::vector<std::size_t> bad(count);
    check(bcnq_feedback_unstabilizable(fb.get(), bad.data(), bad.size(), &count));
    print_report(g, Output{}, {{"stabilizable", false}, {"unstabilizable", bad}},
                 "not stabilizable: " + std::to_string(count) + " states cannot reach the target: " +
                     join(bad) + "\n");
    return 2;
  }

  o.artifact(text_of(bcnq_feedback_to_text, fb.get()));
  const auto bound = bcnq_feedback_settling_bound(fb.get());
  const auto qn = bcnq_feedback_quotient_states(fb.get());
  json j = {{"stabilizable", true},
            {"settling_bound", bound},
            {"mode", direct ? "direct" : (inconclusive ? "direct-fallback" : "via-quotient")}};
  std::string text = "settling bound " + std::to_string(bound) + "\n";
  if (qn) {
    j["quotient_states"] = qn;
    text = "quotient: " + std::to_string(qn) + " classes\n" + text;
  }
  print_report(g, o, j, text);
  return 0;
}

int cmd_optctl(const Globals& g, const std::string& network, const std::string& cost_path,
               std::size_t x0, std::size_t horizon, bool direct, const Output& o) {
  auto net = load_network(network);
  bcnq_cost* cost_raw = nullptr;
  check(bcnq_cost_load(cost_path.c_str(), &cost_raw));
  Cost cost(cost_raw);

  bcnq_solution* raw = nullptr;
  check(bcnq_optimal_control(net.get(), cost.get(), x0, horizon, direct ? 0 : 1, g.order(), &raw));
  Solution sol(raw);
  o.artifact(text_of(bcnq_solution_to_text, sol.get()));

  std::vector<std::size_t> inputs(bcnq_solution_horizon(sol.get()));
  check(bcnq_solution_inputs(sol.get(), inputs.data(), inputs.size()));
  const std::string j_star = text_of(bcnq_solution_cost, sol.get());
  json j = {{"cost", j_star}, {"inputs", inputs}};
  std::string text = "J* = " + j_star + "\ninputs: " + join(inputs) + "\n";
  if (const auto qn = bcnq_solution_quotient_states(sol.get())) {
    const auto qx0 = bcnq_solution_quotient_x0(sol.get());
    j["quotient_states"] = qn;
    j["quotient_x0"] = qx0;
    text = "quotient: " + std::to_string(qn) + " classes, C x0 = " + std::to_string(qx0) + "\n" + text;
  }
  print_report(g, o, j, text);
  return 0;
}

struct BenchArgs {
  std::size_t count = 1;
  std::size_t n_bits = 11;
  std::size_t m_bits = 5;
  std::vector<std::size_t> k{1, 100};
  std::size_t horizon = 40;
  std::string model = "nk";
  std::size_t in_degree = 2;
  std::size_t jobs = 1;
  bool no_timing = false;
};

int cmd_bench(const Globals& g, const BenchArgs& a, const Output& o) {
  bcnq_bench_config c;
  bcnq_bench_defaults(&c);
  c.count = a.count;
  c.n_bits = a.n_bits;
  c.m_bits = a.m_bits;
  c.target_sizes = a.k.data();
  c.n_target_sizes = a.k.size();
  c.horizon = a.horizon;
  c.seed = g.seed;
  c.model = a.model == "uniform" ? 1 : 0;
  c.in_degree = a.in_degree;
  c.jobs = a.jobs;
  char* report = nullptr;
  int all_match = 0;
  check(bcnq_bench_run(&c, g.json() ? 1 : 0, a.no_timing ? 0 : 1, &report, &all_match));
  o.artifact(take(report));
  return all_match ? 0 : 2;
}

int cmd_simulate(const Globals& g, const std::string& network, std::size_t x0,
                 const std::string& feedback_path, std::size_t steps,
                 const std::vector<std::size_t>& inputs, const Output& o) {
  auto net = load_network(network);
  std::vector<std::size_t> trajectory;
  if (!feedback_path.empty()) {
    bcnq_feedback* raw = nullptr;
    check(bcnq_feedback_load(feedback_path.c_str(), &raw));
    Feedback fb(raw);
    trajectory.resize(steps + 1);
    check(bcnq_simulate_feedback(net.get(), fb.get(), x0, steps, trajectory.data()));
  } else {
    trajectory.resize(inputs.size() + 1);
    check(bcnq_simulate_inputs(net.get(), x0, inputs.data(), inputs.size(), trajectory.data()));
  }
  if (g.json())
    o.artifact(json{{"trajectory", trajectory}}.dump() + "\n");
  else
    o.artifact(join(trajectory) + "\n");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"bcnq: quotients of Boolean control networks and controller synthesis"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed (bench)");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--class-order", g.class_order,
                 "Class numbering: 'first' (by smallest member) or 'rows' (sorted relation rows)")
      ->check(CLI::IsMember({"first", "rows"}));

  Output out;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", out.path, "Write the result here instead of stdout");
  };

  std::string network, second, classes_path, feedback_path;
  std::vector<std::size_t> list;
  std::size_t x0 = 1, horizon = 0, steps = 0;
  bool direct = false, via = false;
  BenchArgs bench;

  auto* convert = app.add_subcommand("convert", "Truth table -> algebraic network");
  convert->add_option("table", network, "Truth-table file")->required();
  add_output(convert);

  auto* refine = app.add_subcommand("refine", "Largest congruence inside a seed partition");
  refine->add_option("network", network)->required();
  refine->add_option("partition", second, "Seed partition file")->required();
  add_output(refine);

  auto* quotient = app.add_subcommand("quotient", "Quotient network of a congruence");
  quotient->add_option("network", network)->required();
  quotient->add_option("partition", second)->required();
  quotient->add_option("--classes", classes_path, "Write the class assignment here");
  add_output(quotient);

  auto mode_flags = [&](CLI::App* sub) {
    auto* d = sub->add_flag("--direct", direct, "Synthesize on the original network");
    auto* v = sub->add_flag("--via-quotient", via, "Synthesize on the quotient (default)");
    d->excludes(v);
  };

  auto* stab = app.add_subcommand("stabilize", "Set-stabilizing state feedback");
  stab->add_option("network", network)->required();
  stab->add_option("--target", list, "Target states")->required()->delimiter(',');
  mode_flags(stab);
  add_output(stab);

  auto* opt = app.add_subcommand("optctl", "Finite-horizon optimal control");
  opt->add_option("network", network)->required();
  opt->add_option("cost", second, "Cost file")->required();
  opt->add_option("--x0", x0, "Initial state")->required();
  opt->add_option("-T,--horizon", horizon, "Horizon")->required();
  mode_flags(opt);
  add_output(opt);

  auto* ben = app.add_subcommand("bench", "Direct vs. quotient synthesis on random networks");
  ben->add_option("--count", bench.count, "Number of networks");
  ben->add_option("-n,--n-bits", bench.n_bits, "State variables");
  ben->add_option("-m,--m-bits", bench.m_bits, "Input variables");
  ben->add_option("-k,--target-size", bench.k, "Target set sizes")->delimiter(',');
  ben->add_option("-T,--horizon", bench.horizon, "Optimal-control horizon");
  ben->add_option("--model", bench.model, "Random network model")
      ->check(CLI::IsMember({"nk", "uniform"}));
  ben->add_option("--in-degree", bench.in_degree, "Inputs per variable in the nk model");
  ben->add_option("-j,--jobs", bench.jobs, "Instances run concurrently");
  ben->add_flag("--no-timing", bench.no_timing, "Omit timing columns");
  add_output(ben);

  auto* sim = app.add_subcommand("simulate", "Closed- or open-loop trajectory");
  sim->add_option("network", network)->required();
  sim->add_option("--x0", x0, "Initial state")->required();
  auto* fbo = sim->add_option("--feedback", feedback_path, "Feedback file");
  sim->add_option("--steps", steps, "Closed-loop steps")->needs(fbo);
  sim->add_option("--inputs", list, "Open-loop input sequence")->delimiter(',')->excludes(fbo);
  add_output(sim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*convert) return cmd_convert(g, network, out);
    if (*refine) return cmd_refine(g, network, second, out);
    if (*quotient) return cmd_quotient(g, network, second, classes_path, out);
    if (*stab) return cmd_stabilize(g, network, list, direct, out);
    if (*opt) return cmd_optctl(g, network, second, x0, horizon, direct, out);
    if (*ben) return cmd_bench(g, bench, out);
    if (*sim) return cmd_simulate(g, network, x0, feedback_path, steps, list, out);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.exit_code;
  }
  return 1;
}
