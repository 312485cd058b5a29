// extern "C" wrapper around the C++ core. Exceptions never cross this
// boundary: each entry point translates them into a status code and stores
// the message for bcnq_last_error().

#include "bcnq/bcnq.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bcnq/bench.hpp"
#include "bcnq/control.hpp"
#include "bcnq/error.hpp"
#include "bcnq/io.hpp"
#include "bcnq/partition.hpp"
#include "bcnq/quotient.hpp"
#include "bcnq/refinement.hpp"

struct bcnq_network {
  bcnq::Bcn bcn;
};

struct bcnq_partition {
  bcnq::Partition partition;
};

struct bcnq_quotient {
  bcnq::QuotientSystem quotient;
};

struct bcnq_feedback {
  bcnq::StabilizationOutcome outcome;
  std::size_t n_states = 0;
  std::optional<bcnq::ClassMatrix> classes;
  std::optional<bcnq::StateFeedback> quotient_feedback;
  bool inconclusive = false;
};

struct bcnq_cost {
  bcnq::CostSpec cost;
};

struct bcnq_solution {
  bcnq::io::SolutionFile file;
  std::size_t quotient_states = 0;
};

namespace {

thread_local std::string last_error;

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

bcnq_status fail(bcnq_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename Fn>
bcnq_status guarded(Fn&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const bcnq::ParseError& e) {
    return fail(BCNQ_PARSE, e.what());
  } catch (const bcnq::CongruenceViolation& e) {
    return fail(BCNQ_CONGRUENCE, e.what());
  } catch (const bcnq::IllDefinedCost& e) {
    return fail(BCNQ_ILL_DEFINED, e.what());
  } catch (const IoError& e) {
    return fail(BCNQ_IO, e.what());
  } catch (const bcnq::Error& e) {
    return fail(BCNQ_INVALID_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BCNQ_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(BCNQ_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BCNQ_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BCNQ_INTERNAL, e.what());
  } catch (...) {
    return fail(BCNQ_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

#define REQUIRE_NONNULL(p) require((p) != nullptr, #p " must not be NULL")

// Reads a file with one of the io readers; parse errors gain the path.
template <typename Reader>
auto read_path(const char* path, Reader reader) {
  REQUIRE_NONNULL(path);
  std::ifstream in(path);
  if (!in) throw IoError(std::string("cannot open ") + path);
  try {
    return reader(in);
  } catch (const bcnq::ParseError& e) {
    throw bcnq::ParseError(e.detail(), e.line(), path);
  }
}

template <typename Reader>
auto read_text(const char* text, Reader reader) {
  REQUIRE_NONNULL(text);
  std::istringstream in(text);
  return reader(in);
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Writer, typename Value>
bcnq_status emit_text(char** out, Writer writer, const Value& value) {
  REQUIRE_NONNULL(out);
  std::ostringstream s;
  writer(s, value);
  *out = duplicate(s.str());
  return BCNQ_OK;
}

bcnq::ClassOrder to_order(bcnq_class_order order) {
  switch (order) {
  case BCNQ_ORDER_FIRST_OCCURRENCE: return bcnq::ClassOrder::first_occurrence;
  case BCNQ_ORDER_SORTED_ROWS: return bcnq::ClassOrder::sorted_rows;
  }
  throw std::invalid_argument("unknown class order");
}

bcnq::StateSet to_state_set(const size_t* states, size_t count) {
  require(states != nullptr || count == 0, "target must not be NULL");
  return bcnq::StateSet(states, states + count);
}

const bcnq::StateFeedback& feedback_of(const bcnq_feedback* fb) {
  REQUIRE_NONNULL(fb);
  const auto* k = std::get_if<bcnq::StateFeedback>(&fb->outcome);
  if (!k) throw std::invalid_argument("the network is not stabilizable; there is no feedback");
  return *k;
}

} // namespace

extern "C" {

const char* bcnq_last_error(void) { return last_error.c_str(); }

const char* bcnq_status_name(bcnq_status status) {
  switch (status) {
  case BCNQ_OK: return "ok";
  case BCNQ_INVALID_ARGUMENT: return "invalid argument";
  case BCNQ_PARSE: return "parse error";
  case BCNQ_IO: return "i/o error";
  case BCNQ_CONGRUENCE: return "congruence violation";
  case BCNQ_NOT_STABILIZABLE: return "not stabilizable";
  case BCNQ_ILL_DEFINED: return "ill-defined cost";
  case BCNQ_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void bcnq_string_free(char* s) { std::free(s); }

// ---- networks ---------------------------------------------------------------

bcnq_status bcnq_network_load(const char* path, bcnq_network** out) {
  return guarded([&] {
    REQUIRE_NONNULL(out);
    *out = new bcnq_network{read_path(path, bcnq::io::read_network)};
    return BCNQ_OK;
  });
}

bcnq_status bcnq_network_parse(const char* text, bcnq_network** out) {
  return guarded([&] {
    REQUIRE_NONNULL(out);
    *out = new bcnq_network{read_text(text, bcnq::io::read_network)};
    return BCNQ_OK;
  });
}

bcnq_status bcnq_network_load_truth_table(const char* path, bcnq_network** out) {
  return guarded([&] {
    REQUIRE_NONNULL(out);
    const auto tt = read_path(path, bcnq::io::read_truth_table);
    *out = new bcnq_network{bcnq::from_truth_table(tt)};
    return BCNQ_OK;
  });
}

bcnq_status bcnq_network_parse_truth_table(const char* text, bcnq_network** out) {
  return guarded([&] {
    REQUIRE_NONNULL(out);
    const auto tt = read_text(text, bcnq::io::read_truth_table);
    *out = new bcnq_network{bcnq::from_truth_table(tt)};
    return BCNQ_OK;
  });
}

bcnq_status bcnq_network_from_columns(size_t n_states, size_t n_inputs, const size_t* columns,
                                      bcnq_network** out) {
  return guarded([&] {
    REQUIRE_NONNULL(columns);
    REQUIRE_NONNULL(out);
    std::vector<std::size_t> cols(columns, columns + n_states * n_inputs);
    *out = new bcnq_network{bcnq::Bcn(n_states, n_inputs, std::move(cols))};
    return BCNQ_OK;
  });
}

void bcnq_network_free(bcnq_network* net) { delete net; }

size_t bcnq_network_states(const bcnq_network* net) { return net ? net->bcn.n_states() : 0; }
size_t bcnq_network_inputs(const bcnq_network* net) { return net ? net->bcn.n_inputs() : 0; }

bcnq_status bcnq_network_step(const bcnq_network* net, size_t x, size_t u, size_t* out) {
  return guarded([&] {
    REQUIRE_NONNULL(net);
    REQUIRE_NONNULL(out);
    *out = net->bcn.step(x, u);
    return BCNQ_OK;
  });
}

bcnq_status bcnq_network_columns(const bcnq_network* net, size_t* buffer, size_t capacity) {
  return guarded([&] {
    REQUIRE_NONNULL(net);
    REQUIRE_NONNULL(buffer);
    const auto cols = net->bcn.matrix().indices();
    require(capacity >= cols.size(), "buffer too small for the columns");
    std::copy(cols.begin(), cols.end(), buffer);
    return BCNQ_OK;
  });
}

bcnq_status bcnq_network_to_text(const bcnq_network* net, char** out) {
  return guarded([&] {
    REQUIRE_NONNULL(net);
    return emit_text(out, bcnq::io::write_network, net->bcn);
  });
}

// ---- partitions -------------------------------------------------------------

bcnq_status bcnq_partition_load(const char* path, bcnq_partition** out) {
  return guarded([&] {
    REQUIRE_NONNULL(out);
    *out = new bcnq_partition{read_path(path, bcnq::io::read_partition)};
    return BCNQ_OK;
  });
}

bcnq_status bcnq_partition_parse(const char* text, bcnq_partition** out) {
  return guarded([&] {
    REQUIRE_NONNULL(out);
    *out = new bcnq_partition{read_text(text, bcnq::io::read_partition)};
    return BCNQ_OK;
  });
}

bcnq_status bcnq_partition_from_labels(size_t n, const size_t* labels, bcnq_partition** out) {
  return guarded([&] {
    require(labels != nullptr || n == 0, "labels must not be NULL");
    REQUIRE_NONNULL(out);
    *out = new bcnq_partition{
        bcnq::Partition::from_class_vector(std::span<const std::size_t>(labels, n))};
    return BCNQ_OK;
  });
}

bcnq_status bcnq_partition_target(size_t n, const size_t* target, size_t count,
                                  bcnq_partition** out) {
  return guarded([&] {
    REQUIRE_NONNULL(out);
    *out = new bcnq_partition{bcnq::target_partition(n, to_state_set(target, count))};
    return BCNQ_OK;
  });
}

void bcnq_partition_free(bcnq_partition* p) { delete p; }

size_t bcnq_partition_states(const bcnq_partition* p) { return p ? p->partition.n() : 0; }
size_t bcnq_partition_blocks(const bcnq_partition* p) { return p ? p->partition.size() : 0; }

bcnq_status bcnq_partition_block_of(const bcnq_partition* p, size_t x, size_t* out) {
  return guarded([&] {
    REQUIRE_NONNULL(p);
    REQUIRE_NONNULL(out);
    require(x >= 1 && x <= p->partition.n(), "state out of range");
    *out = p->partition.block_of(x);
    return BCNQ_OK;
  });
}

bcnq_status bcnq_partition_to_text(const bcnq_partition* p, char** out) {
  return guarded([&] {
    REQUIRE_NONNULL(p);
    return emit_text(out, bcnq::io::write_partition, p->partition);
  });
}

bcnq_status bcnq_refine(const bcnq_network* net, const bcnq_partition* seed,
                        bcnq_partition** out, size_t* k_star) {
  return guarded([&] {
    REQUIRE_NONNULL(net);
    REQUIRE_NONNULL(seed);
    REQUIRE_NONNULL(out);
    auto result = bcnq::refine(net->bcn, seed->partition, false);
    if (k_star) *k_star = result.trace.k_star;
    *out = new bcnq_partition{std::move(result.partition)};
    return BCNQ_OK;
  });
}

bcnq_status bcnq_check_congruence(const bcnq_network* net, const bcnq_partition* p, int* holds,
                                  size_t witness[3]) {
  return guarded([&] {
    REQUIRE_NONNULL(net);
    REQUIRE_NONNULL(p);
    REQUIRE_NONNULL(holds);
    const auto check = bcnq::is_congruence(net->bcn, p->partition);
    *holds = check.holds ? 1 : 0;
    if (!check.holds && witness && check.witness) {
      witness[0] = check.witness->input;
      witness[1] = check.witness->a;
      witness[2] = check.witness->b;
    }
    return BCNQ_OK;
  });
}

// ---- quotients --------------------------------------------------------------

bcnq_status bcnq_quotient_build(const bcnq_network* net, const bcnq_partition* p,
                                bcnq_class_order order, bcnq_quotient** out) {
  return guarded([&] {
    REQUIRE_NONNULL(net);
    REQUIRE_NONNULL(p);
    REQUIRE_NONNULL(out);
    *out = new bcnq_quotient{bcnq::build_quotient(net->bcn, p->partition, to_order(order))};
    return BCNQ_OK;
  });
}

void bcnq_quotient_free(bcnq_quotient* q) { delete q; }

size_t bcnq_quotient_classes(const bcnq_quotient* q) { return q ? q->quotient.c.n_classes() : 0; }

bcnq_status bcnq_quotient_class_of(const bcnq_quotient* q, size_t x, size_t* out) {
  return guarded([&] {
    REQUIRE_NONNULL(q);
    REQUIRE_NONNULL(out);
    require(x >= 1 && x <= q->quotient.c.n_states(), "state out of range");
    *out = q->quotient.c.class_of(x);
    return BCNQ_OK;
  });
}

bcnq_status bcnq_quotient_network(const bcnq_quotient* q, bcnq_network** out) {
  return guarded([&] {
    REQUIRE_NONNULL(q);
    REQUIRE_NONNULL(out);
    *out = new bcnq_network{q->quotient.reduced};
    return BCNQ_OK;
  });
}

bcnq_status bcnq_quotient_classes_to_text(const bcnq_quotient* q, char** out) {
  return guarded([&] {
    REQUIRE_NONNULL(q);
    return emit_text(out, bcnq::io::write_classes, q->quotient.c);
  });
}

// ---- set stabilization ------------------------------------------------------

bcnq_status bcnq_stabilize(const bcnq_network* net, const size_t* target, size_t count,
                           int via_quotient, bcnq_class_order order, bcnq_feedback** out) {
  return guarded([&] {
    REQUIRE_NONNULL(net);
    REQUIRE_NONNULL(out);
    const auto set = to_state_set(target, count);
    auto fb = std::make_unique<bcnq_feedback>();
    fb->n_states = net->bcn.n_states();
    if (via_quotient) {
      auto via = bcnq::stabilize_via_quotient(net->bcn, set, to_order(order));
      if (std::holds_alternative<bcnq::StateFeedback>(via.lifted)) {
        fb->outcome = std::move(via.lifted);
        fb->classes = via.quotient.c;
        fb->quotient_feedback = std::get<bcnq::StateFeedback>(via.quotient_outcome);
      } else {
        fb->inconclusive = true;
        fb->outcome = bcnq::stabilize(net->bcn, set);
      }
    } else {
      fb->outcome = bcnq::stabilize(net->bcn, set);
    }
    *out = fb.release();
    return BCNQ_OK;
  });
}

namespace {
bcnq_feedback* adopt(bcnq::io::FeedbackFile f) {
  auto fb = std::make_unique<bcnq_feedback>();
  fb->n_states = f.feedback.k.cols();
  fb->outcome = std::move(f.feedback);
  fb->classes = std::move(f.classes);
  fb->quotient_feedback = std::move(f.quotient_feedback);
  return fb.release();
}
} // namespace

bcnq_status bcnq_feedback_load(const char* path, bcnq_feedback** out) {
  return guarded([&] {
    REQUIRE_NONNULL(out);
    *out = adopt(read_path(path, bcnq::io::read_feedback));
    return BCNQ_OK;
  });
}

bcnq_status bcnq_feedback_parse(const char* text, bcnq_feedback** out) {
  return guarded([&] {
    REQUIRE_NONNULL(out);
    *out = adopt(read_text(text, bcnq::io::read_feedback));
    return BCNQ_OK;
  });
}

void bcnq_feedback_free(bcnq_feedback* fb) { delete fb; }

int bcnq_feedback_stabilizable(const bcnq_feedback* fb) {
  return fb && std::holds_alternative<bcnq::StateFeedback>(fb->outcome) ? 1 : 0;
}

int bcnq_feedback_quotient_inconclusive(const bcnq_feedback* fb) {
  return fb && fb->inconclusive ? 1 : 0;
}

size_t bcnq_feedback_states(const bcnq_feedback* fb) { return fb ? fb->n_states : 0; }

size_t bcnq_feedback_quotient_states(const bcnq_feedback* fb) {
  return fb && fb->classes ? fb->classes->n_classes() : 0;
}

size_t bcnq_feedback_settling_bound(const bcnq_feedback* fb) {
  if (!bcnq_feedback_stabilizable(fb)) return 0;
  return std::get<bcnq::StateFeedback>(fb->outcome).settling_bound;
}

bcnq_status bcnq_feedback_input_for(const bcnq_feedback* fb, size_t x, size_t* out) {
  return guarded([&] {
    const auto& k = feedback_of(fb);
    REQUIRE_NONNULL(out);
    require(x >= 1 && x <= k.k.cols(), "state out of range");
    *out = k.input_for(x);
    return BCNQ_OK;
  });
}

bcnq_status bcnq_feedback_unstabilizable(const bcnq_feedback* fb, size_t* buffer,
                                         size_t capacity, size_t* count) {
  return guarded([&] {
    REQUIRE_NONNULL(fb);
    REQUIRE_NONNULL(count);
    const auto* bad = std::get_if<bcnq::NotStabilizable>(&fb->outcome);
    *count = bad ? bad->states.size() : 0;
    if (bad && buffer) {
      std::size_t i = 0;
      for (auto it = bad->states.begin(); it != bad->states.end() && i < capacity; ++it)
        buffer[i++] = *it;
    }
    return BCNQ_OK;
  });
}

bcnq_status bcnq_feedback_to_text(const bcnq_feedback* fb, char** out) {
  return guarded([&] {
    REQUIRE_NONNULL(fb);
    if (!bcnq_feedback_stabilizable(fb))
      return fail(BCNQ_NOT_STABILIZABLE, "the network is not stabilizable; there is no feedback");
    bcnq::io::FeedbackFile f{std::get<bcnq::StateFeedback>(fb->outcome), fb->classes,
                             fb->quotient_feedback};
    return emit_text(out, bcnq::io::write_feedback, f);
  });
}

// ---- simulation -------------------------------------------------------------

bcnq_status bcnq_simulate_feedback(const bcnq_network* net, const bcnq_feedback* fb, size_t x0,
                                   size_t steps, size_t* trajectory) {
  return guarded([&] {
    REQUIRE_NONNULL(net);
    REQUIRE_NONNULL(trajectory);
    const auto& k = feedback_of(fb);
    require(k.k.cols() == net->bcn.n_states() && k.k.rows() == net->bcn.n_inputs(),
            "feedback does not match the network dimensions");
    const auto path = bcnq::closed_loop(net->bcn, k, x0, steps);
    std::copy(path.begin(), path.end(), trajectory);
    return BCNQ_OK;
  });
}

bcnq_status bcnq_simulate_inputs(const bcnq_network* net, size_t x0, const size_t* inputs,
                                 size_t count, size_t* trajectory) {
  return guarded([&] {
    REQUIRE_NONNULL(net);
    REQUIRE_NONNULL(trajectory);
    require(inputs != nullptr || count == 0, "inputs must not be NULL");
    const auto path = net->bcn.trajectory(x0, std::span<const std::size_t>(inputs, count));
    std::copy(path.begin(), path.end(), trajectory);
    return BCNQ_OK;
  });
}

// ---- optimal control --------------------------------------------------------

bcnq_status bcnq_cost_load(const char* path, bcnq_cost** out) {
  return guarded([&] {
    REQUIRE_NONNULL(out);
    *out = new bcnq_cost{read_path(path, bcnq::io::read_cost)};
    return BCNQ_OK;
  });
}

bcnq_status bcnq_cost_parse(const char* text, bcnq_cost** out) {
  return guarded([&] {
    REQUIRE_NONNULL(out);
    *out = new bcnq_cost{read_text(text, bcnq::io::read_cost)};
    return BCNQ_OK;
  });
}

void bcnq_cost_free(bcnq_cost* cost) { delete cost; }

bcnq_status bcnq_cost_partition(const bcnq_cost* cost, bcnq_partition** out) {
  return guarded([&] {
    REQUIRE_NONNULL(cost);
    REQUIRE_NONNULL(out);
    *out = new bcnq_partition{bcnq::cost_partition(cost->cost)};
    return BCNQ_OK;
  });
}

bcnq_status bcnq_optimal_control(const bcnq_network* net, const bcnq_cost* cost, size_t x0,
                                 size_t horizon, int via_quotient, bcnq_class_order order,
                                 bcnq_solution** out) {
  return guarded([&] {
    REQUIRE_NONNULL(net);
    REQUIRE_NONNULL(cost);
    REQUIRE_NONNULL(out);
    require(cost->cost.n_states() == net->bcn.n_states() &&
                cost->cost.n_inputs() == net->bcn.n_inputs(),
            "cost does not match the network dimensions");
    require(x0 >= 1 && x0 <= net->bcn.n_states(), "x0 out of range");
    auto sol = std::make_unique<bcnq_solution>();
    sol->file.n_inputs = net->bcn.n_inputs();
    sol->file.x0 = x0;
    if (via_quotient) {
      auto via = bcnq::optimal_via_quotient(net->bcn, cost->cost, x0, horizon, to_order(order));
      sol->file.quotient_x0 = via.quotient_x0;
      sol->file.solution = std::move(via.solution);
      sol->quotient_states = via.quotient.reduced.n_states();
    } else {
      sol->file.solution = bcnq::optimal_control(net->bcn, cost->cost, x0, horizon);
    }
    *out = sol.release();
    return BCNQ_OK;
  });
}

void bcnq_solution_free(bcnq_solution* sol) { delete sol; }

size_t bcnq_solution_horizon(const bcnq_solution* sol) {
  return sol ? sol->file.solution.inputs.size() : 0;
}

bcnq_status bcnq_solution_inputs(const bcnq_solution* sol, size_t* buffer, size_t capacity) {
  return guarded([&] {
    REQUIRE_NONNULL(sol);
    const auto& inputs = sol->file.solution.inputs;
    require(buffer != nullptr || inputs.empty(), "buffer must not be NULL");
    require(capacity >= inputs.size(), "buffer too small for the inputs");
    std::copy(inputs.begin(), inputs.end(), buffer);
    return BCNQ_OK;
  });
}

bcnq_status bcnq_solution_cost(const bcnq_solution* sol, char** out) {
  return guarded([&] {
    REQUIRE_NONNULL(sol);
    REQUIRE_NONNULL(out);
    *out = duplicate(bcnq::io::format_rational(sol->file.solution.cost));
    return BCNQ_OK;
  });
}

size_t bcnq_solution_quotient_states(const bcnq_solution* sol) {
  return sol ? sol->quotient_states : 0;
}

size_t bcnq_solution_quotient_x0(const bcnq_solution* sol) {
  return sol && sol->file.quotient_x0 ? *sol->file.quotient_x0 : 0;
}

bcnq_status bcnq_solution_to_text(const bcnq_solution* sol, char** out) {
  return guarded([&] {
    REQUIRE_NONNULL(sol);
    return emit_text(out, bcnq::io::write_solution, sol->file);
  });
}

// ---- benchmark --------------------------------------------------------------

void bcnq_bench_defaults(bcnq_bench_config* config) {
  if (!config) return;
  static const size_t default_sizes[] = {1, 100};
  const bcnq::bench::BenchConfig d;
  config->count = d.count;
  config->n_bits = d.n_bits;
  config->m_bits = d.m_bits;
  config->target_sizes = default_sizes;
  config->n_target_sizes = 2;
  config->horizon = d.horizon;
  config->seed = d.seed;
  config->model = 0;
  config->in_degree = d.in_degree;
  config->jobs = d.jobs;
}

bcnq_status bcnq_bench_run(const bcnq_bench_config* config, int json, int with_timing,
                           char** report, int* all_match) {
  return guarded([&] {
    REQUIRE_NONNULL(config);
    REQUIRE_NONNULL(report);
    require(config->target_sizes != nullptr || config->n_target_sizes == 0,
            "target_sizes must not be NULL");
    require(config->model == 0 || config->model == 1, "model must be 0 or 1");
    bcnq::bench::BenchConfig c;
    c.count = config->count;
    c.n_bits = config->n_bits;
    c.m_bits = config->m_bits;
    c.target_sizes.assign(config->target_sizes, config->target_sizes + config->n_target_sizes);
    c.horizon = config->horizon;
    c.seed = config->seed;
    c.model = config->model == 0 ? bcnq::bench::RandomModel::nk : bcnq::bench::RandomModel::uniform;
    c.in_degree = config->in_degree;
    c.jobs = config->jobs;
    const auto result = bcnq::bench::run_bench(c);
    const bool timing = with_timing != 0;
    *report = duplicate(json ? bcnq::bench::to_json(result, timing)
                             : bcnq::bench::to_text(result, timing));
    if (all_match) *all_match = result.all_match() ? 1 : 0;
    return BCNQ_OK;
  });
}

} // extern "C"
