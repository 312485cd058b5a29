#include "bcnq/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <new>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace bcnq::bench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Row r of the truth table stores variable v (u_1..u_m, x_1..x_n, most
// significant first) as bit (n+m-1-v) of r, with bit 0 meaning "true".
bool variable_value(std::size_t row, std::size_t var, std::size_t width) {
  return ((row >> (width - 1 - var)) & 1u) == 0;
}

Bcn random_nk(const BenchConfig& cfg, std::mt19937_64& rng) {
  const std::size_t n = cfg.n_bits, m = cfg.m_bits, width = n + m;
  const std::size_t k = std::min(cfg.in_degree, width);

  std::vector<std::size_t> nodes(width);
  std::iota(nodes.begin(), nodes.end(), std::size_t{0});

  std::vector<std::vector<std::size_t>> reads(n);
  std::vector<std::vector<bool>> tables(n);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < n; ++i) {
    std::sample(nodes.begin(), nodes.end(), std::back_inserter(reads[i]), k, rng);
    tables[i].resize(std::size_t{1} << k);
    for (std::size_t e = 0; e < tables[i].size(); ++e) tables[i][e] = coin(rng);
  }

  TruthTable tt{n, m, {}};
  tt.rows.resize(std::size_t{1} << width, std::vector<bool>(n));
  for (std::size_t r = 0; r < tt.rows.size(); ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t entry = 0;
      for (std::size_t v : reads[i]) entry = (entry << 1) | (variable_value(r, v, width) ? 1 : 0);
      tt.rows[r][i] = tables[i][entry];
    }
  }
  return from_truth_table(tt);
}

Bcn random_uniform(const BenchConfig& cfg, std::mt19937_64& rng) {
  const std::size_t n_states = std::size_t{1} << cfg.n_bits;
  const std::size_t n_inputs = std::size_t{1} << cfg.m_bits;
  std::uniform_int_distribution<std::size_t> pick(1, n_states);
  std::vector<std::size_t> columns(n_states * n_inputs);
  for (auto& c : columns) c = pick(rng);
  return Bcn(n_states, n_inputs, std::move(columns));
}

std::string describe(const StabilizationOutcome& outcome) {
  if (const auto* fb = std::get_if<StateFeedback>(&outcome))
    return "stabilizable settling_bound=" + std::to_string(fb->settling_bound);
  return "not stabilizable from " +
         std::to_string(std::get<NotStabilizable>(outcome).states.size()) + " states";
}

bool same_outcome(const StabilizationOutcome& a, const StabilizationOutcome& b) {
  if (a.index() != b.index()) return false;
  if (const auto* fa = std::get_if<StateFeedback>(&a)) {
    const auto& fb = std::get<StateFeedback>(b);
    return fa->k == fb.k && fa->settling_bound == fb.settling_bound;
  }
  return std::get<NotStabilizable>(a).states == std::get<NotStabilizable>(b).states;
}

BenchRecord run_stabilization(std::size_t instance, const Bcn& bcn, std::size_t k,
                              std::mt19937_64& rng) {
  BenchRecord rec;
  rec.instance = instance;
  rec.task = "stabilize k=" + std::to_string(k);
  rec.n_states = bcn.n_states();
  if (k == 0 || k > bcn.n_states()) {
    rec.error = "target size out of range";
    return rec;
  }
  std::vector<std::size_t> states(bcn.n_states());
  std::iota(states.begin(), states.end(), std::size_t{1});
  std::vector<std::size_t> chosen;
  std::sample(states.begin(), states.end(), std::back_inserter(chosen), k, rng);
  const StateSet target(chosen.begin(), chosen.end());

  auto t0 = Clock::now();
  const StabilizationOutcome direct = stabilize(bcn, target);
  rec.direct_seconds = seconds_since(t0);

  t0 = Clock::now();
  const QuotientStabilization via = stabilize_via_quotient(bcn, target);
  rec.quotient_seconds = seconds_since(t0);

  rec.quotient_states = via.quotient.reduced.n_states();
  rec.results_match = same_outcome(direct, via.lifted);
  rec.outcome = describe(direct);
  return rec;
}

BenchRecord run_optimal(std::size_t instance, const Bcn& bcn, std::size_t horizon,
                        std::mt19937_64& rng) {
  BenchRecord rec;
  rec.instance = instance;
  rec.task = "optctl T=" + std::to_string(horizon);
  rec.n_states = bcn.n_states();
  const std::size_t x0 = std::uniform_int_distribution<std::size_t>(1, bcn.n_states())(rng);
  const CostSpec cost = benchmark_cost(bcn.n_states(), bcn.n_inputs());

  auto t0 = Clock::now();
  const OptimalSolution direct = optimal_control(bcn, cost, x0, horizon);
  rec.direct_seconds = seconds_since(t0);

  t0 = Clock::now();
  const QuotientOptimalControl via = optimal_via_quotient(bcn, cost, x0, horizon);
  rec.quotient_seconds = seconds_since(t0);

  rec.quotient_states = via.quotient.reduced.n_states();
  rec.results_match = direct.cost == via.solution.cost && direct.inputs == via.solution.inputs;
  rec.outcome = "x0=" + std::to_string(x0) + " J*=" + direct.cost.str();
  return rec;
}

// Every instance draws from its own generator so that results do not depend
// on scheduling.
std::vector<BenchRecord> run_instance(const BenchConfig& cfg, std::size_t instance) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(instance)};
  std::mt19937_64 rng(seq);
  std::vector<BenchRecord> out;
  auto failed = [&](const std::string& task, const std::string& what) {
    BenchRecord rec;
    rec.instance = instance;
    rec.task = task;
    rec.error = what;
    out.push_back(std::move(rec));
  };

  std::optional<Bcn> bcn;
  try {
    bcn = random_network(cfg, rng);
  } catch (const std::bad_alloc&) {
    failed("generate", "out of memory");
    return out;
  }

  for (std::size_t k : cfg.target_sizes) {
    const std::string task = "stabilize k=" + std::to_string(k);
    try {
      out.push_back(run_stabilization(instance, *bcn, k, rng));
    } catch (const std::bad_alloc&) {
      failed(task, "out of memory");
    } catch (const std::exception& e) {
      failed(task, e.what());
    }
  }
  const std::string task = "optctl T=" + std::to_string(cfg.horizon);
  try {
    out.push_back(run_optimal(instance, *bcn, cfg.horizon, rng));
  } catch (const std::bad_alloc&) {
    failed(task, "out of memory");
  } catch (const std::exception& e) {
    failed(task, e.what());
  }
  return out;
}

std::string format_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

} // namespace

bool BenchReport::all_match() const {
  return std::all_of(records.begin(), records.end(),
                     [](const BenchRecord& r) { return r.error.empty() && r.results_match; });
}

void check_config(const BenchConfig& config) {
  if (config.n_bits == 0 || config.m_bits == 0)
    throw std::invalid_argument("bench needs at least one state and one input bit");
  if (config.n_bits + config.m_bits > 24)
    throw std::invalid_argument("n + m must not exceed 24 bits");
}

Bcn random_network(const BenchConfig& config, std::mt19937_64& rng) {
  check_config(config);
  return config.model == RandomModel::nk ? random_nk(config, rng) : random_uniform(config, rng);
}

CostSpec benchmark_cost(std::size_t n_states, std::size_t n_inputs) {
  CostSpec cost;
  cost.l = RationalMatrix(n_inputs, n_states);
  cost.g.assign(n_states, Rational(0));
  // u_1 = 1 on the first half of the inputs, x_1 = 0 on the second half of
  // the states.
  for (std::size_t u = 0; u < n_inputs; ++u)
    for (std::size_t x = 0; x < n_states; ++x) cost.l(u, x) = u < n_inputs / 2 ? 1 : 0;
  for (std::size_t x = n_states / 2; x < n_states; ++x) cost.g[x] = 5;
  return cost;
}

BenchReport run_bench(const BenchConfig& config) {
  if (config.count > 0) check_config(config);
  BenchReport report{config, {}};
  std::vector<std::vector<BenchRecord>> per_instance(config.count);

  const std::size_t workers = std::max<std::size_t>(1, std::min(config.jobs, config.count));
  if (workers == 1) {
    for (std::size_t i = 0; i < config.count; ++i) per_instance[i] = run_instance(config, i + 1);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < config.count; i = next++)
          per_instance[i] = run_instance(config, i + 1);
      });
    for (auto& t : pool) t.join();
  }

  for (auto& recs : per_instance)
    for (auto& r : recs) report.records.push_back(std::move(r));
  return report;
}

std::string to_text(const BenchReport& report, bool with_timing) {
  const auto& c = report.config;
  std::ostringstream out;
  out << "# bench seed=" << c.seed << " count=" << c.count << " n=" << c.n_bits << " m=" << c.m_bits
      << " model=" << (c.model == RandomModel::nk ? "nk" : "uniform") << " T=" << c.horizon << "\n";
  out << "instance\ttask\tN\tquotient\t";
  if (with_timing) out << "direct_s\tquotient_s\t";
  out << "match\toutcome\n";
  for (const auto& r : report.records) {
    out << r.instance << '\t' << r.task << '\t' << r.n_states << '\t' << r.quotient_states << '\t';
    if (with_timing)
      out << format_seconds(r.direct_seconds) << '\t' << format_seconds(r.quotient_seconds) << '\t';
    if (!r.error.empty())
      out << "error\t" << r.error << '\n';
    else
      out << (r.results_match ? "yes" : "NO") << '\t' << r.outcome << '\n';
  }
  out << "# " << (report.all_match() ? "all instances match" : "MISMATCH or error") << "\n";
  return out.str();
}

std::string to_json(const BenchReport& report, bool with_timing) {
  using nlohmann::json;
  const auto& c = report.config;
  json j;
  j["config"] = {{"seed", c.seed},
                 {"count", c.count},
                 {"n_bits", c.n_bits},
                 {"m_bits", c.m_bits},
                 {"target_sizes", c.target_sizes},
                 {"horizon", c.horizon},
                 {"model", c.model == RandomModel::nk ? "nk" : "uniform"},
                 {"in_degree", c.in_degree}};
  j["records"] = json::array();
  for (const auto& r : report.records) {
    json rec = {{"instance", r.instance},
                {"task", r.task},
                {"n_states", r.n_states},
                {"quotient_states", r.quotient_states},
                {"match", r.results_match},
                {"outcome", r.outcome}};
    if (with_timing) {
      rec["direct_seconds"] = r.direct_seconds;
      rec["quotient_seconds"] = r.quotient_seconds;
    }
    if (!r.error.empty()) rec["error"] = r.error;
    j["records"].push_back(std::move(rec));
  }
  j["all_match"] = report.all_match();
  return j.dump(2) + "\n";
}

} // namespace bcnq::bench
