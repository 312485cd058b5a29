#include "bcnq/control.hpp"

#include <deque>
#include <limits>
#include <stdexcept>

#include "bcnq/refinement.hpp"

namespace bcnq {

namespace {

constexpr std::size_t unreached = std::numeric_limits<std::size_t>::max();

// preds[x-1] lists (state, input) pairs stepping into x.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> predecessors(const Bcn& bcn) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> preds(bcn.n_states());
  for (std::size_t u = 1; u <= bcn.n_inputs(); ++u)
    for (std::size_t x = 1; x <= bcn.n_states(); ++x)
      preds[bcn.step(x, u) - 1].emplace_back(x, u);
  return preds;
}

void check_target(std::size_t n, const StateSet& target) {
  if (target.empty()) throw std::invalid_argument("target set is empty");
  if (*target.begin() == 0 || *target.rbegin() > n)
    throw std::invalid_argument("target state outside [1, " + std::to_string(n) + "]");
}

} // namespace

Partition target_partition(std::size_t n, const StateSet& target) {
  check_target(n, target);
  std::vector<std::size_t> labels(n, 0);
  for (auto x : target) labels[x - 1] = 1;
  return Partition::from_class_vector(labels);
}

StateSet control_invariant_subset(const Bcn& bcn, const StateSet& target) {
  check_target(bcn.n_states(), target);
  const std::size_t n = bcn.n_states();
  const auto preds = predecessors(bcn);
  std::vector<bool> inside(n, false);
  for (auto x : target) inside[x - 1] = true;
  // staying[x-1] = number of inputs keeping x inside the current set.
  std::vector<std::size_t> staying(n, 0);
  std::deque<std::size_t> dropped;
  for (auto x : target) {
    for (std::size_t u = 1; u <= bcn.n_inputs(); ++u)
      if (inside[bcn.step(x, u) - 1]) ++staying[x - 1];
    if (staying[x - 1] == 0) dropped.push_back(x);
  }
  for (auto x : dropped) inside[x - 1] = false;
  while (!dropped.empty()) {
    const std::size_t y = dropped.front();
    dropped.pop_front();
    for (const auto& [x, u] : preds[y - 1]) {
      if (!inside[x - 1]) continue;
      if (--staying[x - 1] == 0) {
        inside[x - 1] = false;
        dropped.push_back(x);
      }
    }
  }
  StateSet core;
  for (std::size_t x = 1; x <= n; ++x)
    if (inside[x - 1]) core.insert(x);
  return core;
}

StabilizationOutcome stabilize(const Bcn& bcn, const StateSet& target) {
  const std::size_t n = bcn.n_states();
  const StateSet core = control_invariant_subset(bcn, target);
  const auto preds = predecessors(bcn);

  std::vector<std::size_t> layer(n, unreached);
  std::deque<std::size_t> frontier;
  for (auto x : core) {
    layer[x - 1] = 0;
    frontier.push_back(x);
  }
  while (!frontier.empty()) {
    const std::size_t y = frontier.front();
    frontier.pop_front();
    for (const auto& [x, u] : preds[y - 1])
      if (layer[x - 1] == unreached) {
        layer[x - 1] = layer[y - 1] + 1;
        frontier.push_back(x);
      }
  }

  NotStabilizable failure;
  for (std::size_t x = 1; x <= n; ++x)
    if (layer[x - 1] == unreached) failure.states.insert(x);
  if (!failure.states.empty()) return failure;

  std::vector<std::size_t> inputs(n);
  std::size_t bound = 0;
  for (std::size_t x = 1; x <= n; ++x) {
    std::size_t best = 0;
    std::size_t best_layer = unreached;
    for (std::size_t u = 1; u <= bcn.n_inputs(); ++u) {
      const std::size_t l = layer[bcn.step(x, u) - 1];
      if (l < best_layer) {
        best = u;
        best_layer = l;
      }
    }
    inputs[x - 1] = best;
    bound = std::max(bound, layer[x - 1]);
  }
  return StateFeedback{LogicalMatrix(bcn.n_inputs(), std::move(inputs)), bound};
}

StateFeedback lift_feedback(const StateFeedback& fb, const ClassMatrix& c) {
  if (fb.k.cols() != c.n_classes())
    throw DimensionError("feedback acts on " + std::to_string(fb.k.cols()) +
                         " states, class matrix has " + std::to_string(c.n_classes()) +
                         " classes");
  return StateFeedback{stp(fb.k, c.c), fb.settling_bound};
}

std::vector<std::size_t> closed_loop(const Bcn& bcn, const StateFeedback& fb, std::size_t x0,
                                     std::size_t steps) {
  if (fb.k.cols() != bcn.n_states() || fb.k.rows() != bcn.n_inputs())
    throw DimensionError("feedback does not match the network");
  std::vector<std::size_t> xs{x0};
  for (std::size_t t = 0; t < steps; ++t) xs.push_back(bcn.step(xs.back(), fb.input_for(xs.back())));
  return xs;
}

std::optional<std::size_t> entry_time(const Bcn& bcn, const StateFeedback& fb,
                                      const StateSet& target, std::size_t x0,
                                      std::size_t horizon) {
  const auto xs = closed_loop(bcn, fb, x0, horizon);
  std::size_t t = xs.size();
  while (t > 0 && target.contains(xs[t - 1])) --t;
  if (t == xs.size()) return std::nullopt;
  return t;
}

QuotientStabilization stabilize_via_quotient(const Bcn& bcn, const StateSet& target,
                                             ClassOrder order) {
  const Partition seed = target_partition(bcn.n_states(), target);
  const Partition relation = refine(bcn, seed, false).partition;
  QuotientSystem quotient = build_quotient(bcn, relation, order);
  StateSet quotient_target;
  for (auto x : target) quotient_target.insert(quotient.c.class_of(x));

  StabilizationOutcome outcome = stabilize(quotient.reduced, quotient_target);
  StabilizationOutcome lifted;
  if (const auto* fb = std::get_if<StateFeedback>(&outcome)) {
    lifted = lift_feedback(*fb, quotient.c);
  } else {
    const auto& bad = std::get<NotStabilizable>(outcome).states;
    NotStabilizable preimage;
    for (std::size_t x = 1; x <= bcn.n_states(); ++x)
      if (bad.contains(quotient.c.class_of(x))) preimage.states.insert(x);
    lifted = std::move(preimage);
  }
  return {std::move(quotient), std::move(quotient_target), std::move(outcome), std::move(lifted)};
}

// ---------------------------------------------------------------------------

void CostSpec::validate() const {
  const std::size_t n = n_states();
  const std::size_t m = n_inputs();
  if (n == 0 || m == 0) throw DimensionError("cost needs at least one state and one input");
  if (l.cols() != n)
    throw DimensionError("stage cost has " + std::to_string(l.cols()) + " columns, expected " +
                         std::to_string(n));
  if (theta) {
    if (theta->size() != m * n)
      throw DimensionError("theta has " + std::to_string(theta->size()) +
                           " entries, expected " + std::to_string(m * n));
    for (std::size_t u = 1; u <= m; ++u)
      for (std::size_t x = 1; x <= n; ++x)
        if ((*theta)[(u - 1) * n + x - 1] != stage(u, x))
          throw IllDefinedCost("theta disagrees with l at input " + std::to_string(u) +
                               ", state " + std::to_string(x));
  }
  if (mu) {
    if (mu->size() != n)
      throw DimensionError("mu has " + std::to_string(mu->size()) + " entries, expected " +
                           std::to_string(n));
    for (std::size_t x = 1; x <= n; ++x)
      if ((*mu)[x - 1] != terminal(x))
        throw IllDefinedCost("mu disagrees with g at state " + std::to_string(x));
  }
}

Partition cost_partition(const CostSpec& cost) {
  cost.validate();
  std::vector<std::vector<Rational>> signature(cost.n_states());
  for (std::size_t x = 1; x <= cost.n_states(); ++x) {
    auto& s = signature[x - 1];
    s.push_back(cost.terminal(x));
    for (std::size_t u = 1; u <= cost.n_inputs(); ++u) s.push_back(cost.stage(u, x));
  }
  return Partition::from_labels<std::vector<Rational>>(signature);
}

CostSpec project_cost(const CostSpec& cost, const ClassMatrix& c) {
  cost.validate();
  const std::size_t n = cost.n_states();
  const std::size_t m = cost.n_inputs();
  const std::size_t nq = c.n_classes();
  if (c.n_states() != n)
    throw DimensionError("class matrix has " + std::to_string(c.n_states()) +
                         " columns, cost has " + std::to_string(n) + " states");

  CostSpec out{RationalMatrix(m, nq), std::vector<Rational>(nq), std::nullopt, std::nullopt};
  std::vector<bool> set(nq + 1, false);
  for (std::size_t x = 1; x <= n; ++x) {
    const std::size_t q = c.class_of(x);
    if (!set[q]) {
      set[q] = true;
      out.g[q - 1] = cost.terminal(x);
      for (std::size_t u = 1; u <= m; ++u) out.l(u - 1, q - 1) = cost.stage(u, x);
      continue;
    }
    if (out.g[q - 1] != cost.terminal(x))
      throw IllDefinedCost("terminal cost is not constant on class " + std::to_string(q) +
                           " (state " + std::to_string(x) + ")");
    for (std::size_t u = 1; u <= m; ++u)
      if (out.l(u - 1, q - 1) != cost.stage(u, x))
        throw IllDefinedCost("stage cost for input " + std::to_string(u) +
                             " is not constant on class " + std::to_string(q) + " (state " +
                             std::to_string(x) + ")");
  }

  // Linear form: mu_R = mu C^+ and theta'_i = theta_i C^+, with mu = g and
  // theta_i = l(i, .) when the caller gave no explicit form.
  const RationalMatrix pinv = pseudoinverse(c.c);
  const std::vector<Rational>& mu = cost.mu ? *cost.mu : cost.g;
  std::vector<Rational> mu_r(nq);
  std::vector<Rational> theta_r(m * nq);
  for (std::size_t x = 1; x <= n; ++x) {
    const std::size_t q = c.class_of(x);
    const Rational& w = pinv(x - 1, q - 1);
    mu_r[q - 1] += mu[x - 1] * w;
    for (std::size_t u = 1; u <= m; ++u) {
      const Rational& th = cost.theta ? (*cost.theta)[(u - 1) * n + x - 1] : cost.stage(u, x);
      theta_r[(u - 1) * nq + q - 1] += th * w;
    }
  }
  out.mu = std::move(mu_r);
  out.theta = std::move(theta_r);
  out.validate();
  return out;
}

OptimalSolution optimal_control(const Bcn& bcn, const CostSpec& cost, std::size_t x0,
                                std::size_t horizon) {
  cost.validate();
  const std::size_t n = bcn.n_states();
  const std::size_t m = bcn.n_inputs();
  if (cost.n_states() != n || cost.n_inputs() != m)
    throw DimensionError("cost is for " + std::to_string(cost.n_states()) + " states and " +
                         std::to_string(cost.n_inputs()) + " inputs, network has " +
                         std::to_string(n) + " and " + std::to_string(m));
  if (x0 == 0 || x0 > n) throw DimensionError("initial state " + std::to_string(x0) + " out of range");

  OptimalSolution sol;
  sol.values.assign(horizon + 1, std::vector<Rational>(n));
  sol.policy.assign(horizon, std::vector<std::size_t>(n, 0));
  sol.values[horizon] = cost.g;
  for (std::size_t t = horizon; t-- > 0;) {
    const auto& next = sol.values[t + 1];
    for (std::size_t x = 1; x <= n; ++x) {
      std::size_t best = 0;
      Rational best_value;
      for (std::size_t u = 1; u <= m; ++u) {
        Rational v = cost.stage(u, x) + next[bcn.step(x, u) - 1];
        if (best == 0 || v < best_value) {
          best = u;
          best_value = std::move(v);
        }
      }
      sol.values[t][x - 1] = std::move(best_value);
      sol.policy[t][x - 1] = best;
    }
  }
  std::size_t x = x0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::size_t u = sol.policy[t][x - 1];
    sol.inputs.push_back(u);
    x = bcn.step(x, u);
  }
  sol.cost = sol.values[0][x0 - 1];
  return sol;
}

Rational evaluate_cost(const Bcn& bcn, const CostSpec& cost, std::size_t x0,
                       const std::vector<std::size_t>& inputs) {
  Rational j = 0;
  std::size_t x = x0;
  for (auto u : inputs) {
    j += cost.stage(u, x);
    x = bcn.step(x, u);
  }
  return j + cost.terminal(x);
}

QuotientOptimalControl optimal_via_quotient(const Bcn& bcn, const CostSpec& cost,
                                            std::size_t x0, std::size_t horizon,
                                            ClassOrder order) {
  const Partition seed = cost_partition(cost);
  if (seed.n() != bcn.n_states())
    throw DimensionError("cost is for " + std::to_string(seed.n()) + " states, network has " +
                         std::to_string(bcn.n_states()));
  const Partition relation = refine(bcn, seed, false).partition;
  QuotientSystem quotient = build_quotient(bcn, relation, order);
  CostSpec projected = project_cost(cost, quotient.c);
  const std::size_t qx0 = quotient.c.class_of(x0);
  OptimalSolution sol = optimal_control(quotient.reduced, projected, qx0, horizon);
  if (evaluate_cost(bcn, cost, x0, sol.inputs) != sol.cost)
    throw std::logic_error("quotient-optimal inputs do not reproduce the cost on the network");
  return {std::move(quotient), std::move(projected), qx0, std::move(sol)};
}

} // namespace bcnq
